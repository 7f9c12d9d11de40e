// Copyright (c) 2026 The msdiar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msdiar/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msdiar/error.hpp"

namespace msdiar {

TimeInterval::TimeInterval(Seconds start, Seconds end) : start_(start), end_(end) {
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw InputError("interval boundaries must be finite");
  }
  if (start < 0.0) {
    throw InputError("interval starts before 0: " + std::to_string(start));
  }
  if (end - start < kTimeTolerance) {
    throw InputError("interval [" + std::to_string(start) + ", " + std::to_string(end) +
                     "] is empty or reversed");
  }
}

namespace {

std::vector<TimeInterval> normalize(std::vector<TimeInterval> v) {
  if (v.size() < 2) return v;
  std::sort(v.begin(), v.end(), [](const TimeInterval& a, const TimeInterval& b) {
    return a.start() < b.start() || (a.start() == b.start() && a.end() < b.end());
  });
  std::vector<TimeInterval> out;
  out.reserve(v.size());
  Seconds cur_start = v.front().start();
  Seconds cur_end = v.front().end();
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].start() - cur_end < kTimeTolerance) {
      cur_end = std::max(cur_end, v[i].end());
    } else {
      out.emplace_back(cur_start, cur_end);
      cur_start = v[i].start();
      cur_end = v[i].end();
    }
  }
  out.emplace_back(cur_start, cur_end);
  return out;
}

// Appends [s, e) if it survives the tolerance; merges with the tail if it
// touches it. Used by the sweeps below, which emit in sorted order.
void append(std::vector<TimeInterval>& out, Seconds s, Seconds e) {
  if (e - s < kTimeTolerance) return;
  if (!out.empty() && s - out.back().end() < kTimeTolerance) {
    out.back() = TimeInterval(out.back().start(), std::max(e, out.back().end()));
    return;
  }
  out.emplace_back(s, e);
}

}  // namespace

Timeline::Timeline(std::vector<TimeInterval> intervals)
    : intervals_(normalize(std::move(intervals))) {}

Seconds Timeline::duration() const {
  Seconds total = 0.0;
  for (const auto& iv : intervals_) total += iv.duration();
  return total;
}

bool Timeline::contains(Seconds t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](Seconds v, const TimeInterval& iv) { return v < iv.start(); });
  if (it == intervals_.begin()) return false;
  return std::prev(it)->contains(t);
}

Timeline merge_intervals(std::vector<TimeInterval> raw) { return Timeline(std::move(raw)); }

Timeline merge_intervals(std::span<const std::pair<Seconds, Seconds>> raw) {
  std::vector<TimeInterval> checked;
  checked.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    try {
      checked.emplace_back(raw[i].first, raw[i].second);
    } catch (const InputError& e) {
      throw InputError("interval " + std::to_string(i) + ": " + e.what());
    }
  }
  return Timeline(std::move(checked));
}

Timeline unite(const Timeline& a, const Timeline& b) {
  std::vector<TimeInterval> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return Timeline(std::move(all));
}

Timeline intersect(const Timeline& a, const Timeline& b) {
  std::vector<TimeInterval> out;
  const auto& x = a.intervals();
  const auto& y = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const Seconds s = std::max(x[i].start(), y[j].start());
    const Seconds e = std::min(x[i].end(), y[j].end());
    append(out, s, e);
    if (x[i].end() < y[j].end()) {
      ++i;
    } else {
      ++j;
    }
  }
  return Timeline(std::move(out));
}

Timeline subtract(const Timeline& a, const Timeline& b) {
  std::vector<TimeInterval> out;
  const auto& y = b.intervals();
  std::size_t j = 0;
  for (const auto& iv : a) {
    Seconds cursor = iv.start();
    while (j < y.size() && y[j].end() <= cursor) ++j;
    std::size_t k = j;
    while (k < y.size() && y[k].start() < iv.end()) {
      append(out, cursor, y[k].start());
      cursor = std::max(cursor, y[k].end());
      if (cursor >= iv.end()) break;
      ++k;
    }
    append(out, cursor, iv.end());
  }
  return Timeline(std::move(out));
}

void Annotation::add(const TimeInterval& interval, const std::string& speaker) {
  add(Timeline({interval}), speaker);
}

void Annotation::add(const Timeline& timeline, const std::string& speaker) {
  if (timeline.empty()) return;
  auto [it, inserted] = tracks_.try_emplace(speaker, timeline);
  if (!inserted) it->second = unite(it->second, timeline);
}

std::vector<std::string> Annotation::speakers() const {
  std::vector<std::string> out;
  out.reserve(tracks_.size());
  for (const auto& [spk, _] : tracks_) out.push_back(spk);
  return out;
}

const Timeline& Annotation::timeline_of(const std::string& speaker) const {
  static const Timeline kEmpty;
  auto it = tracks_.find(speaker);
  return it == tracks_.end() ? kEmpty : it->second;
}

std::vector<Annotation::Entry> Annotation::entries() const {
  std::vector<Entry> out;
  for (const auto& [spk, tl] : tracks_) {
    for (const auto& iv : tl) out.push_back({iv, spk});
  }
  std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (a.interval.start() != b.interval.start()) return a.interval.start() < b.interval.start();
    return a.speaker < b.speaker;
  });
  return out;
}

Timeline Annotation::support() const {
  std::vector<TimeInterval> all;
  for (const auto& [_, tl] : tracks_) all.insert(all.end(), tl.begin(), tl.end());
  return Timeline(std::move(all));
}

Annotation crop_annotation(const Annotation& ann, const Timeline& scope) {
  Annotation out;
  for (const auto& [spk, tl] : ann.tracks()) out.add(intersect(tl, scope), spk);
  return out;
}

}  // namespace msdiar
