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

#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msdiar {

using Seconds = double;

// Two boundaries closer than this are the same instant.
inline constexpr Seconds kTimeTolerance = 1e-9;

// Half-open span of recording time. Construction rejects start < 0 and
// spans shorter than kTimeTolerance.
class TimeInterval {
 public:
  TimeInterval(Seconds start, Seconds end);

  Seconds start() const { return start_; }
  Seconds end() const { return end_; }
  Seconds duration() const { return end_ - start_; }
  Seconds center() const { return 0.5 * (start_ + end_); }

  bool contains(Seconds t) const { return t >= start_ && t < end_; }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

 private:
  Seconds start_;
  Seconds end_;
};

// Sorted, pairwise-disjoint set of intervals. Neighbours separated by less
// than kTimeTolerance are merged on construction.
class Timeline {
 public:
  Timeline() = default;
  explicit Timeline(std::vector<TimeInterval> intervals);

  const std::vector<TimeInterval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  Seconds duration() const;
  // Inclusive bounds of the support; only valid when non-empty.
  Seconds first_start() const { return intervals_.front().start(); }
  Seconds last_end() const { return intervals_.back().end(); }

  bool contains(Seconds t) const;

  friend bool operator==(const Timeline&, const Timeline&) = default;

 private:
  std::vector<TimeInterval> intervals_;
};

// Minimal disjoint cover of the union of `raw`.
Timeline merge_intervals(std::vector<TimeInterval> raw);

// Same, from unchecked (start, end) pairs; a bad pair raises InputError naming
// its index.
Timeline merge_intervals(std::span<const std::pair<Seconds, Seconds>> raw);

Timeline unite(const Timeline& a, const Timeline& b);
Timeline intersect(const Timeline& a, const Timeline& b);
Timeline subtract(const Timeline& a, const Timeline& b);

// Speaker-labelled timelines. Each speaker's time is a Timeline, so a speaker
// never overlaps itself; different speakers may overlap freely.
class Annotation {
 public:
  struct Entry {
    TimeInterval interval;
    std::string speaker;
  };

  Annotation() = default;

  void add(const TimeInterval& interval, const std::string& speaker);
  void add(const Timeline& timeline, const std::string& speaker);

  const std::map<std::string, Timeline>& tracks() const { return tracks_; }
  std::vector<std::string> speakers() const;
  bool empty() const { return tracks_.empty(); }

  // Empty Timeline for unknown speakers.
  const Timeline& timeline_of(const std::string& speaker) const;

  // Flattened entries sorted by (start, speaker).
  std::vector<Entry> entries() const;

  // Union of all speakers' time.
  Timeline support() const;

  friend bool operator==(const Annotation&, const Annotation&) = default;

 private:
  std::map<std::string, Timeline> tracks_;
};

Annotation crop_annotation(const Annotation& ann, const Timeline& scope);

}  // namespace msdiar
