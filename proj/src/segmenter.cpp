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

#include "msdiar/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msdiar/error.hpp"

namespace msdiar {

void ScaleSpec::validate() const {
  if (!(shift > 0.0) || !(window > 0.0) || shift > window) {
    throw ConfigError("scale needs 0 < shift <= window (window " + std::to_string(window) +
                      ", shift " + std::to_string(shift) + ")");
  }
}

std::vector<Segment> segment_region(const TimeInterval& region, const ScaleSpec& scale,
                                    std::size_t scale_index, std::size_t region_index) {
  scale.validate();
  std::vector<Segment> out;
  // A region shorter than one window is a single segment; the trailing
  // starts would only repeat its tail.
  if (region.duration() < scale.window - kTimeTolerance) {
    out.push_back({region, scale_index, region_index});
    return out;
  }
  // Starts are computed from k rather than accumulated so long regions do not
  // drift.
  for (std::size_t k = 0;; ++k) {
    const Seconds start = region.start() + static_cast<double>(k) * scale.shift;
    if (region.end() - start < kTimeTolerance) break;
    const Seconds end = std::min(start + scale.window, region.end());
    out.push_back({TimeInterval(start, end), scale_index, region_index});
  }
  return out;
}

std::vector<Segment> segment_timeline(const Timeline& speech, const ScaleSpec& scale,
                                      std::size_t scale_index) {
  std::vector<Segment> out;
  std::size_t r = 0;
  for (const auto& region : speech) {
    auto segs = segment_region(region, scale, scale_index, r++);
    out.insert(out.end(), segs.begin(), segs.end());
  }
  return out;
}

std::size_t base_scale_index(std::span<const ScaleSpec> scales) {
  if (scales.empty()) throw ConfigError("no scales configured");
  std::size_t best = 0;
  for (std::size_t s = 1; s < scales.size(); ++s) {
    if (scales[s].window < scales[best].window) best = s;
  }
  return best;
}

std::vector<std::size_t> build_scale_map(std::span<const Seconds> base_centers,
                                         std::span<const Seconds> other_centers) {
  if (base_centers.empty() || other_centers.empty()) {
    throw InputError("scale map needs non-empty segment lists");
  }
  if (!std::is_sorted(base_centers.begin(), base_centers.end()) ||
      !std::is_sorted(other_centers.begin(), other_centers.end())) {
    throw InputError("scale map inputs must be sorted by center");
  }
  std::vector<std::size_t> map;
  map.reserve(base_centers.size());
  for (Seconds c : base_centers) {
    auto hi = std::lower_bound(other_centers.begin(), other_centers.end(), c);
    if (hi == other_centers.begin()) {
      map.push_back(0);
      continue;
    }
    // Earliest segment sharing the left neighbour's center wins ties.
    auto lo = std::lower_bound(other_centers.begin(), other_centers.end(), *std::prev(hi));
    if (hi != other_centers.end() && (*hi - c) < (c - *lo)) {
      map.push_back(static_cast<std::size_t>(hi - other_centers.begin()));
    } else {
      map.push_back(static_cast<std::size_t>(lo - other_centers.begin()));
    }
  }
  return map;
}

std::vector<std::size_t> build_scale_map(std::span<const Segment> base,
                                         std::span<const Segment> other) {
  auto centers = [](std::span<const Segment> segs) {
    std::vector<Seconds> c;
    c.reserve(segs.size());
    for (const auto& s : segs) c.push_back(s.interval.center());
    return c;
  };
  const auto b = centers(base);
  const auto o = centers(other);
  return build_scale_map(b, o);
}

}  // namespace msdiar
