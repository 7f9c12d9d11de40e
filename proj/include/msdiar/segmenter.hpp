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

#include <cstddef>
#include <span>
#include <vector>

#include "msdiar/timeline.hpp"

namespace msdiar {

// Sliding-window geometry of one embedding scale.
struct ScaleSpec {
  Seconds window = 0.0;
  Seconds shift = 0.0;

  void validate() const;
  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

struct Segment {
  TimeInterval interval;
  std::size_t scale_index = 0;
  std::size_t region_index = 0;
};

// Windows start at region.start + k * shift while the start lies inside the
// region; each is clipped to region.end. A region shorter than the window
// yields exactly one segment covering it.
std::vector<Segment> segment_region(const TimeInterval& region, const ScaleSpec& scale,
                                    std::size_t scale_index = 0, std::size_t region_index = 0);

// segment_region over every interval of a timeline, in time order.
std::vector<Segment> segment_timeline(const Timeline& speech, const ScaleSpec& scale,
                                      std::size_t scale_index = 0);

// Index of the scale with the smallest window (first one on ties).
std::size_t base_scale_index(std::span<const ScaleSpec> scales);

// For every base center, the index of the nearest other-scale center; ties go
// to the earlier segment. Both inputs must be non-empty and sorted.
std::vector<std::size_t> build_scale_map(std::span<const Seconds> base_centers,
                                         std::span<const Seconds> other_centers);

std::vector<std::size_t> build_scale_map(std::span<const Segment> base,
                                         std::span<const Segment> other);

}  // namespace msdiar
