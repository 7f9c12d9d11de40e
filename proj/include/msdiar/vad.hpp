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

// Uniform-rate probabilities; frame i spans [i * frame_period, (i+1) * frame_period).
struct PosteriorTrack {
  Seconds frame_period = 0.0;
  std::vector<double> values;

  Seconds extent() const { return frame_period * static_cast<double>(values.size()); }
  // Throws ValidationError on a non-positive period or values outside [0, 1].
  void validate() const;
};

struct BinarizeParams {
  double onset = 0.5;
  double offset = 0.5;
  Seconds min_duration_on = 0.0;
  Seconds min_duration_off = 0.0;
  Seconds pad_onset = 0.0;
  Seconds pad_offset = 0.0;
  std::size_t smooth_window = 1;

  void validate() const;
};

// Weighted per-frame mean. Shorter tracks are zero-padded to the longest.
PosteriorTrack fuse_posteriors(std::span<const PosteriorTrack> tracks,
                               std::span<const double> weights);

// Centered median filter; windows are truncated at the edges and an even
// number of samples takes the mean of the middle two.
PosteriorTrack median_smooth(const PosteriorTrack& track, std::size_t window);

// Median smoothing, then hysteresis: a region opens when a value exceeds
// `onset` and closes at the first value below `offset`. Regions are then
// padded, gaps shorter than min_duration_off are filled, and regions shorter
// than min_duration_on are dropped. Everything stays within [0, extent].
Timeline binarize(const PosteriorTrack& track, const BinarizeParams& p);

}  // namespace msdiar
