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

#include <cstdint>
#include <string>
#include <vector>

#include "msdiar/formats.hpp"
#include "msdiar/segmenter.hpp"
#include "msdiar/timeline.hpp"

namespace msdiar {

// Parameters of a synthetic conversation with ideal posteriors and
// centroid-plus-noise embeddings.
struct SynthSpec {
  std::string recording_id = "synth";
  std::size_t n_speakers = 3;
  Seconds length = 120.0;
  Seconds turn_min = 2.0;
  Seconds turn_max = 6.0;
  // Share of speech time (union) covered by two speakers at once.
  double overlap_fraction = 0.1;
  std::size_t dim = 64;
  // Smallest angle between any two speaker centroids, degrees.
  double min_angle_deg = 78.463;  // cos = 0.2
  double noise = 0.05;            // std-dev per embedding dimension
  double posterior_noise = 0.0;   // max deviation from the ideal 0/1 posterior
  Seconds frame_period = 0.01;
  std::vector<ScaleSpec> scales = {{1.5, 0.75}, {1.0, 0.5}, {0.5, 0.25}};
  std::uint64_t seed = 7;

  void validate() const;
};

struct SynthOutput {
  FeatureSet features;
  Annotation reference;
  std::vector<std::vector<double>> centroids;
};

// Deterministic in `spec` (including the seed). Throws ConfigError when the
// spec cannot be satisfied, e.g. centroids that cannot be spread far enough
// apart in the requested dimension.
SynthOutput generate_synthetic(const SynthSpec& spec);

}  // namespace msdiar
