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

#include "msdiar/affinity.hpp"

namespace msdiar {

struct ClusterParams {
  double stop_threshold = 0.5;
  std::size_t min_speakers = 1;
  std::size_t max_speakers = 20;

  void validate() const;
};

struct ClusterResult {
  std::vector<int> labels;  // one per segment, 0..n_clusters-1 by first appearance
  std::size_t n_clusters = 0;
};

// Average-linkage agglomerative clustering. The linkage of two clusters is the
// mean of the original affinity entries between their members. Merging stops
// when the best linkage falls below the threshold (and the speaker ceiling is
// met) or when min_speakers clusters remain. Ties go to the pair that comes
// first in cluster-creation order.
ClusterResult ahc(const AffinityMatrix& a, const ClusterParams& p);

// Renumbers labels 0, 1, ... in order of first appearance.
std::vector<int> relabel_by_first_appearance(std::span<const int> labels);

}  // namespace msdiar
