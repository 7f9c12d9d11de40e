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
#include <string>
#include <vector>

#include "msdiar/affinity.hpp"
#include "msdiar/clustering.hpp"
#include "msdiar/timeline.hpp"
#include "msdiar/vad.hpp"

namespace msdiar {

struct OverlapAssignParams {
  bool enabled = true;
  BinarizeParams binarize;
};

// Overlap can only exist where there is speech.
Timeline detect_overlap(const PosteriorTrack& osd_track, const BinarizeParams& p,
                        const Timeline& speech);

struct OverlapAssignment {
  Annotation annotation;
  std::size_t skipped = 0;  // overlap pieces with no containing base segment
};

// Speaker label used for cluster `c` throughout the pipeline.
std::string cluster_label(int c);

// Adds a second speaker inside overlapped speech. Each overlap interval is cut
// at base-segment boundaries; for every piece, the base segment holding its
// midpoint gives the primary cluster, and the other cluster whose centroid
// is closest in cosine to that segment's embedding is added over the piece.
// `base_segments`, `clusters.labels` and the rows of `base_embeddings` are
// parallel arrays; `base_segments` must be sorted and pairwise disjoint.
OverlapAssignment assign_second_speaker(const Annotation& diar, const Timeline& overlap,
                                        std::span<const TimeInterval> base_segments,
                                        const ClusterResult& clusters,
                                        const EmbeddingMatrix& base_embeddings);

}  // namespace msdiar
