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

#include "msdiar/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "msdiar/error.hpp"

namespace msdiar {

Timeline detect_overlap(const PosteriorTrack& osd_track, const BinarizeParams& p,
                        const Timeline& speech) {
  return intersect(binarize(osd_track, p), speech);
}

std::string cluster_label(int c) { return fmt::format("spk{:02d}", c); }

namespace {

double cosine(std::span<const double> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += static_cast<double>(b[k]) * b[k];
  }
  if (na < kMinEmbeddingNorm * kMinEmbeddingNorm || nb < kMinEmbeddingNorm * kMinEmbeddingNorm) {
    return -std::numeric_limits<double>::infinity();
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

OverlapAssignment assign_second_speaker(const Annotation& diar, const Timeline& overlap,
                                        std::span<const TimeInterval> base_segments,
                                        const ClusterResult& clusters,
                                        const EmbeddingMatrix& base_embeddings) {
  OverlapAssignment out{diar, 0};
  if (overlap.empty() || clusters.n_clusters < 2) return out;
  const std::size_t n = base_segments.size();
  if (clusters.labels.size() != n || base_embeddings.rows() != n) {
    throw InputError("overlap assignment: segments, labels and embeddings differ in length");
  }

  const std::size_t dim = base_embeddings.dim();
  std::vector<std::vector<double>> centroids(clusters.n_clusters, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(clusters.n_clusters, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(clusters.labels[i]);
    const auto row = base_embeddings.row(i);
    for (std::size_t k = 0; k < dim; ++k) centroids[c][k] += row[k];
    ++counts[c];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (counts[c] == 0) continue;
    for (double& v : centroids[c]) v /= static_cast<double>(counts[c]);
  }

  auto containing = [&](Seconds t) -> std::ptrdiff_t {
    auto it = std::upper_bound(base_segments.begin(), base_segments.end(), t,
                               [](Seconds v, const TimeInterval& iv) { return v < iv.start(); });
    if (it == base_segments.begin()) return -1;
    --it;
    return it->contains(t) ? it - base_segments.begin() : -1;
  };

  std::vector<std::vector<TimeInterval>> additions(clusters.n_clusters);
  for (const auto& iv : overlap) {
    // Pieces: the overlap interval cut at every base-segment boundary inside it.
    std::vector<Seconds> cuts{iv.start(), iv.end()};
    for (const auto& seg : base_segments) {
      if (seg.start() > iv.start() && seg.start() < iv.end()) cuts.push_back(seg.start());
      if (seg.end() > iv.start() && seg.end() < iv.end()) cuts.push_back(seg.end());
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
      if (cuts[q + 1] - cuts[q] < kTimeTolerance) continue;
      const Seconds mid = 0.5 * (cuts[q] + cuts[q + 1]);
      const std::ptrdiff_t seg = containing(mid);
      if (seg < 0) {
        ++out.skipped;
        continue;
      }
      const auto s = static_cast<std::size_t>(seg);
      const int primary = clusters.labels[s];
      int second = -1;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centroids.size(); ++c) {
        if (static_cast<int>(c) == primary || counts[c] == 0) continue;
        const double sim = cosine(centroids[c], base_embeddings.row(s));
        if (second < 0 || sim > best) {
          best = sim;
          second = static_cast<int>(c);
        }
      }
      if (second < 0) continue;
      const Seconds lo = std::max(cuts[q], base_segments[s].start());
      const Seconds hi = std::min(cuts[q + 1], base_segments[s].end());
      if (hi - lo >= kTimeTolerance) {
        additions[static_cast<std::size_t>(second)].emplace_back(lo, hi);
      }
    }
  }
  for (std::size_t c = 0; c < additions.size(); ++c) {
    out.annotation.add(Timeline(std::move(additions[c])), cluster_label(static_cast<int>(c)));
  }
  return out;
}

}  // namespace msdiar
