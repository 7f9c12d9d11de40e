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

#include "msdiar/clustering.hpp"

#include <limits>
#include <unordered_map>

#include "msdiar/error.hpp"

namespace msdiar {

void ClusterParams::validate() const {
  if (min_speakers < 1) throw ConfigError("min_speakers must be >= 1");
  if (max_speakers < min_speakers) throw ConfigError("max_speakers must be >= min_speakers");
}

std::vector<int> relabel_by_first_appearance(std::span<const int> labels) {
  std::unordered_map<int, int> seen;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = seen.try_emplace(l, static_cast<int>(seen.size()));
    out.push_back(it->second);
  }
  return out;
}

ClusterResult ahc(const AffinityMatrix& a, const ClusterParams& p) {
  p.validate();
  const std::size_t n = a.size();
  if (n == 0) return {};

  // Active clusters kept in creation order. link_sum[x][y] is the sum of the
  // original entries between the members of slots x and y; merging adds rows,
  // which is the same sum regrouped.
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<std::vector<double>> link_sum(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    members[i] = {i};
    for (std::size_t j = 0; j < n; ++j) link_sum[i][j] = i == j ? 0.0 : a(i, j);
  }

  while (members.size() > p.min_speakers && members.size() > 1) {
    const std::size_t k = members.size();
    std::size_t bx = 0, by = 1;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < k; ++x) {
      const double sx = static_cast<double>(members[x].size());
      for (std::size_t y = x + 1; y < k; ++y) {
        const double avg = link_sum[x][y] / (sx * static_cast<double>(members[y].size()));
        if (avg > best) {
          best = avg;
          bx = x;
          by = y;
        }
      }
    }
    if (best < p.stop_threshold && k <= p.max_speakers) break;

    // The merged cluster is the newest one, so it moves to the back.
    std::vector<std::size_t> merged = members[bx];
    merged.insert(merged.end(), members[by].begin(), members[by].end());
    std::vector<double> merged_row(k);
    for (std::size_t z = 0; z < k; ++z) merged_row[z] = link_sum[bx][z] + link_sum[by][z];

    std::vector<std::size_t> keep;
    keep.reserve(k - 1);
    for (std::size_t z = 0; z < k; ++z) {
      if (z != bx && z != by) keep.push_back(z);
    }
    std::vector<std::vector<std::size_t>> next_members;
    std::vector<std::vector<double>> next_sum(k - 1, std::vector<double>(k - 1, 0.0));
    next_members.reserve(k - 1);
    for (std::size_t u = 0; u < keep.size(); ++u) {
      next_members.push_back(std::move(members[keep[u]]));
      for (std::size_t v = 0; v < keep.size(); ++v) next_sum[u][v] = link_sum[keep[u]][keep[v]];
      next_sum[u][k - 2] = merged_row[keep[u]];
      next_sum[k - 2][u] = merged_row[keep[u]];
    }
    next_members.push_back(std::move(merged));
    members = std::move(next_members);
    link_sum = std::move(next_sum);
  }

  std::vector<int> raw(n, 0);
  for (std::size_t c = 0; c < members.size(); ++c) {
    for (std::size_t i : members[c]) raw[i] = static_cast<int>(c);
  }
  ClusterResult out;
  out.labels = relabel_by_first_appearance(raw);
  out.n_clusters = members.size();
  return out;
}

}  // namespace msdiar
