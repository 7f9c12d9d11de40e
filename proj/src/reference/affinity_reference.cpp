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

#include "msdiar/reference/affinity_reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msdiar/error.hpp"

namespace msdiar::reference {

AffinityMatrix cosine_affinity(const EmbeddingMatrix& e) {
  const std::size_t n = e.rows();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (float x : e.row(i)) ss += static_cast<double>(x) * x;
    norms[i] = std::sqrt(ss);
    if (!(norms[i] >= kMinEmbeddingNorm)) {
      throw InputError("embedding row " + std::to_string(i) + " has zero norm");
    }
  }
  AffinityMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    const auto xi = e.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = e.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < e.dim(); ++k) dot += static_cast<double>(xi[k]) * xj[k];
      const double c = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      out(i, j) = c;
      out(j, i) = c;
    }
  }
  return out;
}

AffinityMatrix expand_to_base(const AffinityMatrix& a, std::span<const std::size_t> map) {
  const std::size_t n = map.size();
  AffinityMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = i == j ? 1.0 : a(map[i], map[j]);
  }
  return out;
}

AffinityMatrix fuse_affinities(std::span<const AffinityMatrix> per_scale,
                               std::span<const double> weights) {
  const std::size_t n = per_scale.front().size();
  double total = 0.0;
  for (double w : weights) total += w;
  AffinityMatrix mixed(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      double lo = per_scale[0](i, j), hi = lo;
      for (std::size_t s = 0; s < per_scale.size(); ++s) {
        acc += (weights[s] / total) * per_scale[s](i, j);
        lo = std::min(lo, per_scale[s](i, j));
        hi = std::max(hi, per_scale[s](i, j));
      }
      mixed(i, j) = std::clamp(acc, lo, hi);
    }
  }
  AffinityMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = i == j ? 1.0 : 0.5 * (mixed(i, j) + mixed(j, i));
    }
  }
  return out;
}

}  // namespace msdiar::reference
