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

#include "msdiar/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "msdiar/error.hpp"

namespace msdiar {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim)
    : rows_(rows), dim_(dim), data_(rows * dim, 0.0f) {}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (data_.size() != rows_ * dim_) {
    throw InputError("embedding data has " + std::to_string(data_.size()) + " values, expected " +
                     std::to_string(rows_ * dim_));
  }
}

EmbeddingMatrix EmbeddingMatrix::gather(std::span<const std::size_t> indices) const {
  EmbeddingMatrix out(indices.size(), dim_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows_) throw InputError("gather index out of range");
    std::copy_n(row(indices[r]).begin(), dim_, out.row(r).begin());
  }
  return out;
}

namespace {

std::vector<double> row_norms(const EmbeddingMatrix& e) {
  const auto n = static_cast<std::ptrdiff_t>(e.rows());
  std::vector<double> norms(e.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (float x : e.row(static_cast<std::size_t>(i))) ss += static_cast<double>(x) * x;
    norms[static_cast<std::size_t>(i)] = std::sqrt(ss);
  }
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!(norms[i] >= kMinEmbeddingNorm)) {
      throw InputError("embedding row " + std::to_string(i) + " has zero norm");
    }
  }
  return norms;
}

}  // namespace

AffinityMatrix cosine_affinity(const EmbeddingMatrix& e) {
  const std::vector<double> norms = row_norms(e);
  const std::size_t n = e.rows();
  const std::size_t dim = e.dim();
  AffinityMatrix out(n);
  const float* data = e.data().data();

  // Upper triangle only; row lengths shrink with i, hence the dynamic schedule.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    const float* xi = data + i * dim;
    out(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const float* xj = data + j * dim;
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += static_cast<double>(xi[k]) * xj[k];
      const double c = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      out(i, j) = c;
      out(j, i) = c;
    }
  }
  return out;
}

AffinityMatrix expand_to_base(const AffinityMatrix& a, std::span<const std::size_t> map) {
  const std::size_t n = map.size();
  for (std::size_t idx : map) {
    if (idx >= a.size()) throw InputError("scale map index out of range");
  }
  AffinityMatrix out(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(map[i], map[j]);
    out(i, i) = 1.0;
  }
  return out;
}

AffinityMatrix fuse_affinities(std::span<const AffinityMatrix> per_scale,
                               std::span<const double> weights) {
  if (per_scale.empty()) throw InputError("nothing to fuse");
  if (weights.size() != per_scale.size()) {
    throw InputError("fusion got " + std::to_string(weights.size()) + " weights for " +
                     std::to_string(per_scale.size()) + " scales");
  }
  const std::size_t n = per_scale.front().size();
  for (const auto& m : per_scale) {
    if (m.size() != n) throw InputError("affinity matrices differ in size");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("fusion weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw InputError("fusion weights sum to zero");

  const std::size_t n_scales = per_scale.size();
  AffinityMatrix mixed(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      double lo = per_scale[0](i, j), hi = lo;
      for (std::size_t s = 0; s < n_scales; ++s) {
        const double v = per_scale[s](i, j);
        acc += (weights[s] / total) * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      mixed(i, j) = std::clamp(acc, lo, hi);
    }
  }

  AffinityMatrix out(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (mixed(i, j) + mixed(j, i));
    out(i, i) = 1.0;
  }
  return out;
}

AffinityMatrix sparsify_rows(const AffinityMatrix& a, std::size_t keep) {
  const std::size_t n = a.size();
  AffinityMatrix pruned(n);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(a(i, j));
    }
    double cut = -std::numeric_limits<double>::infinity();
    if (keep < row.size()) {
      std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(),
                       std::greater<>());
      cut = row[keep];
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && a(i, j) > cut) pruned(i, j) = a(i, j);
    }
  }
  AffinityMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::max(pruned(i, j), pruned(j, i));
    out(i, i) = 1.0;
  }
  return out;
}

}  // namespace msdiar
