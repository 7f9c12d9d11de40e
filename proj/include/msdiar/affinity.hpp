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

namespace msdiar {

// Row-major n_rows x dim block of segment embeddings.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim);
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<float> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  const std::vector<float>& data() const { return data_; }

  // Rows in the order given by `indices`.
  EmbeddingMatrix gather(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

// Dense square similarity matrix. Producers in this module keep it symmetric
// with a unit diagonal; clustering only relies on the off-diagonal entries.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  explicit AffinityMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const AffinityMatrix&, const AffinityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Rows with a norm below this cannot be compared by angle.
inline constexpr double kMinEmbeddingNorm = 1e-12;

// Cosine similarity between every pair of rows. Diagonal is set to 1 and the
// rest clamped to [-1, 1]. Rows are processed in parallel; every entry is
// computed with the same arithmetic as the serial reference, so the result is
// bit-identical for any thread count.
AffinityMatrix cosine_affinity(const EmbeddingMatrix& e);

// Lifts an m x m matrix onto n base segments: out(i, j) = a(map[i], map[j]),
// with the diagonal set to 1.
AffinityMatrix expand_to_base(const AffinityMatrix& a, std::span<const std::size_t> map);

// Weighted mean of equally sized matrices (weights normalised to sum 1),
// re-symmetrised and with a unit diagonal.
AffinityMatrix fuse_affinities(std::span<const AffinityMatrix> per_scale,
                               std::span<const double> weights);

// Optional refinement: keep each row's `keep` largest off-diagonal entries
// and zero the rest, then symmetrise by max. Not used by the default pipeline.
AffinityMatrix sparsify_rows(const AffinityMatrix& a, std::size_t keep);

}  // namespace msdiar
