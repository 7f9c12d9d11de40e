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

#include <span>

#include "msdiar/affinity.hpp"

// Single-threaded versions of the affinity kernels. They define the expected
// output of the OpenMP kernels and are only linked into tests and benchmarks.
namespace msdiar::reference {

AffinityMatrix cosine_affinity(const EmbeddingMatrix& e);

AffinityMatrix expand_to_base(const AffinityMatrix& a, std::span<const std::size_t> map);

AffinityMatrix fuse_affinities(std::span<const AffinityMatrix> per_scale,
                               std::span<const double> weights);

}  // namespace msdiar::reference
