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
#include <map>
#include <string>
#include <vector>

#include "msdiar/timeline.hpp"

namespace msdiar {

struct ScoringParams {
  Seconds collar = 0.25;  // half-width of the no-score band around each reference boundary
  bool score_overlap = true;

  void validate() const;
};

struct DerBreakdown {
  Seconds missed = 0.0;
  Seconds false_alarm = 0.0;
  Seconds confusion = 0.0;
  Seconds scored = 0.0;

  // (missed + false_alarm + confusion) / scored; 0 when nothing is scored and
  // nothing is wrong. Throws UndefinedDerError when only the denominator is 0.
  double der() const;
  bool defined() const;

  DerBreakdown& operator+=(const DerBreakdown& o);
};

// Minimum-cost assignment for a rectangular cost matrix (rows x cols, row-major
// in `cost[r][c]`). Returns, per row, the assigned column or -1 when there are
// more rows than columns.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

// `uem` minus a band of +-collar around every reference segment boundary.
Timeline scoring_regions(const Annotation& ref, const Timeline& uem, const ScoringParams& p);

// Time where the reference has at least two active speakers.
Timeline reference_overlap(const Annotation& ref);

// Seconds of co-activity between each reference and hypothesis speaker inside
// `scope`, indexed [ref speaker][hyp speaker] in Annotation::speakers() order.
std::vector<std::vector<double>> overlap_matrix(const Annotation& ref, const Annotation& hyp,
                                                const Timeline& scope);

// One-to-one hyp -> ref mapping maximising total co-activity inside `scope`.
// Hypothesis speakers left without a partner, or paired with zero overlap,
// are absent from the result.
std::map<std::string, std::string> optimal_mapping(const Annotation& ref, const Annotation& hyp,
                                                   const Timeline& scope);

// Overlap-aware diarization error, counted with speaker multiplicity.
DerBreakdown score_der(const Annotation& ref, const Annotation& hyp, const Timeline& uem,
                       const ScoringParams& p);

}  // namespace msdiar
