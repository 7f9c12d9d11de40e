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

#include "msdiar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "msdiar/error.hpp"

namespace msdiar {

void ScoringParams::validate() const {
  if (!(collar >= 0.0) || !std::isfinite(collar)) throw ConfigError("collar must be >= 0");
}

bool DerBreakdown::defined() const {
  return scored > 0.0 || missed + false_alarm + confusion == 0.0;
}

double DerBreakdown::der() const {
  const double errors = missed + false_alarm + confusion;
  if (scored > 0.0) return errors / scored;
  if (errors == 0.0) return 0.0;
  throw UndefinedDerError(
      fmt::format("DER undefined: {:.3f} s of errors with no scored reference speech", errors));
}

DerBreakdown& DerBreakdown::operator+=(const DerBreakdown& o) {
  missed += o.missed;
  false_alarm += o.false_alarm;
  confusion += o.confusion;
  scored += o.scored;
  return *this;
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  if (rows == 0) return {};
  const std::size_t cols = cost.front().size();
  for (const auto& r : cost) {
    if (r.size() != cols) throw InputError("assignment cost matrix is ragged");
  }
  const std::size_t n = std::max(rows, cols);
  auto at = [&](std::size_t r, std::size_t c) {
    return r < rows && c < cols ? cost[r][c] : 0.0;
  };

  // Shortest augmenting path with potentials, 1-based, on the square padding.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> out(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t r = match[j];
    if (r >= 1 && r <= rows && j <= cols) out[r - 1] = static_cast<int>(j - 1);
  }
  return out;
}

Timeline scoring_regions(const Annotation& ref, const Timeline& uem, const ScoringParams& p) {
  p.validate();
  if (p.collar == 0.0) return uem;
  std::vector<TimeInterval> bands;
  for (const auto& [_, tl] : ref.tracks()) {
    for (const auto& iv : tl) {
      for (Seconds b : {iv.start(), iv.end()}) {
        bands.emplace_back(std::max(0.0, b - p.collar), b + p.collar);
      }
    }
  }
  return subtract(uem, Timeline(std::move(bands)));
}

Timeline reference_overlap(const Annotation& ref) {
  const auto& tracks = ref.tracks();
  std::vector<TimeInterval> parts;
  for (auto a = tracks.begin(); a != tracks.end(); ++a) {
    for (auto b = std::next(a); b != tracks.end(); ++b) {
      const Timeline both = intersect(a->second, b->second);
      parts.insert(parts.end(), both.begin(), both.end());
    }
  }
  return Timeline(std::move(parts));
}

std::vector<std::vector<double>> overlap_matrix(const Annotation& ref, const Annotation& hyp,
                                                const Timeline& scope) {
  std::vector<std::vector<double>> m;
  std::vector<Timeline> hyp_scoped;
  for (const auto& [_, tl] : hyp.tracks()) hyp_scoped.push_back(intersect(tl, scope));
  for (const auto& [_, rtl] : ref.tracks()) {
    const Timeline r = intersect(rtl, scope);
    std::vector<double> row;
    row.reserve(hyp_scoped.size());
    for (const auto& h : hyp_scoped) row.push_back(intersect(r, h).duration());
    m.push_back(std::move(row));
  }
  return m;
}

std::map<std::string, std::string> optimal_mapping(const Annotation& ref, const Annotation& hyp,
                                                   const Timeline& scope) {
  std::map<std::string, std::string> out;
  if (ref.empty() || hyp.empty()) return out;
  const auto m = overlap_matrix(ref, hyp, scope);
  std::vector<std::vector<double>> cost(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (double d : m[r]) cost[r].push_back(-d);
  }
  const auto assigned = solve_assignment(cost);
  const auto ref_spk = ref.speakers();
  const auto hyp_spk = hyp.speakers();
  for (std::size_t r = 0; r < assigned.size(); ++r) {
    const int c = assigned[r];
    if (c >= 0 && m[r][static_cast<std::size_t>(c)] > 0.0) {
      out.emplace(hyp_spk[static_cast<std::size_t>(c)], ref_spk[r]);
    }
  }
  return out;
}

namespace {

// Walks a timeline alongside an increasing query point.
class Cursor {
 public:
  explicit Cursor(const Timeline& tl) : iv_(tl.intervals()) {}

  bool active_at(Seconds t) {
    while (pos_ < iv_.size() && iv_[pos_].end() <= t) ++pos_;
    return pos_ < iv_.size() && iv_[pos_].contains(t);
  }

 private:
  const std::vector<TimeInterval>& iv_;
  std::size_t pos_ = 0;
};

}  // namespace

DerBreakdown score_der(const Annotation& ref, const Annotation& hyp, const Timeline& uem,
                       const ScoringParams& p) {
  Timeline scope = scoring_regions(ref, uem, p);
  if (!p.score_overlap) scope = subtract(scope, reference_overlap(ref));

  const auto mapping = optimal_mapping(ref, hyp, scope);
  const auto ref_spk = ref.speakers();
  const auto hyp_spk = hyp.speakers();
  // For each hyp speaker, the index of its mapped ref speaker or -1.
  std::vector<int> mapped_ref(hyp_spk.size(), -1);
  for (std::size_t h = 0; h < hyp_spk.size(); ++h) {
    auto it = mapping.find(hyp_spk[h]);
    if (it == mapping.end()) continue;
    mapped_ref[h] = static_cast<int>(std::lower_bound(ref_spk.begin(), ref_spk.end(), it->second) -
                                     ref_spk.begin());
  }

  std::vector<Seconds> cuts;
  auto collect = [&](const Timeline& tl) {
    for (const auto& iv : tl) {
      cuts.push_back(iv.start());
      cuts.push_back(iv.end());
    }
  };
  collect(scope);
  for (const auto& [_, tl] : ref.tracks()) collect(tl);
  for (const auto& [_, tl] : hyp.tracks()) collect(tl);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Cursor scope_cur(scope);
  std::vector<Cursor> ref_cur, hyp_cur;
  for (const auto& [_, tl] : ref.tracks()) ref_cur.emplace_back(tl);
  for (const auto& [_, tl] : hyp.tracks()) hyp_cur.emplace_back(tl);
  std::vector<char> ref_on(ref_cur.size());

  DerBreakdown out;
  for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
    const Seconds dur = cuts[q + 1] - cuts[q];
    const Seconds mid = 0.5 * (cuts[q] + cuts[q + 1]);
    if (!scope_cur.active_at(mid)) continue;
    std::size_t n_ref = 0, n_hyp = 0, n_correct = 0;
    for (std::size_t r = 0; r < ref_cur.size(); ++r) {
      ref_on[r] = ref_cur[r].active_at(mid);
      n_ref += ref_on[r];
    }
    for (std::size_t h = 0; h < hyp_cur.size(); ++h) {
      if (!hyp_cur[h].active_at(mid)) continue;
      ++n_hyp;
      if (mapped_ref[h] >= 0 && ref_on[static_cast<std::size_t>(mapped_ref[h])]) ++n_correct;
    }
    out.scored += dur * static_cast<double>(n_ref);
    if (n_ref > n_hyp) out.missed += dur * static_cast<double>(n_ref - n_hyp);
    if (n_hyp > n_ref) out.false_alarm += dur * static_cast<double>(n_hyp - n_ref);
    out.confusion += dur * static_cast<double>(std::min(n_ref, n_hyp) - n_correct);
  }
  return out;
}

}  // namespace msdiar
