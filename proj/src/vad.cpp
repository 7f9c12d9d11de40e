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

#include "msdiar/vad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msdiar/error.hpp"

namespace msdiar {

namespace {

bool same_period(Seconds a, Seconds b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

void PosteriorTrack::validate() const {
  if (!(frame_period > 0.0) || !std::isfinite(frame_period)) {
    throw ValidationError("posterior frame period must be positive");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw ValidationError("posterior frame " + std::to_string(i) + " outside [0, 1]");
    }
  }
}

void BinarizeParams::validate() const {
  if (!(onset >= 0.0 && onset <= 1.0) || !(offset >= 0.0 && offset <= 1.0)) {
    throw ConfigError("binarize thresholds must lie in [0, 1]");
  }
  if (offset > onset) throw ConfigError("binarize offset must not exceed onset");
  if (min_duration_on < 0.0 || min_duration_off < 0.0 || pad_onset < 0.0 || pad_offset < 0.0) {
    throw ConfigError("binarize durations must be non-negative");
  }
  if (smooth_window == 0 || smooth_window % 2 == 0) {
    throw ConfigError("smoothing window must be odd and >= 1");
  }
}

PosteriorTrack fuse_posteriors(std::span<const PosteriorTrack> tracks,
                               std::span<const double> weights) {
  if (tracks.empty()) throw ConfigError("posterior fusion needs at least one track");
  if (weights.size() != tracks.size()) {
    throw ConfigError("posterior fusion got " + std::to_string(weights.size()) +
                      " weights for " + std::to_string(tracks.size()) + " tracks");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("fusion weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("fusion weights sum to zero");

  std::size_t length = 0;
  for (const auto& t : tracks) {
    if (!same_period(t.frame_period, tracks.front().frame_period)) {
      throw ConfigError("posterior tracks have different frame periods");
    }
    length = std::max(length, t.values.size());
  }

  PosteriorTrack out{tracks.front().frame_period, std::vector<double>(length, 0.0)};
  for (std::size_t i = 0; i < length; ++i) {
    double acc = 0.0;
    double lo = 1.0, hi = 0.0;
    for (std::size_t k = 0; k < tracks.size(); ++k) {
      const double v = i < tracks[k].values.size() ? tracks[k].values[i] : 0.0;
      acc += (weights[k] / total) * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.values[i] = std::clamp(acc, lo, hi);
  }
  return out;
}

PosteriorTrack median_smooth(const PosteriorTrack& track, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw ConfigError("median window must be odd and >= 1, got " + std::to_string(window));
  }
  if (window == 1) return track;
  const std::size_t half = window / 2;
  const std::size_t n = track.values.size();
  PosteriorTrack out{track.frame_period, std::vector<double>(n)};
  std::vector<double> buf;
  buf.reserve(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    buf.assign(track.values.begin() + static_cast<std::ptrdiff_t>(lo),
               track.values.begin() + static_cast<std::ptrdiff_t>(hi));
    const std::size_t m = buf.size() / 2;
    std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(m), buf.end());
    double med = buf[m];
    if (buf.size() % 2 == 0) {
      const double below = *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(m));
      med = 0.5 * (below + med);
    }
    out.values[i] = med;
  }
  return out;
}

Timeline binarize(const PosteriorTrack& track, const BinarizeParams& p) {
  p.validate();
  const PosteriorTrack smoothed = median_smooth(track, p.smooth_window);
  const auto& v = smoothed.values;
  const Seconds fp = track.frame_period;
  const Seconds extent = track.extent();

  struct Span {
    Seconds start, end;
  };
  std::vector<Span> raw;
  bool active = false;
  std::size_t open_at = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!active && v[i] > p.onset) {
      active = true;
      open_at = i;
    } else if (active && v[i] < p.offset) {
      active = false;
      raw.push_back({static_cast<double>(open_at) * fp, static_cast<double>(i) * fp});
    }
  }
  if (active) raw.push_back({static_cast<double>(open_at) * fp, extent});

  for (auto& s : raw) {
    s.start = std::max(0.0, s.start - p.pad_onset);
    s.end = std::min(extent, s.end + p.pad_offset);
  }

  std::vector<Span> merged;
  for (const auto& s : raw) {
    if (!merged.empty() && s.start - merged.back().end < p.min_duration_off) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }

  std::vector<TimeInterval> kept;
  for (const auto& s : merged) {
    const Seconds d = s.end - s.start;
    if (d < p.min_duration_on || d < kTimeTolerance) continue;
    kept.emplace_back(s.start, s.end);
  }
  return Timeline(std::move(kept));
}

}  // namespace msdiar
