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

#include "msdiar/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "msdiar/error.hpp"

namespace msdiar {

void SynthSpec::validate() const {
  if (n_speakers < 1) throw ConfigError("synth: need at least one speaker");
  if (!(length > 0.0) || !(frame_period > 0.0)) throw ConfigError("synth: length and frame period must be positive");
  if (!(turn_min > 0.0) || turn_max < turn_min) throw ConfigError("synth: need 0 < turn_min <= turn_max");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ConfigError("synth: overlap fraction must be in [0, 1)");
  }
  if (dim < 1) throw ConfigError("synth: embedding dimension must be positive");
  if (!(min_angle_deg > 0.0 && min_angle_deg <= 180.0)) throw ConfigError("synth: min angle must be in (0, 180]");
  if (!(noise > 0.0)) throw ConfigError("synth: noise scale must be positive");
  if (!(posterior_noise >= 0.0 && posterior_noise < 0.5)) {
    throw ConfigError("synth: posterior noise must be in [0, 0.5)");
  }
  if (scales.empty()) throw ConfigError("synth: at least one scale is required");
  for (const auto& s : scales) s.validate();
}

namespace {

struct Turn {
  long long start;  // frames
  long long end;
  std::size_t speaker;
};

std::vector<std::vector<double>> make_centroids(const SynthSpec& spec, std::mt19937_64& rng) {
  const double max_cos = std::cos(spec.min_angle_deg * std::numbers::pi / 180.0);
  const std::size_t n = spec.n_speakers;
  if (n >= 2 && max_cos < -1.0 / static_cast<double>(n - 1) - 1e-12) {
    throw ConfigError(fmt::format("synth: {} centroids cannot be {} degrees apart", n,
                                  spec.min_angle_deg));
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> out;
  constexpr int kAttempts = 20000;
  while (out.size() < n) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      std::vector<double> v(spec.dim);
      double ss = 0.0;
      for (double& x : v) {
        x = gauss(rng);
        ss += x * x;
      }
      const double norm = std::sqrt(ss);
      if (norm < 1e-12) continue;
      for (double& x : v) x /= norm;
      placed = std::all_of(out.begin(), out.end(), [&](const std::vector<double>& c) {
        double dot = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) dot += v[k] * c[k];
        return dot <= max_cos;
      });
      if (placed) out.push_back(std::move(v));
    }
    if (!placed) {
      throw ConfigError(fmt::format(
          "synth: could not place {} centroids {} degrees apart in {} dimensions", n,
          spec.min_angle_deg, spec.dim));
    }
  }
  return out;
}

std::vector<Turn> make_turns(const SynthSpec& spec, std::mt19937_64& rng) {
  const double fp = spec.frame_period;
  const auto total = static_cast<long long>(std::llround(spec.length / fp));
  auto frames = [&](double seconds) { return std::max(1LL, std::llround(seconds / fp)); };
  std::uniform_real_distribution<double> turn_len(spec.turn_min, spec.turn_max);
  std::uniform_real_distribution<double> pause(0.3, 1.2);
  std::uniform_real_distribution<double> overlap_len(1.0, 2.5);

  std::vector<std::size_t> first_order(spec.n_speakers);
  for (std::size_t i = 0; i < first_order.size(); ++i) first_order[i] = i;
  std::shuffle(first_order.begin(), first_order.end(), rng);

  std::vector<Turn> turns;
  long long overlap_frames = 0;
  long long union_frames = 0;
  long long prev_head_overlap = 0;  // overlap at the start of the previous turn
  long long start = frames(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  while (start < total) {
    std::size_t speaker;
    if (turns.size() < first_order.size()) {
      speaker = first_order[turns.size()];
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, spec.n_speakers - 2);
      speaker = pick(rng);
      if (spec.n_speakers == 1) {
        speaker = 0;
      } else if (speaker >= turns.back().speaker) {
        ++speaker;
      }
    }
    const long long len = frames(turn_len(rng));
    long long head_overlap = 0;
    if (!turns.empty()) {
      const Turn& prev = turns.back();
      const long long prev_len = prev.end - prev.start;
      const bool want_overlap =
          spec.n_speakers > 1 &&
          static_cast<double>(overlap_frames) < spec.overlap_fraction * static_cast<double>(union_frames);
      if (want_overlap) {
        // Overlaps never exceed half of either turn, so at most two speakers
        // are ever active together.
        head_overlap = std::min({frames(overlap_len(rng)), prev_len / 2, len / 2,
                                 prev_len - prev_head_overlap});
        head_overlap = std::max(0LL, head_overlap);
        start = prev.end - head_overlap;
      } else {
        start = prev.end + frames(pause(rng));
      }
      if (start >= total) break;
    }
    const long long end = std::min(total, start + len);
    if (end - start < frames(0.5)) break;
    const long long counted_overlap = std::min(head_overlap, end - start);
    overlap_frames += counted_overlap;
    union_frames += (end - start) - counted_overlap;
    turns.push_back({start, end, speaker});
    prev_head_overlap = counted_overlap;
    start = end;
  }
  if (turns.size() < spec.n_speakers) {
    throw ConfigError(fmt::format("synth: {} s is too short to give all {} speakers a turn",
                                  spec.length, spec.n_speakers));
  }
  return turns;
}

}  // namespace

SynthOutput generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SynthOutput out;
  out.centroids = make_centroids(spec, rng);
  const std::vector<Turn> turns = make_turns(spec, rng);

  const double fp = spec.frame_period;
  const auto n_frames = static_cast<std::size_t>(std::llround(spec.length / fp));

  std::vector<std::vector<TimeInterval>> per_speaker(spec.n_speakers);
  std::vector<int> active(n_frames, 0);
  for (const auto& t : turns) {
    per_speaker[t.speaker].emplace_back(static_cast<double>(t.start) * fp,
                                        static_cast<double>(t.end) * fp);
    for (long long f = t.start; f < t.end; ++f) ++active[static_cast<std::size_t>(f)];
  }
  std::vector<Timeline> speaker_time;
  for (std::size_t s = 0; s < spec.n_speakers; ++s) {
    speaker_time.emplace_back(per_speaker[s]);
    out.reference.add(speaker_time.back(), fmt::format("S{}", s + 1));
  }

  FeatureSet& fs = out.features;
  fs.recording_id = spec.recording_id;
  fs.frame_period = fp;
  NamedTrack vad{"vad[0]", std::vector<float>(n_frames)};
  NamedTrack osd{"osd[0]", std::vector<float>(n_frames)};
  std::uniform_real_distribution<double> jitter(0.0, spec.posterior_noise);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double v = active[f] >= 1 ? 1.0 : 0.0;
    const double o = active[f] >= 2 ? 1.0 : 0.0;
    double jv = 0.0, jo = 0.0;
    if (spec.posterior_noise > 0.0) {
      jv = jitter(rng);
      jo = jitter(rng);
    }
    vad.values[f] = static_cast<float>(v > 0.5 ? v - jv : v + jv);
    osd.values[f] = static_cast<float>(o > 0.5 ? o - jo : o + jo);
  }
  fs.tracks = {std::move(vad), std::move(osd)};

  std::normal_distribution<double> gauss(0.0, spec.noise);
  const TimeInterval extent(0.0, static_cast<double>(n_frames) * fp);
  for (const auto& scale : spec.scales) {
    ScaleFeatures sf;
    sf.scale = scale;
    sf.dim = static_cast<std::uint32_t>(spec.dim);
    for (const auto& seg : segment_region(extent, scale)) {
      sf.segments.push_back({seg.interval.start(), seg.interval.end()});
      const Timeline window({seg.interval});
      std::vector<double> mix(spec.dim, 0.0);
      double speech = 0.0;
      for (std::size_t s = 0; s < spec.n_speakers; ++s) {
        const double d = intersect(speaker_time[s], window).duration();
        if (d <= 0.0) continue;
        speech += d;
        for (std::size_t k = 0; k < spec.dim; ++k) mix[k] += d * out.centroids[s][k];
      }
      for (std::size_t k = 0; k < spec.dim; ++k) {
        const double base = speech > 0.0 ? mix[k] / speech : 0.0;
        sf.embeddings.push_back(static_cast<float>(base + gauss(rng)));
      }
    }
    fs.scales.push_back(std::move(sf));
  }
  return out;
}

}  // namespace msdiar
