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

#include "msdiar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "msdiar/affinity.hpp"
#include "msdiar/error.hpp"
#include "msdiar/overlap.hpp"
#include "msdiar/segmenter.hpp"

namespace msdiar {

namespace {

constexpr double kScaleTolerance = 1e-6;

PosteriorTrack to_track(const NamedTrack& t, Seconds frame_period) {
  return {frame_period, std::vector<double>(t.values.begin(), t.values.end())};
}

PosteriorTrack fuse_named(const std::vector<const NamedTrack*>& tracks, Seconds frame_period,
                          std::vector<double> weights) {
  std::vector<PosteriorTrack> converted;
  converted.reserve(tracks.size());
  for (const auto* t : tracks) converted.push_back(to_track(*t, frame_period));
  if (weights.empty()) weights.assign(tracks.size(), 1.0);
  return fuse_posteriors(converted, weights);
}

// Segments of one scale that share time with speech, in file order.
std::vector<std::size_t> speech_segments(const ScaleFeatures& sc, const Timeline& speech) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sc.segments.size(); ++i) {
    const auto& seg = sc.segments[i];
    if (!intersect(Timeline({TimeInterval(seg.start, seg.end)}), speech).empty()) out.push_back(i);
  }
  return out;
}

}  // namespace

void check_features_against_config(const FeatureSet& fs, const PipelineConfig& cfg) {
  const auto& id = fs.recording_id;
  if (fs.scales.size() != cfg.scales.size()) {
    throw ConfigError(fmt::format("{}: config lists {} scales, features have {}", id,
                                  cfg.scales.size(), fs.scales.size()));
  }
  for (std::size_t s = 0; s < cfg.scales.size(); ++s) {
    const auto& want = cfg.scales[s];
    const auto& got = fs.scales[s].scale;
    if (std::abs(want.window - got.window) > kScaleTolerance ||
        std::abs(want.shift - got.shift) > kScaleTolerance) {
      throw ConfigError(fmt::format("{}: scale {} is {}/{} s in config but {}/{} s in features",
                                    id, s, want.window, want.shift, got.window, got.shift));
    }
    const auto& segs = fs.scales[s].segments;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].start < segs[i - 1].start || segs[i].center() < segs[i - 1].center()) {
        throw ConfigError(fmt::format("{}: scale {} segments are not in time order", id, s));
      }
    }
    for (const auto& seg : segs) {
      if (seg.end - seg.start > got.window + 1e-3) {
        throw ConfigError(fmt::format("{}: scale {} has a segment longer than its window", id, s));
      }
    }
  }
  if (cfg.fusion_weights.size() != fs.scales.size()) {
    throw ConfigError(fmt::format("{}: {} fusion weights for {} scales", id,
                                  cfg.fusion_weights.size(), fs.scales.size()));
  }
  const auto vad = fs.tracks_with_prefix("vad");
  if (vad.empty()) throw ConfigError(fmt::format("{}: no vad[k] posterior tracks", id));
  if (!cfg.vad.weights.empty() && cfg.vad.weights.size() != vad.size()) {
    throw ConfigError(fmt::format("{}: {} vad weights for {} vad tracks", id,
                                  cfg.vad.weights.size(), vad.size()));
  }
  if (cfg.overlap.enabled && fs.tracks_with_prefix("osd").empty()) {
    throw ConfigError(fmt::format("{}: overlap assignment enabled but no osd[k] tracks", id));
  }
}

std::vector<BaseUnit> build_base_units(const Timeline& speech, const ScaleFeatures& base) {
  struct Piece {
    Seconds start, end, center;
    std::size_t row;
  };
  std::vector<BaseUnit> units;
  for (const auto& region : speech) {
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < base.segments.size(); ++i) {
      const Seconds s = std::max(base.segments[i].start, region.start());
      const Seconds e = std::min(base.segments[i].end, region.end());
      if (e - s >= kTimeTolerance) pieces.push_back({s, e, 0.5 * (s + e), i});
    }
    if (pieces.empty()) continue;

    std::vector<Seconds> cuts{region.start(), region.end()};
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      cuts.push_back(pieces[p].start);
      cuts.push_back(pieces[p].end);
      if (p + 1 < pieces.size()) cuts.push_back(0.5 * (pieces[p].center + pieces[p + 1].center));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
      const Seconds lo = cuts[q], hi = cuts[q + 1];
      if (hi - lo < kTimeTolerance || lo < region.start() || hi > region.end()) continue;
      const Seconds mid = 0.5 * (lo + hi);
      const Piece* owner = nullptr;
      for (const auto& p : pieces) {
        if (mid < p.start || mid >= p.end) continue;
        if (owner == nullptr || std::abs(p.center - mid) < std::abs(owner->center - mid)) {
          owner = &p;
        }
      }
      if (owner == nullptr) continue;
      if (!units.empty() && units.back().row == owner->row &&
          lo - units.back().span.end() < kTimeTolerance) {
        units.back().span = TimeInterval(units.back().span.start(), hi);
      } else {
        units.push_back({TimeInterval(lo, hi), owner->row});
      }
    }
  }
  return units;
}

RecordingResult diarize_recording(const FeatureSet& fs, const PipelineConfig& cfg) {
  cfg.validate();
  check_features_against_config(fs, cfg);

  RecordingResult out;
  out.recording_id = fs.recording_id;

  const PosteriorTrack vad =
      fuse_named(fs.tracks_with_prefix("vad"), fs.frame_period, cfg.vad.weights);
  out.speech = binarize(vad, cfg.vad.binarize);
  if (out.speech.empty()) return out;

  const std::size_t base = base_scale_index(cfg.scales);
  const ScaleFeatures& base_features = fs.scales[base];
  const std::vector<BaseUnit> units = build_base_units(out.speech, base_features);
  out.n_units = units.size();
  if (units.empty()) return out;

  std::vector<Seconds> unit_centers;
  std::vector<std::size_t> unit_rows;
  for (const auto& u : units) {
    unit_centers.push_back(u.span.center());
    unit_rows.push_back(u.row);
  }

  std::vector<AffinityMatrix> per_scale;
  per_scale.reserve(fs.scales.size());
  for (std::size_t s = 0; s < fs.scales.size(); ++s) {
    const ScaleFeatures& sc = fs.scales[s];
    const EmbeddingMatrix all(sc.segments.size(), sc.dim, sc.embeddings);
    std::vector<std::size_t> candidates;
    std::vector<std::size_t> map;
    if (s == base) {
      // The base scale maps each unit to its own segment.
      candidates = unit_rows;
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      for (std::size_t row : unit_rows) {
        map.push_back(static_cast<std::size_t>(
            std::lower_bound(candidates.begin(), candidates.end(), row) - candidates.begin()));
      }
    } else {
      candidates = speech_segments(sc, out.speech);
      if (candidates.empty()) {
        throw InputError(fmt::format("{}: scale {} has no segments inside speech",
                                     fs.recording_id, s));
      }
      std::vector<Seconds> centers;
      for (std::size_t c : candidates) centers.push_back(sc.segments[c].center());
      map = build_scale_map(unit_centers, centers);
    }
    per_scale.push_back(expand_to_base(cosine_affinity(all.gather(candidates)), map));
  }
  const AffinityMatrix fused = fuse_affinities(per_scale, cfg.fusion_weights);
  const ClusterResult clusters = ahc(fused, cfg.clustering);
  out.n_clusters = clusters.n_clusters;

  std::vector<std::vector<TimeInterval>> by_label(clusters.n_clusters);
  std::vector<TimeInterval> spans;
  for (std::size_t i = 0; i < units.size(); ++i) {
    by_label[static_cast<std::size_t>(clusters.labels[i])].push_back(units[i].span);
    spans.push_back(units[i].span);
  }
  for (std::size_t c = 0; c < by_label.size(); ++c) {
    out.annotation.add(Timeline(std::move(by_label[c])), cluster_label(static_cast<int>(c)));
  }

  if (cfg.overlap.enabled) {
    const PosteriorTrack osd = fuse_named(fs.tracks_with_prefix("osd"), fs.frame_period, {});
    out.overlap = detect_overlap(osd, cfg.overlap.binarize, out.speech);
    const EmbeddingMatrix base_all(base_features.segments.size(), base_features.dim,
                                   base_features.embeddings);
    auto assigned =
        assign_second_speaker(out.annotation, out.overlap, spans, clusters, base_all.gather(unit_rows));
    out.annotation = std::move(assigned.annotation);
    out.overlap_skipped = assigned.skipped;
  }
  return out;
}

BatchResult diarize_files(const std::vector<std::filesystem::path>& files,
                          const PipelineConfig& cfg, int jobs) {
  cfg.validate();
  struct Slot {
    std::string id;
    Annotation annotation;
    std::string log;
    std::string failure;
  };
  std::vector<Slot> slots(files.size());
  const int workers = std::max(1, jobs);

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(files.size()); ++k) {
    auto& slot = slots[static_cast<std::size_t>(k)];
    const auto& path = files[static_cast<std::size_t>(k)];
    try {
      const FeatureSet fs = read_features(path);
      RecordingResult r = diarize_recording(fs, cfg);
      slot.id = r.recording_id;
      slot.log = fmt::format("{}: speech {:.3f} s, {} base units, {} speakers, overlap {:.3f} s",
                             r.recording_id, r.speech.duration(), r.n_units, r.n_clusters,
                             r.overlap.duration());
      if (r.overlap_skipped > 0) {
        slot.log += fmt::format(" ({} overlap pieces outside base segments)", r.overlap_skipped);
      }
      slot.annotation = std::move(r.annotation);
    } catch (const std::exception& e) {
      slot.failure = fmt::format("{}: {}", path.string(), e.what());
    }
  }

  BatchResult out;
  std::map<std::string, std::string> logs;
  for (auto& slot : slots) {
    if (!slot.failure.empty()) {
      out.failures.push_back(std::move(slot.failure));
      continue;
    }
    if (out.annotations.contains(slot.id)) {
      out.failures.push_back(fmt::format("{}: duplicate recording id", slot.id));
      continue;
    }
    out.annotations.emplace(slot.id, std::move(slot.annotation));
    logs.emplace(slot.id, std::move(slot.log));
  }
  for (auto& [_, line] : logs) out.log.push_back(std::move(line));
  std::sort(out.failures.begin(), out.failures.end());
  return out;
}

}  // namespace msdiar
