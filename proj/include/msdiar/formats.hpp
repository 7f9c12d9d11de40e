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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "msdiar/segmenter.hpp"
#include "msdiar/timeline.hpp"

namespace msdiar {

using AnnotationMap = std::map<std::string, Annotation>;
using UemMap = std::map<std::string, Timeline>;

// RTTM: only SPEAKER lines are read; other record types are skipped.
AnnotationMap parse_rttm(std::string_view text);
// One SPEAKER line per interval, times printed with 3 decimals, sorted by
// (recording, onset, speaker).
std::string write_rttm(const AnnotationMap& annotations);

// UEM: "recording channel onset offset" per line; ";;" starts a comment.
UemMap parse_uem(std::string_view text);

// ---------------------------------------------------------------------------
// MSDF v1 feature container.
//
//   "MSDF" | u16 version | u16 len + recording id | f64 frame_period
//   u16 n_tracks  { u16 len + name | u32 n_frames | f32 x n_frames }
//   u16 n_scales  { f64 window | f64 shift | u32 n_segments | u32 dim
//                   (f64 start, f64 end) x n_segments
//                   f32 x (n_segments * dim), row-major }
//
// Little-endian throughout.
// ---------------------------------------------------------------------------

inline constexpr char kMsdfMagic[4] = {'M', 'S', 'D', 'F'};
inline constexpr std::uint16_t kMsdfVersion = 1;

struct NamedTrack {
  std::string name;  // "vad[k]" or "osd[k]"
  std::vector<float> values;

  friend bool operator==(const NamedTrack&, const NamedTrack&) = default;
};

struct SegmentTime {
  double start = 0.0;
  double end = 0.0;

  double center() const { return 0.5 * (start + end); }
  friend bool operator==(const SegmentTime&, const SegmentTime&) = default;
};

struct ScaleFeatures {
  ScaleSpec scale;
  std::vector<SegmentTime> segments;
  std::uint32_t dim = 0;
  std::vector<float> embeddings;  // segments.size() x dim, row-major

  friend bool operator==(const ScaleFeatures&, const ScaleFeatures&) = default;
};

struct FeatureSet {
  std::string recording_id;
  double frame_period = 0.0;
  std::vector<NamedTrack> tracks;
  std::vector<ScaleFeatures> scales;

  // Tracks whose name starts with `prefix` followed by '[', in file order.
  std::vector<const NamedTrack*> tracks_with_prefix(std::string_view prefix) const;

  // ValidationError on shape mismatches, non-finite values or posteriors
  // outside [0, 1].
  void validate() const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

std::string encode_features(const FeatureSet& fs);
FeatureSet decode_features(std::string_view bytes);

FeatureSet read_features(const std::filesystem::path& path);
void write_features(const FeatureSet& fs, const std::filesystem::path& path);

}  // namespace msdiar
