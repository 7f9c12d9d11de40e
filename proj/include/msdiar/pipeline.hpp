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
#include <filesystem>
#include <string>
#include <vector>

#include "msdiar/config.hpp"
#include "msdiar/formats.hpp"
#include "msdiar/timeline.hpp"

namespace msdiar {

// A slice of speech owned by one base-scale segment: the part of the segment
// (clipped to its speech region) that is closer to its center than to any
// other covering segment's center.
struct BaseUnit {
  TimeInterval span;
  std::size_t row;  // base-scale segment index in the feature file
};

struct RecordingResult {
  std::string recording_id;
  Annotation annotation;
  Timeline speech;
  Timeline overlap;
  std::size_t n_units = 0;
  std::size_t n_clusters = 0;
  std::size_t overlap_skipped = 0;
};

// Checks that the feature file agrees with the config (scale list, weight
// counts, required tracks). Throws ConfigError naming the recording.
void check_features_against_config(const FeatureSet& fs, const PipelineConfig& cfg);

// Cuts speech into base units, in time order.
std::vector<BaseUnit> build_base_units(const Timeline& speech, const ScaleFeatures& base);

// Full chain for one recording: VAD fusion and binarization, base units,
// per-scale cosine affinity, scale fusion, AHC, labelling, and the optional
// second-speaker pass.
RecordingResult diarize_recording(const FeatureSet& fs, const PipelineConfig& cfg);

struct BatchResult {
  AnnotationMap annotations;
  std::vector<std::string> log;       // one line per recording, sorted by id
  std::vector<std::string> failures;  // one message per failed input
};

// Runs diarize_recording over every file with up to `jobs` workers. Output
// order does not depend on the worker count.
BatchResult diarize_files(const std::vector<std::filesystem::path>& files,
                          const PipelineConfig& cfg, int jobs);

}  // namespace msdiar
