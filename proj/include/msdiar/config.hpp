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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "msdiar/clustering.hpp"
#include "msdiar/metrics.hpp"
#include "msdiar/overlap.hpp"
#include "msdiar/segmenter.hpp"
#include "msdiar/vad.hpp"

namespace msdiar {

struct VadConfig {
  // One weight per "vad[k]" track; empty means equal weights.
  std::vector<double> weights;
  BinarizeParams binarize;
};

struct IoConfig {
  std::vector<std::string> features;
  std::string output;  // RTTM path; empty or "-" for stdout
};

struct PipelineConfig {
  VadConfig vad;
  std::vector<ScaleSpec> scales;
  std::vector<double> fusion_weights;
  ClusterParams clustering;
  OverlapAssignParams overlap;
  ScoringParams scoring;
  IoConfig io;

  // Internal consistency only; agreement with a feature file is checked by
  // the pipeline per recording.
  void validate() const;
};

PipelineConfig default_config();

// YAML text overlaid on default_config(). Unknown keys are rejected.
PipelineConfig parse_config(std::string_view yaml);
PipelineConfig load_config(const std::filesystem::path& path);

// The defaults as an annotated YAML document (what configs/default.yaml ships).
std::string default_config_yaml();

}  // namespace msdiar
