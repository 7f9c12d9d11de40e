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

#include "msdiar/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "msdiar/error.hpp"

namespace msdiar {

namespace {

constexpr const char* kDefaultYaml = R"(# msdiar pipeline configuration.
# No value below is taken from a published system; every default is a
# starting point to be tuned on development data.

vad:
  weights: []               # non-paper default: equal weight per vad[k] track
  onset: 0.5                # non-paper default
  offset: 0.35              # non-paper default
  min_duration_on: 0.1      # non-paper default (s)
  min_duration_off: 0.1     # non-paper default (s)
  pad_onset: 0.0            # non-paper default (s)
  pad_offset: 0.0           # non-paper default (s)
  smooth_window: 1          # non-paper default (frames, odd)

scales:                     # non-paper default; smallest window is the base scale
  - {window: 1.5, shift: 0.75}
  - {window: 1.0, shift: 0.5}
  - {window: 0.5, shift: 0.25}

fusion:
  weights: [1.0, 1.0, 1.0]  # non-paper default: one per scale

clustering:
  threshold: 0.5            # non-paper default (fused cosine)
  min_speakers: 1           # non-paper default
  max_speakers: 20          # non-paper default

overlap:
  enabled: true             # non-paper default
  onset: 0.5                # non-paper default
  offset: 0.5               # non-paper default
  min_duration_on: 0.1      # non-paper default (s)
  min_duration_off: 0.0     # non-paper default (s)
  pad_onset: 0.0            # non-paper default (s)
  pad_offset: 0.0           # non-paper default (s)
  smooth_window: 1          # non-paper default (frames, odd)

scoring:
  collar: 0.25              # non-paper default (s, each side of a boundary)
  score_overlap: true       # non-paper default

io:
  features: []
  output: "-"
)";

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(fmt::format("'{}' must be a mapping", where));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw ConfigError(fmt::format("unknown key '{}' in '{}'", key, where));
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& dst, const std::string& where) {
  if (!node[key]) return;
  try {
    dst = node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("bad value for '{}.{}'", where, key));
  }
}

void read_binarize(const YAML::Node& node, BinarizeParams& p, const std::string& where,
                   std::set<std::string> extra) {
  extra.insert({"onset", "offset", "min_duration_on", "min_duration_off", "pad_onset",
                "pad_offset", "smooth_window"});
  check_keys(node, where, extra);
  read(node, "onset", p.onset, where);
  read(node, "offset", p.offset, where);
  read(node, "min_duration_on", p.min_duration_on, where);
  read(node, "min_duration_off", p.min_duration_off, where);
  read(node, "pad_onset", p.pad_onset, where);
  read(node, "pad_offset", p.pad_offset, where);
  read(node, "smooth_window", p.smooth_window, where);
}

}  // namespace

void PipelineConfig::validate() const {
  vad.binarize.validate();
  for (double w : vad.weights) {
    if (!(w >= 0.0)) throw ConfigError("vad weights must be non-negative");
  }
  if (scales.empty()) throw ConfigError("at least one scale is required");
  for (const auto& s : scales) s.validate();
  if (fusion_weights.size() != scales.size()) {
    throw ConfigError(fmt::format("{} fusion weights for {} scales", fusion_weights.size(),
                                  scales.size()));
  }
  double total = 0.0;
  for (double w : fusion_weights) {
    if (!(w >= 0.0)) throw ConfigError("fusion weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("fusion weights sum to zero");
  clustering.validate();
  overlap.binarize.validate();
  scoring.validate();
}

PipelineConfig default_config() {
  PipelineConfig c;
  c.vad.binarize.onset = 0.5;
  c.vad.binarize.offset = 0.35;
  c.vad.binarize.min_duration_on = 0.1;
  c.vad.binarize.min_duration_off = 0.1;
  c.scales = {{1.5, 0.75}, {1.0, 0.5}, {0.5, 0.25}};
  c.fusion_weights = {1.0, 1.0, 1.0};
  c.clustering = {0.5, 1, 20};
  c.overlap.enabled = true;
  c.overlap.binarize.onset = 0.5;
  c.overlap.binarize.offset = 0.5;
  c.overlap.binarize.min_duration_on = 0.1;
  c.scoring = {0.25, true};
  c.io.output = "-";
  return c;
}

std::string default_config_yaml() { return kDefaultYaml; }

PipelineConfig parse_config(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config is not valid YAML: {}", e.what()));
  }
  PipelineConfig c = default_config();
  if (root.IsNull()) return c;
  check_keys(root, "config", {"vad", "scales", "fusion", "clustering", "overlap", "scoring", "io"});

  if (const auto n = root["vad"]) {
    read_binarize(n, c.vad.binarize, "vad", {"weights"});
    read(n, "weights", c.vad.weights, "vad");
  }
  if (const auto n = root["scales"]) {
    if (!n.IsSequence()) throw ConfigError("'scales' must be a list");
    c.scales.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string where = fmt::format("scales[{}]", i);
      check_keys(n[i], where, {"window", "shift"});
      ScaleSpec s;
      read(n[i], "window", s.window, where);
      read(n[i], "shift", s.shift, where);
      c.scales.push_back(s);
    }
  }
  // A new scale list without explicit fusion weights weighs scales equally.
  if (root["scales"] && !root["fusion"]) c.fusion_weights.assign(c.scales.size(), 1.0);
  if (const auto n = root["fusion"]) {
    check_keys(n, "fusion", {"weights"});
    read(n, "weights", c.fusion_weights, "fusion");
  }
  if (const auto n = root["clustering"]) {
    check_keys(n, "clustering", {"threshold", "min_speakers", "max_speakers"});
    read(n, "threshold", c.clustering.stop_threshold, "clustering");
    read(n, "min_speakers", c.clustering.min_speakers, "clustering");
    read(n, "max_speakers", c.clustering.max_speakers, "clustering");
  }
  if (const auto n = root["overlap"]) {
    read_binarize(n, c.overlap.binarize, "overlap", {"enabled"});
    read(n, "enabled", c.overlap.enabled, "overlap");
  }
  if (const auto n = root["scoring"]) {
    check_keys(n, "scoring", {"collar", "score_overlap"});
    read(n, "collar", c.scoring.collar, "scoring");
    read(n, "score_overlap", c.scoring.score_overlap, "scoring");
  }
  if (const auto n = root["io"]) {
    check_keys(n, "io", {"features", "output"});
    read(n, "features", c.io.features, "io");
    read(n, "output", c.io.output, "io");
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace msdiar
