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


#include <doctest.h>

#include <fstream>
#include <sstream>

#include "msdiar/config.hpp"
#include "msdiar/error.hpp"

using namespace msdiar;

TEST_CASE("defaults") {
  const PipelineConfig c = default_config();
  CHECK_NOTHROW(c.validate());
  CHECK(c.scales.size() == 3);
  CHECK(c.scales[0] == ScaleSpec{1.5, 0.75});
  CHECK(c.fusion_weights == std::vector<double>{1, 1, 1});
  CHECK(c.clustering.stop_threshold == 0.5);
  CHECK(c.overlap.enabled);
  CHECK(c.scoring.collar == 0.25);
  CHECK(c.scoring.score_overlap);
}

TEST_CASE("the embedded default YAML parses to the defaults") {
  const PipelineConfig a = parse_config(default_config_yaml());
  const PipelineConfig b = default_config();
  CHECK(a.scales == b.scales);
  CHECK(a.fusion_weights == b.fusion_weights);
  CHECK(a.vad.binarize.offset == b.vad.binarize.offset);
  CHECK(a.vad.binarize.min_duration_on == b.vad.binarize.min_duration_on);
  CHECK(a.overlap.binarize.min_duration_on == b.overlap.binarize.min_duration_on);
  CHECK(a.clustering.max_speakers == b.clustering.max_speakers);
  CHECK(a.io.output == b.io.output);
}

TEST_CASE("shipped config file matches the embedded one") {
  std::ifstream in(MSDIAR_DEFAULT_CONFIG_PATH);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == default_config_yaml());
  // Every value line carries the marker.
  std::istringstream lines(default_config_yaml());
  std::string line;
  bool in_io = false;
  while (std::getline(lines, line)) {
    if (line.starts_with("io:")) in_io = true;
    const bool value_line = line.find(':') != std::string::npos && !line.starts_with("#") &&
                            !line.ends_with(":") && !line.starts_with("  - ");
    if (value_line && !in_io) CHECK_MESSAGE(line.find("# non-paper default") != std::string::npos, line);
  }
}

TEST_CASE("overrides") {
  const auto c = parse_config(
      "clustering: {threshold: 0.3, max_speakers: 5}\n"
      "overlap: {enabled: false}\n"
      "scales:\n  - {window: 2.0, shift: 1.0}\n  - {window: 1.0, shift: 0.5}\n");
  CHECK(c.clustering.stop_threshold == 0.3);
  CHECK(c.clustering.max_speakers == 5);
  CHECK(c.clustering.min_speakers == 1);
  CHECK_FALSE(c.overlap.enabled);
  CHECK(c.scales.size() == 2);
  CHECK(c.fusion_weights == std::vector<double>{1, 1});
  CHECK(parse_config("").scales.size() == 3);
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_config("bogus: 1\n"), doctest::Contains("unknown key 'bogus'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("vad: {onsett: 1}\n"), doctest::Contains("onsett"), ConfigError);
  CHECK_THROWS_AS(parse_config("vad: {onset: high}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("vad: {onset: 0.3, offset: 0.6}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("fusion: {weights: [1, 1]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scales: [{window: 1.0, shift: 2.0}]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scales: []\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("clustering: {min_speakers: 4, max_speakers: 2}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scoring: {collar: -0.1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("vad: [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/msdiar.yaml"), ConfigError);
}
