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

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "builders.hpp"
#include "msdiar/error.hpp"
#include "msdiar/formats.hpp"
#include "oracles.hpp"

using namespace msdiar;
using namespace msdiar::testing;

namespace {

FeatureSet small_features() {
  FeatureSet fs;
  fs.recording_id = "rec1";
  fs.frame_period = 0.01;
  fs.tracks = {{"vad[0]", {0.0f, 0.5f, 1.0f}}, {"osd[0]", {0.25f, 0.0f, 0.125f}}};
  ScaleFeatures sc;
  sc.scale = {1.0, 0.5};
  sc.segments = {{0.0, 1.0}, {0.5, 1.5}};
  sc.dim = 2;
  sc.embeddings = {1.0f, -2.0f, 0.5f, 3.0f};
  fs.scales.push_back(sc);
  return fs;
}

FeatureSet random_features(Rng& rng) {
  FeatureSet fs;
  fs.recording_id = "r" + std::to_string(uniform_int(rng, 0, 99999));
  fs.frame_period = uniform(rng, 0.001, 0.1);
  const int n_tracks = uniform_int(rng, 0, 4);
  for (int t = 0; t < n_tracks; ++t) {
    NamedTrack tr{(t % 2 ? "osd[" : "vad[") + std::to_string(t) + "]", {}};
    const int n = uniform_int(rng, 0, 50);
    for (int i = 0; i < n; ++i) tr.values.push_back(static_cast<float>(uniform(rng, 0.0, 1.0)));
    fs.tracks.push_back(std::move(tr));
  }
  const int n_scales = uniform_int(rng, 0, 3);
  for (int s = 0; s < n_scales; ++s) {
    ScaleFeatures sc;
    sc.scale.window = uniform(rng, 0.5, 2.0);
    sc.scale.shift = sc.scale.window * uniform(rng, 0.1, 1.0);
    sc.dim = static_cast<std::uint32_t>(uniform_int(rng, 1, 8));
    const int n = uniform_int(rng, 0, 10);
    for (int i = 0; i < n; ++i) {
      const double a = uniform(rng, 0.0, 100.0);
      sc.segments.push_back({a, a + uniform(rng, 0.01, 2.0)});
    }
    for (std::size_t i = 0; i < sc.segments.size() * sc.dim; ++i) {
      // Arbitrary finite bit patterns, including subnormals and -0.
      float v;
      do {
        v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
      } while (!std::isfinite(v));
      sc.embeddings.push_back(v);
    }
    fs.scales.push_back(std::move(sc));
  }
  return fs;
}

bool bit_equal(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST_CASE("parse_rttm examples") {
  auto m = parse_rttm("SPEAKER rec1 1 0.50 1.25 <NA> <NA> spkA <NA> <NA>\n");
  REQUIRE(m.size() == 1);
  CHECK(spans(m["rec1"].timeline_of("spkA")) == Spans{{0.5, 1.75}});

  CHECK(parse_rttm("").empty());

  m = parse_rttm(
      "SPEAKER rec1 1 0 1 <NA> <NA> spkA <NA> <NA>\n"
      "SPEAKER rec1 1 0.5 1.5 <NA> <NA> spkA <NA> <NA>\n");
  CHECK(spans(m["rec1"].timeline_of("spkA")) == Spans{{0, 2}});
}

TEST_CASE("parse_rttm skips other record types and tolerates spacing") {
  const auto m = parse_rttm(
      "SPKR-INFO rec1 1 <NA> <NA> <NA> unknown spkA <NA> <NA>\n"
      "\n"
      "  SPEAKER\trec1 1 2.0 1.0 <NA> <NA> spkA <NA> <NA>  \r\n");
  CHECK(spans(m.at("rec1").timeline_of("spkA")) == Spans{{2, 3}});
}

TEST_CASE("parse_rttm errors carry line numbers") {
  auto line_of = [](const char* text) {
    try {
      parse_rttm(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("SPEAKER r 1 0 1 <NA> <NA> a <NA> <NA>\nSPEAKER r 1 x 1 <NA> <NA> a <NA> <NA>\n") == 2);
  CHECK(line_of("SPEAKER r 1 0 0 <NA> <NA> a <NA> <NA>\n") == 1);
  CHECK(line_of("SPEAKER r 1 0 -1 <NA> <NA> a <NA> <NA>\n") == 1);
  CHECK(line_of("\n\nSPEAKER r 1 0 1\n") == 3);
  CHECK(line_of("SPEAKER r 1 0 nan <NA> <NA> a <NA> <NA>\n") == 1);
}

TEST_CASE("write_rttm examples") {
  CHECK(write_rttm({{"rec1", ann({{"A", {{0, 1}}}})}}) ==
        "SPEAKER rec1 1 0.000 1.000 <NA> <NA> A <NA> <NA>\n");
  CHECK(write_rttm({}).empty());
  const std::string two = write_rttm({{"r", ann({{"B", {{0, 1}}}, {"A", {{0.5, 2}, {3, 4}}}})}});
  CHECK(two ==
        "SPEAKER r 1 0.000 1.000 <NA> <NA> B <NA> <NA>\n"
        "SPEAKER r 1 0.500 1.500 <NA> <NA> A <NA> <NA>\n"
        "SPEAKER r 1 3.000 1.000 <NA> <NA> A <NA> <NA>\n");
}

TEST_CASE("write_rttm joins same-speaker lines that touch after rounding") {
  const std::string s = write_rttm({{"r", ann({{"A", {{0, 1.0004}, {1.00049, 2}}}})}});
  CHECK(s == "SPEAKER r 1 0.000 2.000 <NA> <NA> A <NA> <NA>\n");
}

TEST_CASE("RTTM round trip within half a millisecond and byte-stable") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    AnnotationMap m;
    const int n_rec = uniform_int(rng, 1, 3);
    for (int r = 0; r < n_rec; ++r) {
      Annotation a = random_annotation(rng, 50.0, 4, 6, "spk");
      if (!a.empty()) m["rec" + std::to_string(r)] = a;
    }
    const std::string text = write_rttm(m);
    const AnnotationMap back = parse_rttm(text);
    CHECK(write_rttm(back) == text);
    REQUIRE(back.size() == m.size());
    for (const auto& [rec, a] : m) {
      for (const auto& [spk, t] : a.tracks()) {
        const Timeline& u = back.at(rec).timeline_of(spk);
        // Every original endpoint has a written endpoint within 0.5 ms,
        // unless rounding merged it away inside the written support.
        for (const auto& iv : t) {
          for (double x : {iv.start(), iv.end()}) {
            bool near = false;
            for (const auto& w : u) {
              near |= std::abs(w.start() - x) <= 0.0005 + 1e-9 || std::abs(w.end() - x) <= 0.0005 + 1e-9 ||
                      (w.start() <= x && x <= w.end());
            }
            CHECK(near);
          }
        }
      }
    }
  }
}

TEST_CASE("parse_uem examples") {
  auto u = parse_uem("rec1 1 0.00 60.00\n");
  CHECK(spans(u.at("rec1")) == Spans{{0, 60}});
  u = parse_uem(";; comment\nrec1 1 0 10\nrec1 1 20 30\n");
  CHECK(spans(u.at("rec1")) == Spans{{0, 10}, {20, 30}});
  CHECK_THROWS_AS(parse_uem("rec1 1 5 5\n"), ParseError);
  CHECK_THROWS_AS(parse_uem("rec1 1 5\n"), ParseError);
}

TEST_CASE("MSDF round trip of a hand-built file") {
  const FeatureSet fs = small_features();
  const std::string bytes = encode_features(fs);
  CHECK(bytes.substr(0, 4) == "MSDF");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[5]) == 0);
  // Hand-computed size: header 4+2+(2+4)+8, tracks 2+2*(2+6+4+12), scales 2+8+8+4+4+2*16+4*4.
  CHECK(bytes.size() == 20u + 50u + 74u);
  CHECK(decode_features(bytes) == fs);
}

TEST_CASE("MSDF round trip is bit-exact") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const FeatureSet fs = random_features(rng);
    const std::string bytes = encode_features(fs);
    const FeatureSet back = decode_features(bytes);
    CHECK(back.recording_id == fs.recording_id);
    CHECK(std::bit_cast<std::uint64_t>(back.frame_period) == std::bit_cast<std::uint64_t>(fs.frame_period));
    REQUIRE(back.tracks.size() == fs.tracks.size());
    for (std::size_t t = 0; t < fs.tracks.size(); ++t) {
      CHECK(back.tracks[t].name == fs.tracks[t].name);
      CHECK(bit_equal(back.tracks[t].values, fs.tracks[t].values));
    }
    REQUIRE(back.scales.size() == fs.scales.size());
    for (std::size_t s = 0; s < fs.scales.size(); ++s) {
      CHECK(back.scales[s].segments == fs.scales[s].segments);
      CHECK(bit_equal(back.scales[s].embeddings, fs.scales[s].embeddings));
    }
    CHECK(encode_features(back) == bytes);
  }
}

TEST_CASE("MSDF structural errors") {
  std::string bytes = encode_features(small_features());
  std::string bad = bytes;
  bad.replace(0, 4, "XXXX");
  CHECK_THROWS_WITH_AS(decode_features(bad), doctest::Contains("bad magic"), FormatError);

  bad = bytes;
  bad[4] = 2;
  CHECK_THROWS_WITH_AS(decode_features(bad), doctest::Contains("version"), FormatError);

  CHECK_THROWS_WITH_AS(decode_features(bytes.substr(0, bytes.size() - 1)),
                       doctest::Contains("scale 0 embeddings"), FormatError);
  CHECK_THROWS_WITH_AS(decode_features(bytes.substr(0, 30)), doctest::Contains("track"),
                       FormatError);
  CHECK_THROWS_WITH_AS(decode_features(bytes + "x"), doctest::Contains("trailing"), FormatError);

  // Every strict prefix fails cleanly.
  for (std::size_t n = 0; n < bytes.size(); ++n) CHECK_THROWS_AS(decode_features(bytes.substr(0, n)), FormatError);
}

TEST_CASE("MSDF value validation") {
  FeatureSet fs = small_features();
  fs.tracks[0].values[1] = 1.5f;
  CHECK_THROWS_AS(encode_features(fs), ValidationError);

  // A posterior out of range written by someone else is caught on read.
  std::string bytes = encode_features(small_features());
  const float bad = 2.0f;
  const auto bits = std::bit_cast<std::uint32_t>(bad);
  const std::size_t off = 20 + 2 + 2 + 6 + 4;  // first value of vad[0]
  for (int i = 0; i < 4; ++i) bytes[off + i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  CHECK_THROWS_AS(decode_features(bytes), ValidationError);

  fs = small_features();
  fs.scales[0].embeddings.pop_back();
  CHECK_THROWS_AS(encode_features(fs), ValidationError);
}

TEST_CASE("MSDF with all-zero embeddings still parses") {
  FeatureSet fs = small_features();
  fs.scales[0].segments = {{0, 1}, {0.5, 1.5}, {1.0, 2.0}};
  fs.scales[0].dim = 4;
  fs.scales[0].embeddings.assign(12, 0.0f);
  CHECK(decode_features(encode_features(fs)) == fs);
}

TEST_CASE("MSDF file round trip and track lookup") {
  const auto path = std::filesystem::temp_directory_path() / "msdiar_formats_test.msdf";
  write_features(small_features(), path);
  const FeatureSet back = read_features(path);
  CHECK(back == small_features());
  REQUIRE(back.tracks_with_prefix("vad").size() == 1);
  CHECK(back.tracks_with_prefix("osd")[0]->name == "osd[0]");
  CHECK(back.tracks_with_prefix("va").empty());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_features(path), Error);
}
