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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msdiar/cli.hpp"
#include "msdiar/formats.hpp"

using namespace msdiar;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = run_cli(args, out, err);
  return {rc, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).rc == kExitUsage);
  CHECK(run({"frobnicate"}).rc == kExitUsage);
  CHECK(run({"score", "--ref", "x.rttm"}).rc == kExitUsage);
  CHECK(run({"diarize", "--jobs", "0"}).rc == kExitUsage);
  CHECK(run({"diarize", "--config", "/nonexistent.yaml"}).rc == kExitUsage);
  CHECK(run({"--help"}).rc == kExitOk);
}

TEST_CASE("diarize with no inputs writes an empty RTTM") {
  const Run r = run({"diarize"});
  CHECK(r.rc == kExitOk);
  CHECK(r.out.empty());
}

TEST_CASE("synth, inspect, diarize, score") {
  const fs::path dir = temp_dir("msdiar_cli_test");
  Run r = run({"synth", "--out-dir", dir.string(), "--id", "c", "--length", "60", "--seed", "4"});
  REQUIRE(r.rc == kExitOk);
  const std::string first = read(dir / "c.msdf");
  REQUIRE(run({"synth", "--out-dir", dir.string(), "--id", "c", "--length", "60", "--seed", "4"}).rc == 0);
  CHECK(read(dir / "c.msdf") == first);

  r = run({"inspect", (dir / "c.msdf").string()});
  CHECK(r.rc == kExitOk);
  CHECK(r.out.find("recording_id: c") != std::string::npos);
  CHECK(r.out.find("vad[0] frames=6000") != std::string::npos);
  CHECK(r.out.find("[2] window=0.5 shift=0.25") != std::string::npos);

  const fs::path hyp = dir / "c.hyp.rttm";
  r = run({"diarize", "-o", hyp.string(), (dir / "c.msdf").string()});
  CHECK(r.rc == kExitOk);
  CHECK(r.err.find("c: speech") != std::string::npos);
  CHECK(read(hyp).starts_with("SPEAKER c 1 "));

  // Directory inputs and stdout.
  r = run({"diarize", "--jobs", "2", dir.string()});
  CHECK(r.rc == kExitOk);
  CHECK(r.out == read(hyp));

  r = run({"score", "--ref", (dir / "c.rttm").string(), "--hyp", hyp.string()});
  CHECK(r.rc == kExitOk);
  CHECK(r.err.find("no UEM") != std::string::npos);
  CHECK(r.out.find("TOTAL") != std::string::npos);

  r = run({"diarize", "--no-overlap", "--threshold", "0.5", (dir / "c.msdf").string()});
  CHECK(r.rc == kExitOk);
  CHECK(r.out != read(hyp));

  // Config disagreeing with the file fails that recording.
  write(dir / "two.yaml", "scales:\n  - {window: 1.5, shift: 0.75}\n  - {window: 0.5, shift: 0.25}\n");
  r = run({"diarize", "--config", (dir / "two.yaml").string(), (dir / "c.msdf").string()});
  CHECK(r.rc == kExitRecordingFailure);
  CHECK(r.err.find("config lists 2 scales") != std::string::npos);

  r = run({"inspect", (dir / "c.rttm").string()});
  CHECK(r.rc == kExitRecordingFailure);
  CHECK(r.err.find("bad magic") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("score report arithmetic") {
  const fs::path dir = temp_dir("msdiar_cli_score");
  write(dir / "ref.rttm", "SPEAKER r1 1 0.00 10.00 <NA> <NA> A <NA> <NA>\n");
  write(dir / "hyp.rttm", "SPEAKER r1 1 0.00 8.00 <NA> <NA> B <NA> <NA>\n");
  write(dir / "r.uem", "r1 1 0 10\n");
  const std::string ref = (dir / "ref.rttm").string();
  const std::string hyp = (dir / "hyp.rttm").string();
  const std::string uem = (dir / "r.uem").string();

  Run r = run({"score", "--ref", ref, "--hyp", ref, "--uem", uem});
  CHECK(r.rc == kExitOk);
  CHECK(r.err.empty());
  CHECK(r.out.find(" 0.000\n") != std::string::npos);

  r = run({"score", "--ref", ref, "--hyp", hyp, "--uem", uem, "--collar", "0"});
  CHECK(r.rc == kExitOk);
  CHECK(r.out.find("0.200\n") != std::string::npos);

  r = run({"score", "--ref", ref, "--hyp", hyp, "--uem", uem, "--collar", "0", "--json", "-"});
  std::istringstream lines(r.out);
  std::string line;
  std::vector<nlohmann::json> recs;
  while (std::getline(lines, line)) recs.push_back(nlohmann::json::parse(line));
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["recording"] == "r1");
  CHECK(recs[0]["missed"].get<double>() == doctest::Approx(2.0));
  CHECK(recs[1]["recording"].is_null());
  CHECK(recs[1]["der"].get<double>() == doctest::Approx(0.2));
  for (const char* key : {"missed", "false_alarm", "confusion", "scored", "der"}) CHECK(recs[1].contains(key));

  const std::string json_path = (dir / "out.jsonl").string();
  r = run({"score", "--ref", ref, "--hyp", hyp, "--uem", uem, "--json", json_path});
  CHECK(r.out.find("TOTAL") != std::string::npos);
  CHECK(read(json_path).find("\"recording\":null") != std::string::npos);

  // Overlap scoring switch: bare flag, explicit values.
  write(dir / "ov.rttm",
        "SPEAKER r1 1 0 6 <NA> <NA> A <NA> <NA>\nSPEAKER r1 1 4 6 <NA> <NA> B <NA> <NA>\n");
  const std::string ov = (dir / "ov.rttm").string();
  r = run({"score", "--ref", ov, "--hyp", hyp, "--uem", uem, "--collar", "0", "--score-overlap", "false", "--json", "-"});
  CHECK(nlohmann::json::parse(r.out.substr(0, r.out.find('\n')))["scored"].get<double>() == doctest::Approx(8.0));
  r = run({"score", "--ref", ov, "--hyp", hyp, "--uem", uem, "--collar", "0", "--score-overlap", "--json", "-"});
  CHECK(r.rc == kExitOk);
  CHECK(nlohmann::json::parse(r.out.substr(0, r.out.find('\n')))["scored"].get<double>() == doctest::Approx(12.0));

  // Hypothesis recordings unknown to the reference.
  write(dir / "other.rttm", "SPEAKER zz 1 0 1 <NA> <NA> A <NA> <NA>\n");
  r = run({"score", "--ref", ref, "--hyp", (dir / "other.rttm").string()});
  CHECK(r.rc == kExitRecordingFailure);
  CHECK(r.err.find("zz") != std::string::npos);

  write(dir / "broken.rttm", "SPEAKER r1 1 abc 1 <NA> <NA> A <NA> <NA>\n");
  r = run({"score", "--ref", (dir / "broken.rttm").string(), "--hyp", hyp});
  CHECK(r.rc == kExitRecordingFailure);
  CHECK(r.err.find("line 1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("synth --count and scale config") {
  const fs::path dir = temp_dir("msdiar_cli_count");
  const Run r = run({"synth", "--out-dir", dir.string(), "--id", "b", "--count", "3", "--length", "30"});
  CHECK(r.rc == kExitOk);
  CHECK(fs::exists(dir / "b-000.msdf"));
  CHECK(fs::exists(dir / "b-002.rttm"));
  CHECK(read_features(dir / "b-001.msdf").recording_id == "b-001");
  CHECK(run({"synth", "--out-dir", dir.string(), "--speakers", "0"}).rc == kExitUsage);
  fs::remove_all(dir);
}
