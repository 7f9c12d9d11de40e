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

#include "msdiar/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "msdiar/config.hpp"
#include "msdiar/error.hpp"
#include "msdiar/formats.hpp"
#include "msdiar/metrics.hpp"
#include "msdiar/pipeline.hpp"
#include "msdiar/synth.hpp"

namespace msdiar {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(fmt::format("cannot write '{}'", path));
  f << text;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".msdf") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct DiarizeOptions {
  std::string config;
  std::optional<double> threshold;
  bool no_overlap = false;
  int jobs = 1;
  std::string output;
  std::vector<std::string> inputs;
};

int cmd_diarize(const DiarizeOptions& o, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg = o.config.empty() ? default_config() : load_config(o.config);
  if (o.threshold) cfg.clustering.stop_threshold = *o.threshold;
  if (o.no_overlap) cfg.overlap.enabled = false;
  if (!o.output.empty()) cfg.io.output = o.output;
  cfg.validate();

  const auto files = expand_inputs(o.inputs.empty() ? cfg.io.features : o.inputs);
  const BatchResult batch = diarize_files(files, cfg, o.jobs);
  for (const auto& line : batch.log) err << line << '\n';
  for (const auto& f : batch.failures) err << "error: " << f << '\n';
  write_text(cfg.io.output, write_rttm(batch.annotations), out);
  return batch.failures.empty() ? kExitOk : kExitRecordingFailure;
}

// ---------------------------------------------------------------------------

struct ScoreOptions {
  std::string config;
  std::string ref;
  std::string hyp;
  std::string uem;
  std::optional<double> collar;
  std::optional<bool> score_overlap;
  std::string json;
};

nlohmann::json der_record(const std::optional<std::string>& recording, const DerBreakdown& d) {
  nlohmann::json j;
  j["recording"] = recording ? nlohmann::json(*recording) : nlohmann::json(nullptr);
  j["missed"] = d.missed;
  j["false_alarm"] = d.false_alarm;
  j["confusion"] = d.confusion;
  j["scored"] = d.scored;
  j["der"] = d.defined() ? nlohmann::json(d.der()) : nlohmann::json(nullptr);
  return j;
}

std::string der_row(const std::string& name, const DerBreakdown& d) {
  const std::string der = d.defined() ? fmt::format("{:.3f}", d.der()) : std::string("undef");
  return fmt::format("{:<24} {:>10.3f} {:>12.3f} {:>10.3f} {:>10.3f} {:>7}\n", name, d.missed,
                     d.false_alarm, d.confusion, d.scored, der);
}

int cmd_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg = o.config.empty() ? default_config() : load_config(o.config);
  ScoringParams params = cfg.scoring;
  if (o.collar) params.collar = *o.collar;
  if (o.score_overlap) params.score_overlap = *o.score_overlap;
  params.validate();

  const AnnotationMap ref = parse_rttm(read_text(o.ref));
  const AnnotationMap hyp = parse_rttm(read_text(o.hyp));
  std::optional<UemMap> uem;
  if (!o.uem.empty()) uem = parse_uem(read_text(o.uem));

  std::vector<std::string> unknown;
  for (const auto& [id, _] : hyp) {
    if (!ref.contains(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    std::string ids;
    for (const auto& id : unknown) ids += (ids.empty() ? "" : ", ") + id;
    throw InputError(fmt::format("hypothesis recordings missing from reference: {}", ids));
  }

  if (!uem) err << "warning: no UEM given; scoring each recording from 0 to its last reference end\n";

  std::string table = fmt::format("{:<24} {:>10} {:>12} {:>10} {:>10} {:>7}\n", "recording",
                                  "missed", "false_alarm", "confusion", "scored", "DER");
  std::string jsonl;
  DerBreakdown total;
  static const Annotation kEmpty;
  for (const auto& [id, r] : ref) {
    Timeline scope;
    if (uem && uem->contains(id)) {
      scope = uem->at(id);
    } else {
      if (uem) err << "warning: " << id << " not in UEM; using reference extent\n";
      if (!r.empty()) scope = Timeline({TimeInterval(0.0, r.support().last_end())});
    }
    auto h = hyp.find(id);
    const DerBreakdown d = score_der(r, h == hyp.end() ? kEmpty : h->second, scope, params);
    if (!d.defined()) err << "warning: " << id << ": DER undefined (nothing scored)\n";
    total += d;
    table += der_row(id, d);
    jsonl += der_record(id, d).dump() + '\n';
  }
  table += der_row("TOTAL", total);
  jsonl += der_record(std::nullopt, total).dump() + '\n';

  if (o.json == "-") {
    out << jsonl;
  } else {
    out << table;
    if (!o.json.empty()) write_text(o.json, jsonl, out);
  }
  return total.defined() ? kExitOk : kExitRecordingFailure;
}

// ---------------------------------------------------------------------------

struct SynthOptions {
  SynthSpec spec;
  std::string config;
  std::string out_dir = ".";
  int count = 1;
};

int cmd_synth(SynthOptions o, std::ostream& out) {
  if (!o.config.empty()) o.spec.scales = load_config(o.config).scales;
  if (o.count < 1) throw ConfigError("--count must be >= 1");
  fs::create_directories(o.out_dir);
  const std::string base_id = o.spec.recording_id;
  const std::uint64_t base_seed = o.spec.seed;
  for (int k = 0; k < o.count; ++k) {
    SynthSpec spec = o.spec;
    if (o.count > 1) {
      spec.recording_id = fmt::format("{}-{:03d}", base_id, k);
      spec.seed = base_seed + static_cast<std::uint64_t>(k);
    }
    const SynthOutput synth = generate_synthetic(spec);
    const fs::path msdf = fs::path(o.out_dir) / (spec.recording_id + ".msdf");
    const fs::path rttm = fs::path(o.out_dir) / (spec.recording_id + ".rttm");
    write_features(synth.features, msdf);
    write_text(rttm.string(), write_rttm({{spec.recording_id, synth.reference}}), out);
    out << msdf.string() << '\n' << rttm.string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_inspect(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  int rc = kExitOk;
  for (const auto& path : files) {
    try {
      const FeatureSet f = read_features(path);
      out << fmt::format("file: {}\nrecording_id: {}\nversion: {}\nframe_period: {}\n", path,
                         f.recording_id, kMsdfVersion, f.frame_period);
      out << fmt::format("tracks: {}\n", f.tracks.size());
      for (const auto& t : f.tracks) {
        out << fmt::format("  {} frames={}\n", t.name, t.values.size());
      }
      out << fmt::format("scales: {}\n", f.scales.size());
      for (std::size_t s = 0; s < f.scales.size(); ++s) {
        const auto& sc = f.scales[s];
        out << fmt::format("  [{}] window={} shift={} segments={} dim={}\n", s, sc.scale.window,
                           sc.scale.shift, sc.segments.size(), sc.dim);
      }
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      rc = kExitRecordingFailure;
    }
  }
  return rc;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"msdiar: multi-scale speaker diarization back-end"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "msdiar 1.0.0");

  DiarizeOptions diarize;
  auto* d = app.add_subcommand("diarize", "Diarize MSDF feature files into RTTM");
  d->add_option("--config", diarize.config, "Pipeline config (YAML)");
  d->add_option("--threshold", diarize.threshold, "Override the AHC stopping threshold");
  d->add_flag("--no-overlap", diarize.no_overlap, "Skip second-speaker assignment");
  d->add_option("--jobs", diarize.jobs, "Recordings processed in parallel")->check(CLI::PositiveNumber);
  d->add_option("-o,--output", diarize.output, "RTTM output path ('-' for stdout)");
  d->add_option("inputs", diarize.inputs, "MSDF files or directories");

  ScoreOptions score;
  auto* s = app.add_subcommand("score", "Score hypothesis RTTM against reference RTTM");
  s->add_option("--config", score.config, "Pipeline config (scoring section is used)");
  s->add_option("--ref", score.ref, "Reference RTTM")->required();
  s->add_option("--hyp", score.hyp, "Hypothesis RTTM")->required();
  s->add_option("--uem", score.uem, "UEM with scored regions");
  s->add_option("--collar", score.collar, "Forgiveness collar in seconds (each side)");
  s->add_option("--score-overlap", score.score_overlap,
                "Score regions where the reference has overlapping speakers")
      ->expected(0, 1)
      ->default_str("true");
  s->add_option("--json", score.json, "Write per-recording JSON lines here ('-': stdout only)");

  SynthOptions synth;
  auto* y = app.add_subcommand("synth", "Generate a synthetic MSDF file and its reference RTTM");
  y->add_option("--out-dir", synth.out_dir, "Output directory");
  y->add_option("--id", synth.spec.recording_id, "Recording id");
  y->add_option("--seed", synth.spec.seed, "Random seed");
  y->add_option("--speakers", synth.spec.n_speakers, "Number of speakers");
  y->add_option("--length", synth.spec.length, "Recording length (s)");
  y->add_option("--turn-min", synth.spec.turn_min, "Shortest turn (s)");
  y->add_option("--turn-max", synth.spec.turn_max, "Longest turn (s)");
  y->add_option("--overlap", synth.spec.overlap_fraction, "Overlapped share of speech");
  y->add_option("--dim", synth.spec.dim, "Embedding dimension");
  y->add_option("--min-angle", synth.spec.min_angle_deg, "Minimum centroid angle (degrees)");
  y->add_option("--noise", synth.spec.noise, "Embedding noise std-dev per dimension");
  y->add_option("--posterior-noise", synth.spec.posterior_noise, "Posterior jitter");
  y->add_option("--frame-period", synth.spec.frame_period, "Posterior frame period (s)");
  y->add_option("--config", synth.config, "Take the scale list from this config");
  y->add_option("--count", synth.count, "Number of recordings (seeds seed, seed+1, ...)");

  std::vector<std::string> inspect_files;
  auto* i = app.add_subcommand("inspect", "Print the header of MSDF files");
  i->add_option("files", inspect_files, "MSDF files")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*d) return cmd_diarize(diarize, out, err);
    if (*s) {
      // A bare --score-overlap means true.
      if (s->count("--score-overlap") > 0 && !score.score_overlap) score.score_overlap = true;
      return cmd_score(score, out, err);
    }
    if (*y) return cmd_synth(synth, out);
    if (*i) return cmd_inspect(inspect_files, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRecordingFailure;
  }
  return kExitUsage;
}

}  // namespace msdiar
