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

#include "msdiar/formats.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "msdiar/error.hpp"

namespace msdiar {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    fn(line_no, text.substr(pos, nl - pos));
    pos = nl + 1;
  }
}

double parse_seconds(std::string_view field, std::size_t line, const char* what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(line, fmt::format("malformed {} '{}'", what, field));
  }
  return v;
}

TimeInterval checked_interval(double start, double end, std::size_t line) {
  if (start < 0.0) throw ParseError(line, "negative onset");
  if (!(end - start >= kTimeTolerance)) throw ParseError(line, "non-positive duration");
  return TimeInterval(start, end);
}

// Milliseconds, rounded half away from zero.
long long to_ms(double seconds) { return std::llround(seconds * 1000.0); }

std::string ms_string(long long ms) { return fmt::format("{}.{:03d}", ms / 1000, ms % 1000); }

}  // namespace

AnnotationMap parse_rttm(std::string_view text) {
  std::map<std::string, std::map<std::string, std::vector<TimeInterval>>> raw;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto f = split_fields(line);
    if (f.empty() || f[0] != "SPEAKER") return;
    if (f.size() < 9) {
      throw ParseError(line_no, fmt::format("SPEAKER line has {} fields, need at least 9", f.size()));
    }
    const double onset = parse_seconds(f[3], line_no, "onset");
    const double duration = parse_seconds(f[4], line_no, "duration");
    if (!(duration > 0.0)) throw ParseError(line_no, "non-positive duration");
    raw[std::string(f[1])][std::string(f[7])].push_back(
        checked_interval(onset, onset + duration, line_no));
  });

  AnnotationMap out;
  for (auto& [rec, speakers] : raw) {
    Annotation& ann = out[rec];
    for (auto& [spk, ivs] : speakers) ann.add(Timeline(std::move(ivs)), spk);
  }
  return out;
}

std::string write_rttm(const AnnotationMap& annotations) {
  struct Line {
    long long onset_ms;
    long long duration_ms;
    std::string speaker;
  };
  std::string out;
  for (const auto& [rec, ann] : annotations) {
    std::vector<Line> lines;
    for (const auto& [spk, tl] : ann.tracks()) {
      // Round both endpoints, not the duration, so each end moves by at most
      // half a millisecond. Same-speaker intervals that touch after rounding
      // are written as one line, otherwise a re-read would merge them.
      long long cur_on = -1;
      long long cur_end = -1;
      for (const auto& iv : tl) {
        const long long on = to_ms(iv.start());
        const long long end = std::max(on + 1, to_ms(iv.end()));
        if (cur_on >= 0 && on <= cur_end) {
          cur_end = std::max(cur_end, end);
          continue;
        }
        if (cur_on >= 0) lines.push_back({cur_on, cur_end - cur_on, spk});
        cur_on = on;
        cur_end = end;
      }
      if (cur_on >= 0) lines.push_back({cur_on, cur_end - cur_on, spk});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
      return std::tie(a.onset_ms, a.speaker, a.duration_ms) <
             std::tie(b.onset_ms, b.speaker, b.duration_ms);
    });
    for (const auto& l : lines) {
      out += fmt::format("SPEAKER {} 1 {} {} <NA> <NA> {} <NA> <NA>\n", rec, ms_string(l.onset_ms),
                         ms_string(l.duration_ms), l.speaker);
    }
  }
  return out;
}

UemMap parse_uem(std::string_view text) {
  std::map<std::string, std::vector<TimeInterval>> raw;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto f = split_fields(line);
    if (f.empty() || f[0].starts_with(";;")) return;
    if (f.size() != 4) {
      throw ParseError(line_no, fmt::format("UEM line has {} fields, expected 4", f.size()));
    }
    const double onset = parse_seconds(f[2], line_no, "onset");
    const double offset = parse_seconds(f[3], line_no, "offset");
    if (!(offset > onset)) throw ParseError(line_no, "offset must exceed onset");
    raw[std::string(f[0])].push_back(checked_interval(onset, offset, line_no));
  });
  UemMap out;
  for (auto& [rec, ivs] : raw) out.emplace(rec, Timeline(std::move(ivs)));
  return out;
}

// ---------------------------------------------------------------------------
// MSDF
// ---------------------------------------------------------------------------

namespace {

class ByteWriter {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    using U = std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buf_.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
  }

  void put_raw(std::string_view bytes) { buf_.append(bytes); }

  void put_string(const std::string& s, const char* what) {
    if (s.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ValidationError(fmt::format("{} longer than 65535 bytes", what));
    }
    put(static_cast<std::uint16_t>(s.size()));
    buf_.append(s);
  }

  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const std::string& section) {
    using U = std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    need(sizeof(U), section);
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  std::string get_string(const std::string& section) {
    const auto len = get<std::uint16_t>(section);
    need(len, section);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }

  std::vector<float> get_floats(std::size_t count, const std::string& section) {
    if (count > (bytes_.size() - pos_) / 4) {
      throw FormatError(fmt::format("truncated MSDF: section '{}'", section));
    }
    std::vector<float> out(count);
    for (auto& v : out) v = get<float>(section);
    return out;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n, const std::string& section) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(fmt::format("truncated MSDF: section '{}'", section));
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
T checked_count(std::size_t n, const char* what) {
  if (n > std::numeric_limits<T>::max()) throw ValidationError(fmt::format("too many {}", what));
  return static_cast<T>(n);
}

}  // namespace

std::vector<const NamedTrack*> FeatureSet::tracks_with_prefix(std::string_view prefix) const {
  std::vector<const NamedTrack*> out;
  for (const auto& t : tracks) {
    if (t.name.size() > prefix.size() && t.name.starts_with(prefix) && t.name[prefix.size()] == '[') {
      out.push_back(&t);
    }
  }
  return out;
}

void FeatureSet::validate() const {
  if (!(frame_period > 0.0) || !std::isfinite(frame_period)) {
    throw ValidationError(fmt::format("{}: frame period must be positive", recording_id));
  }
  for (const auto& t : tracks) {
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const float v = t.values[i];
      if (!(v >= 0.0f && v <= 1.0f)) {
        throw ValidationError(
            fmt::format("{}: track '{}' frame {} = {} outside [0, 1]", recording_id, t.name, i, v));
      }
    }
  }
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const auto& sc = scales[s];
    try {
      sc.scale.validate();
    } catch (const ConfigError& e) {
      throw ValidationError(fmt::format("{}: scale {}: {}", recording_id, s, e.what()));
    }
    if (sc.embeddings.size() != sc.segments.size() * sc.dim) {
      throw ValidationError(fmt::format("{}: scale {} has {} values for {} segments of dim {}",
                                        recording_id, s, sc.embeddings.size(), sc.segments.size(),
                                        sc.dim));
    }
    for (std::size_t i = 0; i < sc.segments.size(); ++i) {
      const auto& seg = sc.segments[i];
      if (!std::isfinite(seg.start) || !std::isfinite(seg.end) || seg.start < 0.0 ||
          !(seg.end > seg.start)) {
        throw ValidationError(fmt::format("{}: scale {} segment {} has invalid bounds", recording_id,
                                          s, i));
      }
    }
    for (float v : sc.embeddings) {
      if (!std::isfinite(v)) {
        throw ValidationError(fmt::format("{}: scale {} has non-finite embeddings", recording_id, s));
      }
    }
  }
}

std::string encode_features(const FeatureSet& fs) {
  fs.validate();
  ByteWriter w;
  w.put_raw(std::string_view(kMsdfMagic, 4));
  w.put(kMsdfVersion);
  w.put_string(fs.recording_id, "recording id");
  w.put(fs.frame_period);
  w.put(checked_count<std::uint16_t>(fs.tracks.size(), "tracks"));
  for (const auto& t : fs.tracks) {
    w.put_string(t.name, "track name");
    w.put(checked_count<std::uint32_t>(t.values.size(), "frames"));
    for (float v : t.values) w.put(v);
  }
  w.put(checked_count<std::uint16_t>(fs.scales.size(), "scales"));
  for (const auto& sc : fs.scales) {
    w.put(sc.scale.window);
    w.put(sc.scale.shift);
    w.put(checked_count<std::uint32_t>(sc.segments.size(), "segments"));
    w.put(sc.dim);
    for (const auto& seg : sc.segments) {
      w.put(seg.start);
      w.put(seg.end);
    }
    for (float v : sc.embeddings) w.put(v);
  }
  return w.take();
}

FeatureSet decode_features(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMsdfMagic, 4) != 0) {
    throw FormatError("bad magic: not an MSDF file");
  }
  ByteReader r(bytes.substr(4));
  const auto version = r.get<std::uint16_t>("header");
  if (version != kMsdfVersion) {
    throw FormatError(fmt::format("unsupported MSDF version {}", version));
  }
  FeatureSet fs;
  fs.recording_id = r.get_string("header");
  fs.frame_period = r.get<double>("header");

  const auto n_tracks = r.get<std::uint16_t>("track table");
  fs.tracks.reserve(n_tracks);
  for (std::uint16_t t = 0; t < n_tracks; ++t) {
    const std::string section = fmt::format("track {}", t);
    NamedTrack track;
    track.name = r.get_string(section);
    const auto n_frames = r.get<std::uint32_t>(section);
    track.values = r.get_floats(n_frames, fmt::format("track '{}'", track.name));
    fs.tracks.push_back(std::move(track));
  }

  const auto n_scales = r.get<std::uint16_t>("scale table");
  fs.scales.reserve(n_scales);
  for (std::uint16_t s = 0; s < n_scales; ++s) {
    const std::string section = fmt::format("scale {}", s);
    ScaleFeatures sc;
    sc.scale.window = r.get<double>(section);
    sc.scale.shift = r.get<double>(section);
    const auto n_segments = r.get<std::uint32_t>(section);
    sc.dim = r.get<std::uint32_t>(section);
    const std::string seg_section = fmt::format("scale {} segments", s);
    sc.segments.reserve(std::min<std::size_t>(n_segments, bytes.size() / 16));
    for (std::uint32_t i = 0; i < n_segments; ++i) {
      SegmentTime seg;
      seg.start = r.get<double>(seg_section);
      seg.end = r.get<double>(seg_section);
      sc.segments.push_back(seg);
    }
    sc.embeddings = r.get_floats(static_cast<std::size_t>(n_segments) * sc.dim,
                                 fmt::format("scale {} embeddings", s));
    fs.scales.push_back(std::move(sc));
  }
  if (!r.at_end()) throw FormatError("trailing bytes after MSDF payload");
  fs.validate();
  return fs;
}

FeatureSet read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_features(bytes);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_features(const FeatureSet& fs, const std::filesystem::path& path) {
  const std::string bytes = encode_features(fs);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(fmt::format("short write to '{}'", path.string()));
}

}  // namespace msdiar
