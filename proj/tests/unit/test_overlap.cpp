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

#include <algorithm>

#include "builders.hpp"
#include "msdiar/overlap.hpp"
#include "oracles.hpp"

using namespace msdiar;
using namespace msdiar::testing;

namespace {

// Four one-second units; units 0-1 are cluster 0, 2-3 cluster 1.
struct Fixture {
  std::vector<TimeInterval> segs{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  ClusterResult clusters{{0, 0, 1, 1}, 2};
  EmbeddingMatrix emb{4, 2, {1, 0, 1, 0, 0, 1, 0, 1}};
  Annotation diar = ann({{"spk00", {{0, 2}}}, {"spk01", {{2, 4}}}});
};

}  // namespace

TEST_CASE("detect_overlap examples") {
  BinarizeParams p;
  CHECK(detect_overlap({0.5, {0, 0, 0}}, p, tl({{0, 1.5}})).empty());
  CHECK(spans(detect_overlap({0.5, {0.1, 0.9, 0.1}}, p, tl({{0, 1.5}}))) == Spans{{0.5, 1.0}});
  CHECK(detect_overlap({0.5, {0.1, 0.9, 0.1}}, p, tl({{1.0, 1.5}})).empty());
}

TEST_CASE("cluster labels") {
  CHECK(cluster_label(0) == "spk00");
  CHECK(cluster_label(12) == "spk12");
}

TEST_CASE("assign_second_speaker guards") {
  Fixture f;
  CHECK(assign_second_speaker(f.diar, Timeline{}, f.segs, f.clusters, f.emb).annotation == f.diar);
  const ClusterResult one{{0, 0, 0, 0}, 1};
  const Annotation solo = ann({{"spk00", {{0, 4}}}});
  CHECK(assign_second_speaker(solo, tl({{0.5, 1.5}}), f.segs, one, f.emb).annotation == solo);
}

TEST_CASE("assign_second_speaker picks the nearest other centroid") {
  Fixture f;
  const auto r = assign_second_speaker(f.diar, tl({{0.25, 0.75}}), f.segs, f.clusters, f.emb);
  CHECK(r.skipped == 0);
  CHECK(spans(r.annotation.timeline_of("spk01")) == Spans{{0.25, 0.75}, {2, 4}});
  CHECK(spans(r.annotation.timeline_of("spk00")) == Spans{{0, 2}});

  // With three clusters the ranking matters: cluster 2 sits closer to unit 0.
  const std::vector<TimeInterval> segs{{0, 1}, {1, 2}, {2, 3}};
  const ClusterResult three{{0, 1, 2}, 3};
  const EmbeddingMatrix emb(3, 2, {1, 0, 0, 1, 1, 0.2f});
  const Annotation diar = ann({{"spk00", {{0, 1}}}, {"spk01", {{1, 2}}}, {"spk02", {{2, 3}}}});
  const auto t = assign_second_speaker(diar, tl({{0.1, 0.9}}), segs, three, emb);
  CHECK(spans(t.annotation.timeline_of("spk02")) == Spans{{0.1, 0.9}, {2, 3}});
  CHECK(spans(t.annotation.timeline_of("spk01")) == Spans{{1, 2}});
}

TEST_CASE("assign_second_speaker splits overlap at unit boundaries") {
  Fixture f;
  // Straddles the 1|2 boundary: first half is in a cluster-0 unit, second half in cluster 1.
  const auto r = assign_second_speaker(f.diar, tl({{1.5, 2.5}}), f.segs, f.clusters, f.emb);
  CHECK(spans(r.annotation.timeline_of("spk01")) == Spans{{1.5, 4}});
  CHECK(spans(r.annotation.timeline_of("spk00")) == Spans{{0, 2.5}});
}

TEST_CASE("assign_second_speaker counts pieces outside every unit") {
  Fixture f;
  const std::vector<TimeInterval> segs{{0, 1}, {3, 4}};
  const ClusterResult c{{0, 1}, 2};
  const EmbeddingMatrix emb(2, 2, {1, 0, 0, 1});
  const Annotation diar = ann({{"spk00", {{0, 1}}}, {"spk01", {{3, 4}}}});
  const auto r = assign_second_speaker(diar, tl({{1.5, 2.5}, {3.2, 3.4}}), segs, c, emb);
  CHECK(r.skipped == 1);
  CHECK(spans(r.annotation.timeline_of("spk00")) == Spans{{0, 1}, {3.2, 3.4}});
}

TEST_CASE("assign_second_speaker invariants on random layouts") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 2, 20);
    const int k = std::min(n, uniform_int(rng, 2, 4));
    std::vector<TimeInterval> segs;
    std::vector<int> labels;
    std::vector<float> data;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
      if (uniform(rng, 0.0, 1.0) < 0.2) t += uniform(rng, 0.1, 1.0);  // occasional gaps
      const double len = uniform(rng, 0.2, 1.0);
      segs.emplace_back(t, t + len);
      labels.push_back(i < k ? i : uniform_int(rng, 0, k - 1));
      for (int d = 0; d < 3; ++d) data.push_back(static_cast<float>(uniform(rng, -1, 1)));
      t += len;
    }
    const ClusterResult c{relabel_by_first_appearance(labels), static_cast<std::size_t>(k)};
    // relabel preserves the partition; rebuild diar with canonical labels.
    Annotation canon;
    for (int i = 0; i < n; ++i) canon.add(segs[static_cast<std::size_t>(i)], cluster_label(c.labels[static_cast<std::size_t>(i)]));
    const EmbeddingMatrix emb(static_cast<std::size_t>(n), 3, data);
    const Timeline ov = random_timeline(rng, t + 1.0, 5);

    const auto r = assign_second_speaker(canon, ov, segs, c, emb);
    // Outside the overlap nothing changes.
    const Timeline outside = subtract(Timeline({TimeInterval(0, t + 2.0)}), ov);
    CHECK(crop_annotation(r.annotation, outside) == crop_annotation(canon, outside));
    // Speaker set unchanged; at most two speakers anywhere.
    CHECK(r.annotation.speakers() == canon.speakers());
    const auto sp = r.annotation.speakers();
    for (std::size_t a = 0; a < sp.size(); ++a) {
      for (std::size_t b = a + 1; b < sp.size(); ++b) {
        for (std::size_t d = b + 1; d < sp.size(); ++d) {
          CHECK(intersect(intersect(r.annotation.timeline_of(sp[a]), r.annotation.timeline_of(sp[b])),
                          r.annotation.timeline_of(sp[d]))
                    .empty());
        }
      }
    }
    // Idempotent.
    CHECK(assign_second_speaker(r.annotation, ov, segs, c, emb).annotation == r.annotation);
  }
}
