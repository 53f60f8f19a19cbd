//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>
#include <json.hpp>

#include "decoyforge/dataset.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/stats.hpp"
#include "support.hpp"

using namespace decoyforge;
using testing::stored_complex;

TEST_CASE("histogram bins are half-open from zero") {
  const Histogram h = make_histogram({ 0.0, 0.99, 1.0, 2.5, 2.999, 3.0 }, 1.0);
  CHECK(h.counts == std::vector<std::size_t> { 2, 1, 2, 1 });
  CHECK(h.total() == 6);
  CHECK(h.lo(3) == 3.0);
  CHECK(h.hi(3) == 4.0);
  CHECK(make_histogram({}, 1.0).counts.empty());
  CHECK_THROWS_AS(make_histogram({ 1.0 }, 0.0), Error);
}

TEST_CASE("stats of a hand-counted dataset") {
  // Every complex has 8 atoms. Decoy rmsds:
  //   a: 0.5 1.5 2.0 2.5      b: 3.5      c: (none)
  // rmsd bins [0,1) [1,2) [2,3) [3,4): 1 1 2 1; positives (<= 2.0): 3.
  testing::TempDir tmp;
  write_dataset({ stored_complex("a", { 0.5, 1.5, 2.0, 2.5 }), stored_complex("b", { 3.5 }),
                  stored_complex("c", {}) },
                tmp.str());
  const DatasetView view(Dataset::open(tmp.str()));
  StatsConfig cfg;
  cfg.atoms_bin = 5;
  cfg.decoys_bin = 2;
  const DatasetStats s = compute_stats(view, cfg);
  CHECK(s.complexes == 3);
  CHECK(s.decoys == 5);
  CHECK(s.positives == 3);
  CHECK(s.d_max == 3.5);
  CHECK(s.atoms.counts == std::vector<std::size_t> { 0, 3 });
  CHECK(s.decoys_per_complex.counts == std::vector<std::size_t> { 2, 0, 1 });
  CHECK(s.rmsd.counts == std::vector<std::size_t> { 1, 1, 2, 1 });
  REQUIRE(s.rmsd_cdf.size() == 4);
  CHECK(s.rmsd_cdf[0] == doctest::Approx(0.2));
  CHECK(s.rmsd_cdf[1] == doctest::Approx(0.4));
  CHECK(s.rmsd_cdf[2] == doctest::Approx(0.8));
  CHECK(s.rmsd_cdf[3] == 1.0);

  const auto j = nlohmann::json::parse(stats_json(s));
  CHECK(j["positives"] == 3);
  CHECK(j["rmsd"]["counts"] == nlohmann::json { 1, 1, 2, 1 });
  const std::string csv = stats_csv(s);
  CHECK(csv.rfind("panel,bin_lo,bin_hi,value\n", 0) == 0);
  CHECK(csv.find("rmsd,2,3,2\n") != std::string::npos);
  CHECK(csv.find("decoys_per_complex,0,2,2\n") != std::string::npos);
  CHECK(csv.find("d_max,,,3.5\n") != std::string::npos);
}

TEST_CASE("stats follow exclusion") {
  testing::TempDir tmp;
  write_dataset({ stored_complex("a", { 0.5 }), stored_complex("b", { 9.0 }) }, tmp.str());
  const DatasetView view(Dataset::open(tmp.str()));
  const DatasetStats s = compute_stats(exclusion_filter(view, { "b" }));
  CHECK(s.complexes == 1);
  CHECK(s.decoys == 1);
  CHECK(s.d_max == 0.5);
}
