//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <doctest.h>

#include "decoyforge/binary_io.hpp"
#include "decoyforge/dataset.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"
#include "support.hpp"

using namespace decoyforge;
using testing::stored_complex;

namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

}  // namespace

TEST_CASE("d_max is the largest stored rmsd") {
  testing::TempDir tmp;
  SUBCASE("worked example") {
    write_dataset({ stored_complex("a", { 0.5, 3.2 }), stored_complex("b", { 1.0, 7.25, 2.0 }), stored_complex("c", {}) },
                  tmp.str());
    const auto ds = Dataset::open(tmp.str());
    CHECK(ds->index().d_max == 7.25);
    DatasetView view(ds);
    CHECK(view.d_max() == 7.25);
    CHECK(scan_d_max(view) == 7.25);
    const DatasetView without_b = exclusion_filter(view, { "b" });
    CHECK(without_b.size() == 2);
    CHECK(without_b.d_max() == 3.2);
    CHECK(exclusion_filter(view, { "a", "b" }).d_max() == std::nullopt);
    CHECK(exclusion_filter(view, { "nope" }).size() == 3);
  }
  SUBCASE("no decoys at all") {
    write_dataset({ stored_complex("a", {}) }, tmp.str());
    CHECK_FALSE(Dataset::open(tmp.str())->index().d_max.has_value());
  }
}

TEST_CASE("random views agree with a full scan") {
  testing::TempDir tmp;
  Rng rng(4);
  std::vector<StoredComplex> all;
  for (int k = 0; k < 30; ++k) {
    std::vector<double> r(rng.below(5));
    for (double &x: r)
      x = rng.uniform(0, 9);
    all.push_back(stored_complex("c" + std::to_string(100 + k), r));
  }
  write_dataset(all, tmp.str(), WriteOptions { .complexes_per_shard = 7 });
  DatasetView view(Dataset::open(tmp.str()));
  for (int trial = 0; trial < 50; ++trial) {
    std::set<std::string> ex;
    for (const std::string &id: view.complex_ids())
      if (rng.uniform() < 0.4)
        ex.insert(id);
    const DatasetView v = exclusion_filter(view, ex);
    std::optional<double> oracle;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (const DecoyPose &p: v.at(i).decoys)
        oracle = oracle ? std::max(*oracle, p.rmsd) : p.rmsd;
    CHECK(v.d_max() == oracle);
    CHECK(v.size() == view.size() - ex.size());
  }
}

TEST_CASE("write then read is bit-exact") {
  testing::TempDir tmp;
  std::vector<StoredComplex> in { stored_complex("zeta", { 1.0 / 3.0, 2.5 }), stored_complex("alpha", { 0.1 }) };
  in[0].ligand_coords[1] = Vec3(std::nextafter(1.2, 2.0), -0.0, 1e-300);
  write_dataset(in, tmp.str(), WriteOptions { .complexes_per_shard = 1 });
  const auto ds = Dataset::open(tmp.str());
  REQUIRE(ds->complexes().size() == 2);
  CHECK(ds->index().shard_count == 2);
  // Stored in id order.
  const StoredComplex &z = ds->complexes()[1];
  CHECK(ds->complexes()[0].complex_id == "alpha");
  CHECK(z.complex_id == "zeta");
  CHECK(z.ligand_coords == in[0].ligand_coords);
  CHECK(std::signbit(z.ligand_coords[1].y()));
  CHECK(z.protein_coords == in[0].protein_coords);
  CHECK(z.protein_elements == in[0].protein_elements);
  CHECK(z.ligand_names == in[0].ligand_names);
  CHECK(z.bonds == in[0].bonds);
  REQUIRE(z.decoys.size() == 2);
  CHECK(z.decoys[0].rmsd == 1.0 / 3.0);
  CHECK(z.decoys[1].ligand_coords == in[0].decoys[1].ligand_coords);
  CHECK(ds->index().complexes[1].n_atoms == 8);
  CHECK(ds->index().complexes[1].n_decoys == 2);
}

TEST_CASE("dataset errors") {
  testing::TempDir tmp;
  CHECK_THROWS_AS(Dataset::open(tmp.str("missing")), Error);
  write_dataset({ stored_complex("a", { 1.0 }) }, tmp.str());
  const std::string index = read_file(tmp.str("index.json"));
  std::string bumped = index;
  const auto pos = bumped.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  bumped.replace(pos, 19, "\"format_version\": 99");
  write_file(tmp.str("index.json"), bumped);
  try {
    Dataset::open(tmp.str());
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::FormatVersion);
  }
  write_file(tmp.str("index.json"), index);
  DatasetView view(Dataset::open(tmp.str()));
  try {
    view.decoy_graph(0, 1);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::PoseOutOfRange);
  }
  CHECK(view.decoy_graph(0, 0).num_nodes() == 8);
}

TEST_CASE("sampler draws decoys without replacement, hypergeometrically") {
  testing::TempDir tmp;
  // 12 decoys, 4 positive.
  write_dataset({ stored_complex("a", { 0.5, 1.0, 1.5, 2.0, 3, 4, 5, 6, 7, 8, 9, 10 }) }, tmp.str());
  DatasetView view(Dataset::open(tmp.str()));
  SamplerConfig cfg;
  cfg.batch_size = 1;
  cfg.decoys_per_anchor = 5;
  const int trials = 20000;
  std::vector<int> counts(5, 0);
  for (int s = 0; s < trials; ++s) {
    const BatchPlan plan = plan_pretrain_batch(view, cfg, 9, s);
    REQUIRE(plan.anchors.size() == 1);
    const auto &d = plan.anchors[0].decoys;
    CHECK_FALSE(plan.anchors[0].with_replacement);
    CHECK(std::set<std::size_t>(d.begin(), d.end()).size() == 5);
    int pos = 0;
    for (std::size_t k: d)
      pos += k < 4;
    counts[pos]++;
  }
  for (int k = 0; k <= 4; ++k) {
    const double pmf = std::exp(log_choose(4, k) + log_choose(8, 5 - k) - log_choose(12, 5));
    const double freq = static_cast<double>(counts[k]) / trials;
    INFO("k = " << k);
    CHECK(std::abs(freq - pmf) <= 0.05 * pmf + 0.002);
  }
}

TEST_CASE("sampler epochs, determinism and shortages") {
  testing::TempDir tmp;
  std::vector<StoredComplex> all;
  for (int k = 0; k < 10; ++k)
    all.push_back(stored_complex("c" + std::to_string(k), { 1, 2, 3 }));
  all.push_back(stored_complex("short", { 1.0 }));
  write_dataset(all, tmp.str());
  DatasetView view(Dataset::open(tmp.str()));
  SamplerConfig cfg;
  cfg.batch_size = 4;
  cfg.decoys_per_anchor = 2;
  CHECK(steps_per_epoch(11, 4) == 3);

  std::multiset<std::size_t> seen;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const BatchPlan p = plan_pretrain_batch(view, cfg, 1, s);
    CHECK(p.epoch == 0);
    for (const AnchorPlan &a: p.anchors) {
      seen.insert(a.member);
      CHECK(a.with_replacement == (a.complex_id == "short"));
    }
  }
  CHECK(seen.size() == 11);
  CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == 11);
  CHECK(plan_pretrain_batch(view, cfg, 1, 3).epoch == 1);

  const PretrainBatch a = sample_pretrain_batch(view, cfg, 5, 2);
  const PretrainBatch b = sample_pretrain_batch(view, cfg, 5, 2);
  REQUIRE(a.anchors.size() == b.anchors.size());
  for (std::size_t k = 0; k < a.anchors.size(); ++k) {
    CHECK(a.anchors[k].complex_id == b.anchors[k].complex_id);
    REQUIRE(a.anchors[k].perturbed.size() == cfg.perturbed_per_anchor);
    CHECK(a.anchors[k].perturbed[0].noise == b.anchors[k].perturbed[0].noise);
    for (const DecoySample &d: a.anchors[k].decoys)
      CHECK(d.is_positive == (d.rmsd <= 2.0));
  }
  CHECK(a.d_max == 3.0);

  cfg.allow_replacement = false;
  bool threw = false;
  for (std::uint64_t s = 0; s < 3; ++s) {
    try {
      plan_pretrain_batch(view, cfg, 1, s);
    } catch (const Error &e) {
      threw = true;
      CHECK(e.kind() == ErrorKind::InsufficientDecoys);
    }
  }
  CHECK(threw);
  const std::vector<std::string> ids = view.complex_ids();
  try {
    plan_pretrain_batch(exclusion_filter(view, std::set<std::string>(ids.begin(), ids.end())), cfg, 1, 0);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::EmptyDataset);
  }
}

TEST_CASE("labels and splits") {
  const auto labels = parse_labels("complex_id,affinity,split\na,1.5,train\nb,2.5,val\nc,-1,test\nd,4,\n");
  REQUIRE(labels.size() == 4);
  CHECK(labels[0].split == Split::Train);
  CHECK(labels[1].split == Split::Validation);
  CHECK(labels[2].affinity == -1.0);
  CHECK(labels[3].split == Split::Unassigned);
  CHECK(parse_labels(labels_csv(labels)).size() == 4);
  CHECK_THROWS_AS(parse_labels("a,notanumber\n"), Error);

  testing::TempDir tmp;
  std::vector<StoredComplex> all;
  for (int k = 0; k < 20; ++k)
    all.push_back(stored_complex("c" + std::to_string(10 + k), {}));
  write_dataset(all, tmp.str());
  DatasetView view(Dataset::open(tmp.str()));
  std::vector<AffinityLabel> unassigned;
  for (int k = 0; k < 20; ++k)
    unassigned.push_back({ "c" + std::to_string(10 + k), 0.1 * k, Split::Unassigned });
  const LabeledSplits s = labeled_splits(view, unassigned, 3, 0.5, 0.25);
  CHECK(s.train.size() == 10);
  CHECK(s.validation.size() == 5);
  CHECK(s.test.size() == 5);
  std::set<std::string> ids;
  for (const auto *part: { &s.train, &s.validation, &s.test })
    for (const LabeledComplex &c: *part)
      ids.insert(c.complex_id);
  CHECK(ids.size() == 20);
  const LabeledSplits again = labeled_splits(view, unassigned, 3, 0.5, 0.25);
  CHECK(again.train[0].complex_id == s.train[0].complex_id);

  unassigned.push_back({ "ghost", 1.0, Split::Train });
  try {
    labeled_splits(view, unassigned, 3);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::UnknownComplex);
  }
}
