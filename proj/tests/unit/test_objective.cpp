//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <vector>

#include <doctest.h>

#include "decoyforge/error.hpp"
#include "decoyforge/objective.hpp"
#include "decoyforge/rng.hpp"

using namespace decoyforge;
using ad::Matrix;
using ad::Tensor;

namespace {

using Vec = std::vector<double>;

double cosine(const Vec &a, const Vec &b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// Direct evaluation of the weighted InfoNCE term, no log-sum-exp shift.
double oracle_pair(const Vec &anchor, const Vec &positive, const std::vector<Vec> &negatives,
                   const Vec &betas, double tau) {
  double denom = 0.0;
  for (std::size_t j = 0; j < negatives.size(); ++j)
    denom += betas[j] * std::exp(cosine(anchor, negatives[j]) / tau);
  return -(cosine(anchor, positive) / tau - std::log(denom));
}

Tensor row(const Vec &v) {
  Matrix m(1, static_cast<ad::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    m(0, static_cast<ad::Index>(i)) = v[i];
  return Tensor::constant(m);
}

Vec random_vec(Rng &rng, std::size_t d) {
  Vec v(d);
  for (double &x: v)
    x = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("beta examples") {
  CHECK(beta(3.0, 6.0, NegativeCategory::DecoyNegative, 1.0) == 0.5);
  CHECK(beta(6.0, 6.0, NegativeCategory::DecoyNegative, 2.0) == 2.0);
  CHECK(beta(123.0, std::nullopt, NegativeCategory::CrossComplex, 5.0) == 1.0);
  try {
    beta(1.0, std::nullopt, NegativeCategory::DecoyNegative, 1.0);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::DmaxUnavailable);
  }
  CHECK_THROWS_AS(beta(1.0, 0.0, NegativeCategory::DecoyNegative, 1.0), Error);
}

TEST_CASE("InfoNCE worked example") {
  // anchor = positive: sim 1. Negatives orthogonal (sim 0) with betas 1, 1.
  // l = -(1/tau - log(2)) with tau = 0.5 -> log 2 - 2.
  const Tensor a = row({ 1, 0 });
  const std::vector<WeightedNegative> negs { { row({ 0, 1 }), 1.0 }, { row({ 0, -2 }), 1.0 } };
  const double l = info_nce_pair(a, row({ 3, 0 }), negs, 0.5).item();
  CHECK(l == doctest::Approx(std::log(2.0) - 2.0).epsilon(1e-14));
  // Including the positive adds e^2 to the denominator.
  const double lp = info_nce_pair(a, row({ 3, 0 }), negs, 0.5, true).item();
  CHECK(lp == doctest::Approx(std::log(2.0 + std::exp(2.0)) - 2.0).epsilon(1e-14));
}

TEST_CASE("InfoNCE matches the scalar oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.below(7);
    const Vec a = random_vec(rng, d), p = random_vec(rng, d);
    std::vector<Vec> negs(1 + rng.below(6));
    Vec betas;
    std::vector<WeightedNegative> weighted;
    for (Vec &n: negs) {
      n = random_vec(rng, d);
      betas.push_back(rng.uniform(0.05, 2.0));
      weighted.push_back({ row(n), betas.back() });
    }
    const double tau = rng.uniform(0.05, 2.0);
    const double got = info_nce_pair(row(a), row(p), weighted, tau).item();
    const double want = oracle_pair(a, p, negs, betas, tau);
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("loss grows with negative weights") {
  Rng rng(3);
  const Vec a = random_vec(rng, 4), p = random_vec(rng, 4), n = random_vec(rng, 4);
  double last = -1e300;
  for (double b: { 0.1, 0.5, 1.0, 2.0, 8.0 }) {
    const std::vector<WeightedNegative> negs { { row(n), b } };
    const double l = info_nce_pair(row(a), row(p), negs, 0.3).item();
    CHECK(l > last);
    last = l;
  }
}

TEST_CASE("uniform weights reproduce beta = 1 bit for bit") {
  Rng rng(8);
  std::vector<AnchorEmbeddings> anchors(3);
  for (AnchorEmbeddings &a: anchors) {
    a.anchor = row(random_vec(rng, 5));
    for (double r: { 0.5, 1.9, 3.0, 6.0 }) {
      a.decoys.push_back(row(random_vec(rng, 5)));
      a.decoy_rmsd.push_back(r);
    }
  }
  ContrastiveConfig uniform;
  uniform.uniform_weights = true;
  const double lu = contrastive_loss(anchors, 6.0, uniform).loss.item();

  // Hand-built loss with explicit beta = 1 negatives.
  std::vector<Tensor> terms;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    std::vector<WeightedNegative> negs;
    for (std::size_t d = 2; d < 4; ++d)
      negs.push_back({ anchors[k].decoys[d], 1.0 });
    for (std::size_t o = 0; o < anchors.size(); ++o)
      if (o != k)
        negs.push_back({ anchors[o].anchor, 1.0 });
    for (std::size_t d = 0; d < 2; ++d)
      terms.push_back(info_nce_pair(anchors[k].anchor, anchors[k].decoys[d], negs, 0.5));
  }
  const double manual = ad::scale(ad::sum(ad::concat_cols(terms)), 1.0 / terms.size()).item();
  CHECK(lu == manual);

  // Weighted variant differs.
  const ContrastiveResult weighted = contrastive_loss(anchors, 6.0, ContrastiveConfig {});
  CHECK(weighted.pairs == 6);
  CHECK(weighted.loss.item() != lu);
}

TEST_CASE("contrastive loss bookkeeping") {
  Rng rng(2);
  std::vector<AnchorEmbeddings> anchors(2);
  for (AnchorEmbeddings &a: anchors) {
    a.anchor = row(random_vec(rng, 3));
    a.decoys.push_back(row(random_vec(rng, 3)));
    a.decoy_rmsd.push_back(5.0);
  }
  // No positives anywhere.
  try {
    contrastive_loss(anchors, 5.0, ContrastiveConfig {});
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NoPositivePairsInBatch);
  }
  // Exactly at the threshold counts as positive.
  anchors[0].decoy_rmsd[0] = 2.0;
  const ContrastiveResult r = contrastive_loss(anchors, 5.0, ContrastiveConfig {});
  CHECK(r.pairs == 1);
  // The only negative is the other anchor; scalar oracle check.
  auto vec_of = [](const Tensor &t) { return Vec(t.value().data(), t.value().data() + t.size()); };
  const double want =
      oracle_pair(vec_of(anchors[0].anchor), vec_of(anchors[0].decoys[0]), { vec_of(anchors[1].anchor) }, { 1.0 }, 0.5);
  CHECK(r.loss.item() == doctest::Approx(want).epsilon(1e-12));

  // Per-anchor normalization requires a per-anchor maximum.
  anchors[0].decoys.push_back(row(random_vec(rng, 3)));
  anchors[0].decoy_rmsd.push_back(4.0);
  ContrastiveConfig per;
  per.dmax_mode = DmaxMode::PerAnchor;
  CHECK_THROWS_AS(contrastive_loss(anchors, 5.0, per), Error);
  anchors[0].anchor_max_rmsd = 4.0;
  anchors[1].anchor_max_rmsd = 5.0;
  CHECK(contrastive_loss(anchors, 5.0, per).pairs == 1);
}

TEST_CASE("denoising loss fixtures") {
  // Zero score, noise (0.1, 0, 0) at sigma 0.5: target -0.4, loss 0.16.
  ScoreSample s { Tensor::constant(Matrix::Zero(1, 3)), Matrix::Zero(1, 3), 0.5 };
  s.noise(0, 0) = 0.1;
  CHECK(dsm_loss(std::span(&s, 1)).item() == doctest::Approx(0.16).epsilon(1e-14));

  // Perfect score: zero loss.
  ScoreSample perfect = s;
  perfect.score = Tensor::constant(-s.noise / 0.25);
  CHECK(dsm_loss(std::span(&perfect, 1)).item() == 0.0);

  // Mean over copies, sum over atoms and axes.
  Matrix noise(2, 3);
  noise << 0.1, -0.2, 0.0, 0.3, 0.0, 0.05;
  Matrix score(2, 3);
  score << 1, 0, 0, 0, 1, 0;
  const std::vector<ScoreSample> two { s, { Tensor::constant(score), noise, 1.0 } };
  double second = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      second += std::pow(score(i, j) + noise(i, j), 2);
  CHECK(dsm_loss(two).item() == doctest::Approx((0.16 + second) / 2).epsilon(1e-14));

  ScoreSample bad = s;
  bad.score = Tensor::constant(Matrix::Constant(1, 3, std::nan("")));
  try {
    dsm_loss(std::span(&bad, 1));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NonFiniteScore);
  }
}

TEST_CASE("total loss") {
  CHECK(total_loss(2.0, 3.0, 0.0) == 2.0);
  CHECK(total_loss(2.0, 3.0, 0.5) == 3.5);
  CHECK_THROWS_AS(total_loss(1.0, 1.0, -1.0), Error);
  const Tensor l1 = Tensor::variable(Matrix::Constant(1, 1, 2.0));
  const Tensor l2 = Tensor::variable(Matrix::Constant(1, 1, 3.0));
  const Tensor t = total_loss(l1, l2, 0.25);
  CHECK(t.item() == 2.75);
  const Tensor wrt[] = { l1, l2 };
  const auto g = ad::grad(t, wrt);
  CHECK(g[0](0, 0) == 1.0);
  CHECK(g[1](0, 0) == 0.25);
}

TEST_CASE("objective config JSON") {
  ObjectiveConfig cfg;
  cfg.contrastive.tau = 0.2;
  cfg.contrastive.dmax_mode = DmaxMode::PerAnchor;
  cfg.dsm.mu = 0.0;
  const ObjectiveConfig back = objective_config_from_json(objective_config_to_json(cfg));
  CHECK(back.contrastive.tau == 0.2);
  CHECK(back.contrastive.dmax_mode == DmaxMode::PerAnchor);
  CHECK(back.dsm.mu == 0.0);
  CHECK_THROWS_AS(objective_config_from_json(R"({"tau": 0})"), Error);
  CHECK_THROWS_AS(objective_config_from_json(R"({"dmax_mode": "x"})"), Error);
  CHECK_THROWS_AS(objective_config_from_json(R"({"bogus": 1})"), Error);
}
