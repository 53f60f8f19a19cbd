//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/objective.hpp"

#include <cmath>

#include <json.hpp>

#include "decoyforge/error.hpp"

namespace decoyforge {

using ad::Matrix;
using ad::Tensor;
using nlohmann::json;

void ContrastiveConfig::validate() const {
  if (!(tau > 0.0))
    throw Error(ErrorKind::InvalidConfig, "tau must be positive");
  if (!(alpha > 0.0))
    throw Error(ErrorKind::InvalidConfig, "alpha must be positive");
  if (!(positive_rmsd_max >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "positive_rmsd_max must be non-negative");
}

void DsmConfig::validate() const {
  if (!(sigma > 0.0))
    throw Error(ErrorKind::InvalidConfig, "sigma must be positive");
  if (!(mu >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "mu must be non-negative");
}

std::string objective_config_to_json(const ObjectiveConfig &cfg) {
  const ContrastiveConfig &c = cfg.contrastive;
  json j;
  j["tau"] = c.tau;
  j["alpha"] = c.alpha;
  j["positive_rmsd_max"] = c.positive_rmsd_max;
  j["include_decoy_negatives"] = c.include_decoy_negatives;
  j["include_cross_complex_negatives"] = c.include_cross_complex_negatives;
  j["include_positive_in_denominator"] = c.include_positive_in_denominator;
  j["uniform_weights"] = c.uniform_weights;
  j["dmax_mode"] = c.dmax_mode == DmaxMode::Global ? "global" : "per_anchor";
  j["sigma"] = cfg.dsm.sigma;
  j["mu"] = cfg.dsm.mu;
  j["score_mode"] = cfg.dsm.score_mode == ScoreMode::Head ? "head" : "autograd";
  return j.dump(2);
}

ObjectiveConfig objective_config_from_json(std::string_view json_text) {
  ObjectiveConfig cfg;
  ContrastiveConfig &c = cfg.contrastive;
  try {
    const json j = json::parse(json_text);
    for (const auto &[key, value]: j.items()) {
      if (key == "tau")
        c.tau = value.get<double>();
      else if (key == "alpha")
        c.alpha = value.get<double>();
      else if (key == "positive_rmsd_max")
        c.positive_rmsd_max = value.get<double>();
      else if (key == "include_decoy_negatives")
        c.include_decoy_negatives = value.get<bool>();
      else if (key == "include_cross_complex_negatives")
        c.include_cross_complex_negatives = value.get<bool>();
      else if (key == "include_positive_in_denominator")
        c.include_positive_in_denominator = value.get<bool>();
      else if (key == "uniform_weights")
        c.uniform_weights = value.get<bool>();
      else if (key == "dmax_mode") {
        const auto mode = value.get<std::string>();
        if (mode == "global")
          c.dmax_mode = DmaxMode::Global;
        else if (mode == "per_anchor")
          c.dmax_mode = DmaxMode::PerAnchor;
        else
          throw Error(ErrorKind::InvalidConfig, "dmax_mode must be global or per_anchor");
      } else if (key == "sigma")
        cfg.dsm.sigma = value.get<double>();
      else if (key == "mu")
        cfg.dsm.mu = value.get<double>();
      else if (key == "score_mode") {
        const auto mode = value.get<std::string>();
        if (mode == "head")
          cfg.dsm.score_mode = ScoreMode::Head;
        else if (mode == "autograd")
          cfg.dsm.score_mode = ScoreMode::Autograd;
        else
          throw Error(ErrorKind::InvalidConfig, "score_mode must be head or autograd");
      } else
        throw Error(ErrorKind::InvalidConfig, "unknown objective key " + key);
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::InvalidConfig, std::string("objective: ") + e.what());
  }
  c.validate();
  cfg.dsm.validate();
  return cfg;
}

double beta(double rmsd, std::optional<double> d_max, NegativeCategory category, double alpha) {
  if (category == NegativeCategory::CrossComplex)
    return 1.0;
  if (!d_max || !(*d_max > 0.0))
    throw Error(ErrorKind::DmaxUnavailable, "decoy weighting needs a positive d_max");
  return alpha * rmsd / *d_max;
}

Tensor info_nce_pair(const Tensor &anchor, const Tensor &positive,
                     std::span<const WeightedNegative> negatives, double tau, bool include_positive) {
  if (negatives.empty())
    throw Error(ErrorKind::NoNegatives, "contrastive pair without negatives");
  const double inv_tau = 1.0 / tau;
  const Tensor positive_logit = ad::scale(ad::cosine_similarity(anchor, positive), inv_tau);

  std::vector<Tensor> logits;
  logits.reserve(negatives.size() + 1);
  if (include_positive)
    logits.push_back(positive_logit);
  for (const WeightedNegative &n: negatives) {
    if (!(n.beta > 0.0))
      throw Error(ErrorKind::InvalidConfig, "negative weight must be positive");
    logits.push_back(
        ad::add_scalar(ad::scale(ad::cosine_similarity(anchor, n.embedding), inv_tau), std::log(n.beta)));
  }
  return ad::logsumexp(ad::concat_cols(logits)) - positive_logit;
}

ContrastiveResult contrastive_loss(std::span<const AnchorEmbeddings> anchors,
                                   std::optional<double> d_max, const ContrastiveConfig &cfg) {
  cfg.validate();
  std::vector<Tensor> terms;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const AnchorEmbeddings &a = anchors[k];
    if (a.decoys.size() != a.decoy_rmsd.size())
      throw Error(ErrorKind::LengthMismatch, "decoy embeddings and rmsd values differ in count");

    const std::optional<double> norm = cfg.dmax_mode == DmaxMode::Global ? d_max : a.anchor_max_rmsd;
    std::vector<WeightedNegative> negatives;
    std::vector<std::size_t> positives;
    for (std::size_t d = 0; d < a.decoys.size(); ++d) {
      const double r = a.decoy_rmsd[d];
      if (is_positive_pose(r, cfg.positive_rmsd_max)) {
        positives.push_back(d);
      } else if (cfg.include_decoy_negatives) {
        const double w =
            cfg.uniform_weights ? 1.0 : beta(r, norm, NegativeCategory::DecoyNegative, cfg.alpha);
        negatives.push_back({ a.decoys[d], w });
      }
    }
    if (cfg.include_cross_complex_negatives) {
      for (std::size_t other = 0; other < anchors.size(); ++other) {
        if (other != k)
          negatives.push_back({ anchors[other].anchor, 1.0 });
      }
    }
    if (positives.empty() || negatives.empty())
      continue;
    for (std::size_t p: positives) {
      terms.push_back(info_nce_pair(a.anchor, a.decoys[p], negatives, cfg.tau,
                                    cfg.include_positive_in_denominator));
    }
  }

  if (terms.empty())
    throw Error(ErrorKind::NoPositivePairsInBatch, "no anchor has a positive pair");
  ContrastiveResult out;
  out.pairs = terms.size();
  out.loss = ad::scale(ad::sum(ad::concat_cols(terms)), 1.0 / static_cast<double>(terms.size()));
  return out;
}

Tensor dsm_loss(std::span<const ScoreSample> samples) {
  if (samples.empty())
    throw Error(ErrorKind::InvalidConfig, "denoising loss over zero samples");
  std::vector<Tensor> per_copy;
  per_copy.reserve(samples.size());
  for (const ScoreSample &s: samples) {
    if (!s.score.value().allFinite())
      throw Error(ErrorKind::NonFiniteScore, "score contains non-finite values");
    if (s.score.rows() != s.noise.rows() || s.score.cols() != s.noise.cols())
      throw Error(ErrorKind::ShapeMismatch, "score and noise shapes differ");
    const Tensor target = Tensor::constant(-s.noise / (s.sigma * s.sigma));
    per_copy.push_back(ad::sum(ad::square(s.score - target)));
  }
  return ad::scale(ad::sum(ad::concat_cols(per_copy)), 1.0 / static_cast<double>(samples.size()));
}

Tensor total_loss(const Tensor &l1, const Tensor &l2, double mu) {
  if (!(mu >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "mu must be non-negative");
  return l1 + ad::scale(l2, mu);
}

double total_loss(double l1, double l2, double mu) {
  if (!(mu >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "mu must be non-negative");
  return l1 + mu * l2;
}

}  // namespace decoyforge
