//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_OBJECTIVE_HPP_
#define DECOYFORGE_OBJECTIVE_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decoyforge/autodiff.hpp"
#include "decoyforge/decoy.hpp"

namespace decoyforge {

enum class NegativeCategory { DecoyNegative, CrossComplex };

enum class DmaxMode { Global, PerAnchor };

enum class ScoreMode { Head, Autograd };

struct ContrastiveConfig {
  double tau = 0.5;
  double alpha = 1.0;
  double positive_rmsd_max = kPositiveRmsdMax;
  bool include_decoy_negatives = true;
  bool include_cross_complex_negatives = true;
  // Adds the positive's own term to the denominator (textbook InfoNCE).
  bool include_positive_in_denominator = false;
  // Uses beta = 1 for every negative (one-category loss).
  bool uniform_weights = false;
  DmaxMode dmax_mode = DmaxMode::Global;

  void validate() const;
};

struct DsmConfig {
  double sigma = 0.5;
  double mu = 1.0;
  ScoreMode score_mode = ScoreMode::Head;

  void validate() const;
};

struct ObjectiveConfig {
  ContrastiveConfig contrastive;
  DsmConfig dsm;
};

std::string objective_config_to_json(const ObjectiveConfig &cfg);
ObjectiveConfig objective_config_from_json(std::string_view json_text);

/**
 * Negative weight: alpha * rmsd / d_max for a decoy negative of the anchor,
 * 1 for another real complex. Throws Error{DmaxUnavailable} for decoy
 * negatives without a positive d_max.
 */
double beta(double rmsd, std::optional<double> d_max, NegativeCategory category, double alpha);

struct WeightedNegative {
  ad::Tensor embedding;  // 1 x d
  double beta = 1.0;
};

/**
 * -[sim(z_k, z_i)/tau - log sum_j beta_kj exp(sim(z_k, z_j)/tau)] with
 * cosine similarity, evaluated through logsumexp. The sum runs over the
 * negatives only unless include_positive is set.
 *
 * Throws Error{ZeroVector} or Error{NoNegatives}.
 */
ad::Tensor info_nce_pair(const ad::Tensor &anchor, const ad::Tensor &positive,
                         std::span<const WeightedNegative> negatives, double tau,
                         bool include_positive = false);

/// Embeddings of one anchor's real complex and its sampled decoys.
struct AnchorEmbeddings {
  ad::Tensor anchor;
  std::vector<ad::Tensor> decoys;
  std::vector<double> decoy_rmsd;
  std::optional<double> anchor_max_rmsd;  // for DmaxMode::PerAnchor
};

struct ContrastiveResult {
  ad::Tensor loss;  // undefined (1x1 zero constant) when pairs == 0
  std::size_t pairs = 0;
};

/**
 * Mean of l_{k,i} over every (anchor, positive decoy) pair. Negatives of
 * anchor k are its decoys above the positive threshold plus the other
 * anchors' real complexes. Anchors with no positives, or no negatives,
 * contribute nothing.
 *
 * Throws Error{NoPositivePairsInBatch} when no pair exists.
 */
ContrastiveResult contrastive_loss(std::span<const AnchorEmbeddings> anchors,
                                   std::optional<double> d_max, const ContrastiveConfig &cfg);

/// One perturbed copy: predicted score and the added noise (both n_ligand x 3).
struct ScoreSample {
  ad::Tensor score;
  ad::Matrix noise;
  double sigma = 0.0;
};

/**
 * Mean over copies of || score - (x - x') / sigma^2 ||^2, where
 * x' - x is the noise. Throws Error{NonFiniteScore}.
 */
ad::Tensor dsm_loss(std::span<const ScoreSample> samples);

/// L1 + mu * L2.
ad::Tensor total_loss(const ad::Tensor &l1, const ad::Tensor &l2, double mu);
double total_loss(double l1, double l2, double mu);

}  // namespace decoyforge

#endif  // DECOYFORGE_OBJECTIVE_HPP_
