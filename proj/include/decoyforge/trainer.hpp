//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_TRAINER_HPP_
#define DECOYFORGE_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decoyforge/dataset.hpp"
#include "decoyforge/encoder.hpp"
#include "decoyforge/objective.hpp"

namespace decoyforge {

struct TrainConfig {
  double lr = 5e-4;
  double weight_decay = 1e-6;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int pretrain_epochs = 20;
  int finetune_max_epochs = 300;
  int early_stop_patience = 40;
  double lr_reduce_factor = 0.1;
  int lr_reduce_patience = 10;
  std::size_t pretrain_batch = 8;
  std::size_t finetune_batch = 128;
  // Fraction of complexes held out for a pretraining validation loss; 0
  // disables it. Pretraining early stop only applies when this is > 0 and
  // pretrain_early_stop is set.
  double pretrain_val_fraction = 0.0;
  bool pretrain_early_stop = false;
  std::uint64_t seed = 0;

  void validate() const;
};

std::string train_config_to_json(const TrainConfig &cfg);
TrainConfig train_config_from_json(std::string_view json_text);

/// Adam with decoupled weight decay: theta -= lr * (m_hat / (sqrt(v_hat) + eps) + wd * theta).
class AdamW {
 public:
  AdamW(std::vector<ad::Tensor> params, double lr, double weight_decay, double beta1 = 0.9,
        double beta2 = 0.999, double eps = 1e-8);

  void step(std::span<const ad::Matrix> grads);
  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  const std::vector<ad::Tensor> &params() const { return params_; }

 private:
  std::vector<ad::Tensor> params_;
  std::vector<ad::Matrix> m_, v_;
  double lr_, weight_decay_, beta1_, beta2_, eps_;
  long t_ = 0;
};

struct MetricReport {
  double rmse = 0.0;
  std::optional<double> pearson_r;  // null when either side has zero variance
  std::size_t n = 0;

  std::string to_json() const;
};

/// RMSE and sample Pearson correlation. Throws Error{EmptySplit} for n == 0.
MetricReport compute_metrics(std::span<const double> truth, std::span<const double> predicted);

MetricReport evaluate(const Encoder &model, std::span<const LabeledComplex> data);

struct EpochLog {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> val_loss;
  double contrastive = 0.0;  // pretraining only: mean L1
  double denoising = 0.0;    // pretraining only: mean L2
  double lr = 0.0;
};

/// epoch,train_loss,val_loss with %.17g values.
std::string loss_curve_csv(std::span<const EpochLog> curve);

struct StepLosses {
  double l1 = 0.0;
  double l2 = 0.0;
  double total = 0.0;
  std::size_t pairs = 0;
};

/**
 * Builds L = L1 + mu L2 for one batch. The returned tensor is attached to
 * the encoder parameters; perturbed copies feed only L2 and decoys only L1.
 */
ad::Tensor pretrain_objective(const Encoder &model, const PretrainBatch &batch,
                              const ObjectiveConfig &cfg, StepLosses *losses = nullptr);

/// DSM loss with scores taken as d energy / d x' (evaluation only).
double autograd_dsm_loss(const Encoder &model, const PretrainBatch &batch);

struct PretrainResult {
  Encoder model;
  std::vector<EpochLog> curve;
  bool diverged = false;
  std::string divergence;
};

using ProgressFn = std::function<void(const EpochLog &)>;

/**
 * Runs pretrain_epochs epochs of sampled batches with AdamW. On a
 * non-finite loss the parameters of the last completed epoch are restored
 * and the result is flagged as diverged.
 */
PretrainResult pretrain(const DatasetView &view, Encoder model, const ObjectiveConfig &objective,
                        const TrainConfig &train, SamplerConfig sampler = {},
                        const ProgressFn &progress = {});

struct FinetuneResult {
  Encoder model;
  std::vector<EpochLog> curve;  // train MSE, validation MSE
  int best_epoch = 0;
  int epochs_run = 0;
  MetricReport validation;
  std::optional<MetricReport> test;
};

/**
 * Replaces the regression head and trains the full model on MSE. The
 * learning rate is multiplied by lr_reduce_factor after lr_reduce_patience
 * epochs without validation improvement; training stops
 * early_stop_patience epochs after the best validation epoch. The
 * best-validation parameters are returned.
 *
 * Throws Error{EmptySplit} when train or validation is empty.
 */
FinetuneResult finetune(Encoder model, const LabeledSplits &splits, const TrainConfig &train,
                        const ProgressFn &progress = {});

}  // namespace decoyforge

#endif  // DECOYFORGE_TRAINER_HPP_
