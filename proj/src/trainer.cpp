//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"

namespace decoyforge {

using ad::Matrix;
using ad::Tensor;
using nlohmann::json;

namespace {

constexpr std::uint64_t kTagValidation = 0x76616c;  // "val"
constexpr std::uint64_t kTagFinetune = 0x66746e;    // "ftn"
constexpr std::uint64_t kTagHead = 0x686564;        // "hed"
constexpr std::uint64_t kTagSplit = 0x73706c;       // "spl"

bool has_prefix(const std::string &name, std::initializer_list<std::string_view> prefixes) {
  for (std::string_view p: prefixes) {
    if (name.starts_with(p))
      return true;
  }
  return false;
}

std::vector<Tensor> select_params(const Encoder &model,
                                  std::initializer_list<std::string_view> excluded) {
  std::vector<Tensor> out;
  const ParameterSet &ps = model.params();
  for (const std::string &name: ps.names()) {
    if (!has_prefix(name, excluded))
      out.push_back(ps.at(name));
  }
  return out;
}

bool all_finite(std::span<const Matrix> grads) {
  for (const Matrix &g: grads) {
    if (!g.allFinite())
      return false;
  }
  return true;
}

Matrix noise_matrix(const Coords &noise) {
  Matrix m(static_cast<ad::Index>(noise.size()), 3);
  for (std::size_t k = 0; k < noise.size(); ++k)
    m.row(static_cast<ad::Index>(k)) = noise[k].transpose();
  return m;
}

double mean_of(const std::vector<double> &v) {
  if (v.empty())
    return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !(weight_decay >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "lr and weight_decay must be non-negative");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    throw Error(ErrorKind::InvalidConfig, "Adam betas must lie in [0, 1)");
  if (!(adam_eps > 0.0))
    throw Error(ErrorKind::InvalidConfig, "adam_eps must be positive");
  if (pretrain_epochs < 0 || finetune_max_epochs < 0)
    throw Error(ErrorKind::InvalidConfig, "epoch counts must be non-negative");
  if (early_stop_patience < 1 || lr_reduce_patience < 1)
    throw Error(ErrorKind::InvalidConfig, "patience values must be at least 1");
  if (!(lr_reduce_factor > 0.0 && lr_reduce_factor <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "lr_reduce_factor must lie in (0, 1]");
  if (pretrain_batch == 0 || finetune_batch == 0)
    throw Error(ErrorKind::InvalidConfig, "batch sizes must be positive");
  if (!(pretrain_val_fraction >= 0.0 && pretrain_val_fraction < 1.0))
    throw Error(ErrorKind::InvalidConfig, "pretrain_val_fraction must lie in [0, 1)");
}

std::string train_config_to_json(const TrainConfig &cfg) {
  json j;
  j["lr"] = cfg.lr;
  j["weight_decay"] = cfg.weight_decay;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["adam_eps"] = cfg.adam_eps;
  j["pretrain_epochs"] = cfg.pretrain_epochs;
  j["finetune_max_epochs"] = cfg.finetune_max_epochs;
  j["early_stop_patience"] = cfg.early_stop_patience;
  j["lr_reduce_factor"] = cfg.lr_reduce_factor;
  j["lr_reduce_patience"] = cfg.lr_reduce_patience;
  j["pretrain_batch"] = cfg.pretrain_batch;
  j["finetune_batch"] = cfg.finetune_batch;
  j["pretrain_val_fraction"] = cfg.pretrain_val_fraction;
  j["pretrain_early_stop"] = cfg.pretrain_early_stop;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

TrainConfig train_config_from_json(std::string_view json_text) {
  TrainConfig cfg;
  try {
    const json j = json::parse(json_text);
    for (const auto &[key, value]: j.items()) {
      if (key == "lr")
        cfg.lr = value.get<double>();
      else if (key == "weight_decay")
        cfg.weight_decay = value.get<double>();
      else if (key == "adam_beta1")
        cfg.adam_beta1 = value.get<double>();
      else if (key == "adam_beta2")
        cfg.adam_beta2 = value.get<double>();
      else if (key == "adam_eps")
        cfg.adam_eps = value.get<double>();
      else if (key == "pretrain_epochs")
        cfg.pretrain_epochs = value.get<int>();
      else if (key == "finetune_max_epochs")
        cfg.finetune_max_epochs = value.get<int>();
      else if (key == "early_stop_patience")
        cfg.early_stop_patience = value.get<int>();
      else if (key == "lr_reduce_factor")
        cfg.lr_reduce_factor = value.get<double>();
      else if (key == "lr_reduce_patience")
        cfg.lr_reduce_patience = value.get<int>();
      else if (key == "pretrain_batch")
        cfg.pretrain_batch = value.get<std::size_t>();
      else if (key == "finetune_batch")
        cfg.finetune_batch = value.get<std::size_t>();
      else if (key == "pretrain_val_fraction")
        cfg.pretrain_val_fraction = value.get<double>();
      else if (key == "pretrain_early_stop")
        cfg.pretrain_early_stop = value.get<bool>();
      else if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else
        throw Error(ErrorKind::InvalidConfig, "unknown train key " + key);
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::InvalidConfig, std::string("train: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Optimizer

AdamW::AdamW(std::vector<Tensor> params, double lr, double weight_decay, double beta1,
             double beta2, double eps)
    : params_(std::move(params)), lr_(lr), weight_decay_(weight_decay), beta1_(beta1),
      beta2_(beta2), eps_(eps) {
  for (const Tensor &p: params_) {
    m_.push_back(Matrix::Zero(p.rows(), p.cols()));
    v_.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
}

void AdamW::step(std::span<const Matrix> grads) {
  if (grads.size() != params_.size())
    throw Error(ErrorKind::LengthMismatch, "gradient count does not match parameter count");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const Matrix &g = grads[k];
    if (g.rows() != params_[k].rows() || g.cols() != params_[k].cols())
      throw Error(ErrorKind::ShapeMismatch, "gradient shape does not match parameter");
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g;
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g.cwiseProduct(g);
    if (lr_ == 0.0)
      continue;
    const Matrix &theta = params_[k].value();
    const Matrix update = (m_[k].array() / bc1)
                              / ((v_[k].array() / bc2).sqrt() + eps_)
                          + weight_decay_ * theta.array();
    params_[k].assign(theta - lr_ * update);
  }
}

// ---------------------------------------------------------------------------
// Metrics

std::string MetricReport::to_json() const {
  json j;
  j["rmse"] = rmse;
  j["pearson_r"] = pearson_r ? json(*pearson_r) : json(nullptr);
  j["n"] = n;
  return j.dump(2);
}

MetricReport compute_metrics(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size())
    throw Error(ErrorKind::LengthMismatch, "label and prediction counts differ");
  if (truth.empty())
    throw Error(ErrorKind::EmptySplit, "no samples to evaluate");
  const auto n = static_cast<double>(truth.size());
  MetricReport r;
  r.n = truth.size();
  double sse = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    sse += (predicted[i] - truth[i]) * (predicted[i] - truth[i]);
  r.rmse = std::sqrt(sse / n);
  if (truth.size() >= 2) {
    const double my = std::accumulate(truth.begin(), truth.end(), 0.0) / n;
    const double mp = std::accumulate(predicted.begin(), predicted.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      sxy += (truth[i] - my) * (predicted[i] - mp);
      sxx += (truth[i] - my) * (truth[i] - my);
      syy += (predicted[i] - mp) * (predicted[i] - mp);
    }
    if (sxx > 0.0 && syy > 0.0)
      r.pearson_r = sxy / std::sqrt(sxx * syy);
  }
  return r;
}

MetricReport evaluate(const Encoder &model, std::span<const LabeledComplex> data) {
  std::vector<double> y, yhat;
  for (const LabeledComplex &c: data) {
    y.push_back(c.affinity);
    yhat.push_back(model.predict_affinity(c.graph).item());
  }
  return compute_metrics(y, yhat);
}

std::string loss_curve_csv(std::span<const EpochLog> curve) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (const EpochLog &e: curve) {
    out += std::to_string(e.epoch) + "," + fmt(e.train_loss) + ",";
    if (e.val_loss)
      out += fmt(*e.val_loss);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pretraining

Tensor pretrain_objective(const Encoder &model, const PretrainBatch &batch,
                          const ObjectiveConfig &cfg, StepLosses *losses) {
  if (cfg.dsm.score_mode != ScoreMode::Head)
    throw Error(ErrorKind::InvalidConfig, "training requires score_mode = head");

  std::vector<AnchorEmbeddings> anchors;
  anchors.reserve(batch.anchors.size());
  for (const AnchorSample &a: batch.anchors) {
    AnchorEmbeddings e;
    e.anchor = model.project(model.embed(a.anchor));
    for (const DecoySample &d: a.decoys) {
      e.decoys.push_back(model.project(model.embed(d.graph)));
      e.decoy_rmsd.push_back(d.rmsd);
    }
    e.anchor_max_rmsd = a.anchor_max_rmsd;
    anchors.push_back(std::move(e));
  }

  Tensor l1 = Tensor::constant(0.0);
  std::size_t pairs = 0;
  try {
    ContrastiveResult c = contrastive_loss(anchors, batch.d_max, cfg.contrastive);
    l1 = c.loss;
    pairs = c.pairs;
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::NoPositivePairsInBatch)
      throw;
  }

  Tensor l2 = Tensor::constant(0.0);
  if (cfg.dsm.mu != 0.0) {
    std::vector<ScoreSample> samples;
    for (const AnchorSample &a: batch.anchors) {
      for (const PerturbedGraph &p: a.perturbed)
        samples.push_back({ model.score(p.graph), noise_matrix(p.noise), p.sigma });
    }
    if (!samples.empty())
      l2 = dsm_loss(samples);
  }

  Tensor total = total_loss(l1, l2, cfg.dsm.mu);
  if (losses) {
    losses->l1 = l1.item();
    losses->l2 = l2.item();
    losses->total = total.item();
    losses->pairs = pairs;
  }
  return total;
}

double autograd_dsm_loss(const Encoder &model, const PretrainBatch &batch) {
  std::vector<ScoreSample> samples;
  for (const AnchorSample &a: batch.anchors) {
    for (const PerturbedGraph &p: a.perturbed)
      samples.push_back(
          { Tensor::constant(model.autograd_score(p.graph)), noise_matrix(p.noise), p.sigma });
  }
  if (samples.empty())
    return 0.0;
  return dsm_loss(samples).item();
}

namespace {

struct PretrainSplit {
  DatasetView train;
  std::optional<DatasetView> validation;
};

PretrainSplit split_for_pretraining(const DatasetView &view, const TrainConfig &cfg) {
  PretrainSplit out { view, std::nullopt };
  if (cfg.pretrain_val_fraction <= 0.0 || view.size() < 2)
    return out;
  std::vector<std::string> ids = view.complex_ids();
  Rng rng(mix_seed({ cfg.seed, kTagSplit }));
  for (std::size_t i = ids.size() - 1; i > 0; --i)
    std::swap(ids[i], ids[rng.below(i + 1)]);
  const auto n_val = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.pretrain_val_fraction * static_cast<double>(ids.size()))),
      1, ids.size() - 1);
  const std::set<std::string> val_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_val));
  const std::set<std::string> train_ids(ids.begin() + static_cast<std::ptrdiff_t>(n_val), ids.end());
  out.train = exclusion_filter(view, val_ids);
  out.validation = exclusion_filter(view, train_ids);
  return out;
}

}  // namespace

PretrainResult pretrain(const DatasetView &view, Encoder model, const ObjectiveConfig &objective,
                        const TrainConfig &train, SamplerConfig sampler,
                        const ProgressFn &progress) {
  train.validate();
  objective.contrastive.validate();
  objective.dsm.validate();
  if (view.empty())
    throw Error(ErrorKind::EmptyDataset, "empty dataset");

  PretrainResult result { model.clone(), {}, false, {} };
  Encoder &m = result.model;
  sampler.batch_size = train.pretrain_batch;
  sampler.sigma = objective.dsm.sigma;
  sampler.cutoff = m.config().cutoff;

  const PretrainSplit split = split_for_pretraining(view, train);
  const std::size_t spe = steps_per_epoch(split.train.size(), sampler.batch_size);

  // The regression head is not part of the pretraining loss; the energy
  // head only enters the autograd score used for evaluation.
  AdamW opt(select_params(m, { Encoder::kRegressionPrefix, "head.energy." }), train.lr,
            train.weight_decay, train.adam_beta1, train.adam_beta2, train.adam_eps);

  ParameterSet last_good = m.params().clone();
  ParameterSet best = last_good;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;

  std::uint64_t step = 0;
  for (int epoch = 1; epoch <= train.pretrain_epochs; ++epoch) {
    std::vector<double> totals, l1s, l2s;
    bool diverged = false;
    for (std::size_t s = 0; s < spe; ++s, ++step) {
      try {
        const PretrainBatch batch = sample_pretrain_batch(split.train, sampler, train.seed, step);
        StepLosses losses;
        const Tensor loss = pretrain_objective(m, batch, objective, &losses);
        if (!std::isfinite(losses.total)) {
          result.divergence = "non-finite loss at step " + std::to_string(step);
          diverged = true;
          break;
        }
        const std::vector<Matrix> grads = ad::grad(loss, opt.params());
        if (!all_finite(grads)) {
          result.divergence = "non-finite gradient at step " + std::to_string(step);
          diverged = true;
          break;
        }
        opt.step(grads);
        totals.push_back(losses.total);
        l1s.push_back(losses.l1);
        l2s.push_back(losses.l2);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::NonFiniteActivation && e.kind() != ErrorKind::NonFiniteScore)
          throw;
        result.divergence = e.what();
        diverged = true;
        break;
      }
    }
    if (diverged) {
      m.load_values(last_good);
      result.diverged = true;
      return result;
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = mean_of(totals);
    log.contrastive = mean_of(l1s);
    log.denoising = mean_of(l2s);
    log.lr = opt.lr();
    if (split.validation) {
      const std::size_t val_steps = steps_per_epoch(split.validation->size(), sampler.batch_size);
      std::vector<double> vals;
      for (std::size_t s = 0; s < val_steps; ++s) {
        const PretrainBatch batch = sample_pretrain_batch(
            *split.validation, sampler, mix_seed({ train.seed, kTagValidation }), s);
        StepLosses losses;
        pretrain_objective(m, batch, objective, &losses);
        vals.push_back(losses.total);
      }
      log.val_loss = mean_of(vals);
    }
    result.curve.push_back(log);
    if (progress)
      progress(log);
    last_good = m.params().clone();

    if (split.validation && train.pretrain_early_stop) {
      if (*log.val_loss < best_val) {
        best_val = *log.val_loss;
        best_epoch = epoch;
        best = last_good;
      } else if (epoch - best_epoch >= train.early_stop_patience) {
        m.load_values(best);
        break;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Fine-tuning

FinetuneResult finetune(Encoder model, const LabeledSplits &splits, const TrainConfig &train,
                        const ProgressFn &progress) {
  train.validate();
  if (splits.train.empty())
    throw Error(ErrorKind::EmptySplit, "training split is empty");
  if (splits.validation.empty())
    throw Error(ErrorKind::EmptySplit, "validation split is empty");

  FinetuneResult result { model.clone(), {}, 0, 0, {}, std::nullopt };
  Encoder &m = result.model;
  m.reinit_regression_head(mix_seed({ train.seed, kTagHead }));

  AdamW opt(select_params(m, { "head.projection.", "head.energy.", "head.score." }), train.lr,
            train.weight_decay, train.adam_beta1, train.adam_beta2, train.adam_eps);

  const auto mse_of = [&](std::span<const LabeledComplex> data) {
    double sse = 0.0;
    for (const LabeledComplex &c: data) {
      const double d = m.predict_affinity(c.graph).item() - c.affinity;
      sse += d * d;
    }
    return sse / static_cast<double>(data.size());
  };

  ParameterSet best = m.params().clone();
  double best_val = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  std::vector<std::size_t> order(splits.train.size());
  for (int epoch = 1; epoch <= train.finetune_max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    Rng rng(mix_seed({ train.seed, kTagFinetune, static_cast<std::uint64_t>(epoch) }));
    for (std::size_t i = order.size() - 1; i > 0; --i)
      std::swap(order[i], order[rng.below(i + 1)]);

    double sse = 0.0;
    for (std::size_t first = 0; first < order.size(); first += train.finetune_batch) {
      const std::size_t last = std::min(order.size(), first + train.finetune_batch);
      std::vector<Tensor> errors;
      for (std::size_t k = first; k < last; ++k) {
        const LabeledComplex &c = splits.train[order[k]];
        errors.push_back(ad::square(ad::add_scalar(m.predict_affinity(c.graph), -c.affinity)));
      }
      const Tensor loss = ad::mean(ad::concat_cols(errors));
      const double value = loss.item();
      if (!std::isfinite(value))
        throw Error(ErrorKind::DivergedLoss, "non-finite fine-tuning loss");
      sse += value * static_cast<double>(last - first);
      opt.step(ad::grad(loss, opt.params()));
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = sse / static_cast<double>(order.size());
    log.val_loss = mse_of(splits.validation);
    log.lr = opt.lr();
    result.curve.push_back(log);
    result.epochs_run = epoch;
    if (progress)
      progress(log);

    if (*log.val_loss < best_val) {
      best_val = *log.val_loss;
      result.best_epoch = epoch;
      best = m.params().clone();
      since_improvement = 0;
    } else {
      ++since_improvement;
      if (epoch - result.best_epoch >= train.early_stop_patience)
        break;
      if (since_improvement % train.lr_reduce_patience == 0)
        opt.set_lr(opt.lr() * train.lr_reduce_factor);
    }
  }

  if (result.best_epoch > 0)
    m.load_values(best);
  result.validation = evaluate(m, splits.validation);
  if (!splits.test.empty())
    result.test = evaluate(m, splits.test);
  return result;
}

}  // namespace decoyforge
