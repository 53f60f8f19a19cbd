//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_GRADCHECK_HPP_
#define DECOYFORGE_GRADCHECK_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "decoyforge/autodiff.hpp"
#include "decoyforge/dataset.hpp"
#include "decoyforge/encoder.hpp"
#include "decoyforge/objective.hpp"

namespace decoyforge {

struct GradCase {
  std::string name;
  std::uint64_t seed = 0;
  ad::GradCheckResult result;
};

struct GradSuiteResult {
  std::vector<GradCase> cases;
  bool ok = true;
  std::size_t failures() const;
};

/// Names of the per-op cases, in run order.
std::vector<std::string> gradient_op_names();

/**
 * Finite-difference checks of every autodiff op (random shapes and values
 * per seed) and of the full pretraining loss w.r.t. all encoder parameters
 * on a small random batch. Seeds run from first_seed to first_seed + count - 1.
 */
GradSuiteResult run_gradient_suite(std::uint64_t first_seed, std::size_t count,
                                   const ad::GradCheckOptions &options = {},
                                   const std::function<void(const GradCase &)> &on_case = {});

/// Small random pretraining batch (2 anchors, 3 decoys, 2 perturbed copies).
PretrainBatch random_tiny_batch(std::uint64_t seed);

/// Encoder small enough for exhaustive finite differences.
EncoderConfig tiny_encoder_config(std::uint64_t seed);

/// Checks d(L1 + mu L2)/d(parameters) for a tiny encoder and batch.
ad::GradCheckResult check_full_loss(std::uint64_t seed, const ObjectiveConfig &objective,
                                    const ad::GradCheckOptions &options = {});

}  // namespace decoyforge

#endif  // DECOYFORGE_GRADCHECK_HPP_
