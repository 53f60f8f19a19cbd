//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_ENCODER_HPP_
#define DECOYFORGE_ENCODER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decoyforge/autodiff.hpp"
#include "decoyforge/graph.hpp"

namespace decoyforge {

struct EncoderConfig {
  int layers = 3;
  int hidden_dim = 64;
  int rbf_bins = 16;
  double cutoff = kGraphCutoff;
  std::uint64_t init_seed = 0;

  void validate() const;
};

std::string encoder_config_to_json(const EncoderConfig &cfg);
EncoderConfig encoder_config_from_json(std::string_view json_text);

/// Named, ordered parameter tensors (all leaves).
class ParameterSet {
 public:
  ad::Tensor &add(const std::string &name, ad::Matrix value);
  ad::Tensor &at(const std::string &name);
  /// Rebinds an existing name to another tensor of the same shape.
  void set(const std::string &name, ad::Tensor tensor);
  const ad::Tensor &at(const std::string &name) const;
  bool contains(const std::string &name) const { return index_.contains(name); }

  const std::vector<std::string> &names() const { return names_; }
  std::vector<ad::Tensor> tensors() const;
  std::vector<ad::Tensor> tensors_with_prefix(std::string_view prefix) const;
  std::size_t scalar_count() const;

  /// Deep copy: new leaves with copied values.
  ParameterSet clone() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<ad::Tensor> tensors_;
};

/// Directed message-passing view of a ComplexGraph.
struct GraphInputs {
  ad::Tensor features;   // n x kNodeFeatureDim (constant)
  ad::Tensor positions;  // n x 3 (constant unless coordinate gradients are wanted)
  std::vector<int> src;
  std::vector<int> dst;
  std::vector<int> edge_type;
  std::vector<int> ligand_nodes;
  int num_nodes = 0;
};

GraphInputs graph_inputs(const ComplexGraph &g);
/// Same graph, ligand positions replaced by a tensor (n_ligand x 3).
GraphInputs graph_inputs(const ComplexGraph &g, const ad::Tensor &ligand_positions);

/**
 * Invariant message-passing encoder. Messages along each directed edge are
 * conditioned on the edge type and a Gaussian radial-basis expansion of the
 * interatomic distance, scaled by a cosine envelope that vanishes at the
 * cutoff. Node updates are gated residual MLPs; the graph embedding is the
 * mean node state.
 *
 * Heads: projection (contrastive), energy (scalar), regression (affinity),
 * and a score head that predicts one 3-vector per ligand atom as a weighted
 * sum of unit bond directions.
 */
class Encoder {
 public:
  explicit Encoder(EncoderConfig cfg);

  const EncoderConfig &config() const { return cfg_; }
  ParameterSet &params() { return params_; }
  const ParameterSet &params() const { return params_; }

  /// Independent copy (parameters are not shared).
  Encoder clone() const;
  /// Copies parameter values from another set with the same names and shapes.
  void load_values(const ParameterSet &from);

  struct Forward {
    ad::Tensor nodes;      // n x hidden
    ad::Tensor embedding;  // 1 x hidden
    ad::Tensor rbf;        // E x rbf_bins (directed edges)
    ad::Tensor envelope;   // E x 1
    ad::Tensor distance;   // E x 1
  };

  /// Throws Error{NonFiniteActivation}.
  Forward forward(const GraphInputs &in) const;

  ad::Tensor embed(const ComplexGraph &g) const;
  ad::Tensor project(const ad::Tensor &embedding) const;
  ad::Tensor energy_head(const ad::Tensor &embedding) const;
  ad::Tensor regression_head(const ad::Tensor &embedding) const;

  ad::Tensor energy(const ComplexGraph &g) const;
  ad::Tensor predict_affinity(const ComplexGraph &g) const;

  /// n_ligand x 3 score from the score head.
  ad::Tensor score(const GraphInputs &in, const Forward &fwd) const;
  ad::Tensor score(const ComplexGraph &g) const;

  /// d energy / d ligand positions by reverse mode (evaluation only).
  ad::Matrix autograd_score(const ComplexGraph &g) const;

  void reinit_regression_head(std::uint64_t seed);
  void zero_regression_output();

  static constexpr std::string_view kRegressionPrefix = "head.regression.";

 private:
  void init_linear(const std::string &name, int fan_in, int fan_out, std::uint64_t seed);
  ad::Tensor linear(const ad::Tensor &x, const std::string &name) const;
  ad::Tensor mlp2(const ad::Tensor &x, const std::string &name) const;

  EncoderConfig cfg_;
  ParameterSet params_;
  ad::Tensor rbf_centers_;
  double rbf_gamma_ = 1.0;
};

}  // namespace decoyforge

#endif  // DECOYFORGE_ENCODER_HPP_
