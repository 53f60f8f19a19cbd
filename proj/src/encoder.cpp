//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/encoder.hpp"

#include <cmath>

#include <json.hpp>

#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"

namespace decoyforge {

using ad::Matrix;
using ad::Tensor;

namespace {

// Keeps summed messages on the scale of a single neighbour for pockets with
// a few dozen neighbours per atom.
constexpr double kMessageScale = 0.1;

std::string layer_name(int l, const char *part) { return "layer" + std::to_string(l) + "." + part; }

Tensor edge_type_onehot(const std::vector<int> &types) {
  Matrix m = Matrix::Zero(static_cast<ad::Index>(types.size()), kEdgeTypeCount);
  for (std::size_t e = 0; e < types.size(); ++e)
    m(static_cast<ad::Index>(e), types[e]) = 1.0;
  return Tensor::constant(std::move(m));
}

Tensor gated(const Tensor &pre, int width) {
  return ad::silu(ad::slice_cols(pre, 0, width)) * ad::sigmoid(ad::slice_cols(pre, width, width));
}

void check_finite(const Tensor &t, const char *what) {
  if (!t.value().allFinite())
    throw Error(ErrorKind::NonFiniteActivation, std::string(what) + " is not finite");
}

}  // namespace

void EncoderConfig::validate() const {
  if (layers < 1)
    throw Error(ErrorKind::InvalidConfig, "encoder needs at least one layer");
  if (hidden_dim < 1 || rbf_bins < 2)
    throw Error(ErrorKind::InvalidConfig, "encoder dimensions must be positive (rbf_bins >= 2)");
  if (!(cutoff > 0.0))
    throw Error(ErrorKind::InvalidConfig, "encoder cutoff must be positive");
}

std::string encoder_config_to_json(const EncoderConfig &cfg) {
  nlohmann::json j;
  j["layers"] = cfg.layers;
  j["hidden_dim"] = cfg.hidden_dim;
  j["rbf_bins"] = cfg.rbf_bins;
  j["cutoff"] = cfg.cutoff;
  j["init_seed"] = cfg.init_seed;
  return j.dump();
}

EncoderConfig encoder_config_from_json(std::string_view json_text) {
  EncoderConfig cfg;
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto &[key, value]: j.items()) {
      if (key == "layers")
        cfg.layers = value.get<int>();
      else if (key == "hidden_dim")
        cfg.hidden_dim = value.get<int>();
      else if (key == "rbf_bins")
        cfg.rbf_bins = value.get<int>();
      else if (key == "cutoff")
        cfg.cutoff = value.get<double>();
      else if (key == "init_seed")
        cfg.init_seed = value.get<std::uint64_t>();
      else
        throw Error(ErrorKind::InvalidConfig, "unknown encoder key " + key);
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::InvalidConfig, std::string("encoder: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Tensor &ParameterSet::add(const std::string &name, Matrix value) {
  if (auto it = index_.find(name); it != index_.end()) {
    tensors_[it->second] = Tensor::variable(std::move(value));
    return tensors_[it->second];
  }
  index_[name] = tensors_.size();
  names_.push_back(name);
  tensors_.push_back(Tensor::variable(std::move(value)));
  return tensors_.back();
}

Tensor &ParameterSet::at(const std::string &name) {
  auto it = index_.find(name);
  if (it == index_.end())
    throw Error(ErrorKind::InvalidConfig, "no parameter named " + name);
  return tensors_[it->second];
}

const Tensor &ParameterSet::at(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw Error(ErrorKind::InvalidConfig, "no parameter named " + name);
  return tensors_[it->second];
}

void ParameterSet::set(const std::string &name, Tensor tensor) {
  Tensor &slot = at(name);
  if (slot.rows() != tensor.rows() || slot.cols() != tensor.cols())
    throw Error(ErrorKind::ShapeMismatch, "parameter " + name + " has the wrong shape");
  slot = std::move(tensor);
}

std::vector<Tensor> ParameterSet::tensors() const { return tensors_; }

std::vector<Tensor> ParameterSet::tensors_with_prefix(std::string_view prefix) const {
  std::vector<Tensor> out;
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (names_[k].starts_with(prefix))
      out.push_back(tensors_[k]);
  }
  return out;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const Tensor &t: tensors_)
    n += static_cast<std::size_t>(t.size());
  return n;
}

ParameterSet ParameterSet::clone() const {
  ParameterSet out;
  for (std::size_t k = 0; k < names_.size(); ++k)
    out.add(names_[k], tensors_[k].value());
  return out;
}

GraphInputs graph_inputs(const ComplexGraph &g) {
  GraphInputs in;
  in.num_nodes = static_cast<int>(g.num_nodes());
  in.features = Tensor::constant(g.features);
  Matrix pos(in.num_nodes, 3);
  for (int n = 0; n < in.num_nodes; ++n)
    pos.row(n) = g.positions[n].transpose();
  in.positions = Tensor::constant(std::move(pos));
  for (const Edge &e: g.edges) {
    in.src.push_back(e.i);
    in.dst.push_back(e.j);
    in.edge_type.push_back(static_cast<int>(e.type));
    in.src.push_back(e.j);
    in.dst.push_back(e.i);
    in.edge_type.push_back(static_cast<int>(e.type));
  }
  in.ligand_nodes = g.ligand_nodes;
  return in;
}

GraphInputs graph_inputs(const ComplexGraph &g, const Tensor &ligand_positions) {
  GraphInputs in = graph_inputs(g);
  const auto n_ligand = static_cast<ad::Index>(g.ligand_nodes.size());
  if (ligand_positions.rows() != n_ligand || ligand_positions.cols() != 3)
    throw Error(ErrorKind::ShapeMismatch, "ligand position tensor has the wrong shape");
  const ad::Index n_protein = in.num_nodes - n_ligand;
  if (n_protein == 0) {
    in.positions = ligand_positions;
  } else {
    const Tensor protein = Tensor::constant(in.positions.value().topRows(n_protein));
    const Tensor parts[] = { protein, ligand_positions };
    in.positions = ad::concat_rows(parts);
  }
  return in;
}

Encoder::Encoder(EncoderConfig cfg): cfg_(cfg) {
  cfg_.validate();
  const int h = cfg_.hidden_dim;
  const int k = cfg_.rbf_bins;
  const std::uint64_t seed = cfg_.init_seed;

  init_linear("embed", kNodeFeatureDim, h, seed);
  for (int l = 0; l < cfg_.layers; ++l) {
    init_linear(layer_name(l, "message"), h, 2 * h, seed);
    init_linear(layer_name(l, "message.rbf"), k, 2 * h, seed);
    init_linear(layer_name(l, "message.type"), kEdgeTypeCount, 2 * h, seed);
    init_linear(layer_name(l, "update"), 2 * h, 2 * h, seed);
  }
  init_linear("head.projection.0", h, h, seed);
  init_linear("head.projection.1", h, h, seed);
  init_linear("head.energy.0", h, h, seed);
  init_linear("head.energy.1", h, 1, seed);
  init_linear("head.regression.0", h, h, seed);
  init_linear("head.regression.1", h, 1, seed);
  init_linear("head.score.0", 2 * h, h, seed);
  init_linear("head.score.rbf", k, h, seed);
  init_linear("head.score.1", h, 1, seed);

  Matrix centers(1, k);
  const double spacing = cfg_.cutoff / static_cast<double>(k - 1);
  for (int b = 0; b < k; ++b)
    centers(0, b) = spacing * b;
  rbf_centers_ = Tensor::constant(std::move(centers));
  rbf_gamma_ = 1.0 / (2.0 * spacing * spacing);
}

void Encoder::init_linear(const std::string &name, int fan_in, int fan_out, std::uint64_t seed) {
  Rng rng(mix_seed({ seed, hash_string(name) }));
  const double bound = std::sqrt(3.0 / static_cast<double>(fan_in));
  Matrix w(fan_in, fan_out);
  for (ad::Index i = 0; i < w.size(); ++i)
    w.data()[i] = rng.uniform(-bound, bound);
  params_.add(name + ".weight", std::move(w));
  params_.add(name + ".bias", Matrix::Zero(1, fan_out));
}

Tensor Encoder::linear(const Tensor &x, const std::string &name) const {
  return ad::matmul(x, params_.at(name + ".weight")) + params_.at(name + ".bias");
}

Tensor Encoder::mlp2(const Tensor &x, const std::string &name) const {
  return linear(ad::silu(linear(x, name + ".0")), name + ".1");
}

Encoder::Forward Encoder::forward(const GraphInputs &in) const {
  if (in.num_nodes == 0)
    throw Error(ErrorKind::NonFiniteActivation, "empty graph");
  const int h = cfg_.hidden_dim;
  Forward out;
  Tensor nodes = linear(in.features, "embed");

  const bool has_edges = !in.src.empty();
  Tensor type_onehot;
  if (has_edges) {
    const Tensor diff = ad::gather_rows(in.positions, in.dst) - ad::gather_rows(in.positions, in.src);
    out.distance = ad::sqrt(ad::sum_rows(ad::square(diff)));
    out.rbf = ad::exp(ad::scale(ad::square(out.distance - rbf_centers_), -rbf_gamma_));
    out.envelope = ad::scale(ad::cosine_cutoff(out.distance, cfg_.cutoff), kMessageScale);
    type_onehot = edge_type_onehot(in.edge_type);
  }

  for (int l = 0; l < cfg_.layers; ++l) {
    Tensor aggregate;
    if (has_edges) {
      const Tensor pre = ad::gather_rows(linear(nodes, layer_name(l, "message")), in.src)
                         + linear(out.rbf, layer_name(l, "message.rbf"))
                         + linear(type_onehot, layer_name(l, "message.type"));
      const Tensor message = gated(pre, h) * out.envelope;
      aggregate = ad::scatter_add_rows(message, in.dst, in.num_nodes);
    } else {
      aggregate = Tensor::constant(Matrix::Zero(in.num_nodes, h));
    }
    const Tensor parts[] = { nodes, aggregate };
    nodes = nodes + gated(linear(ad::concat_cols(parts), layer_name(l, "update")), h);
  }
  check_finite(nodes, "node states");
  out.nodes = nodes;
  out.embedding = ad::mean_cols(nodes);
  return out;
}

Tensor Encoder::embed(const ComplexGraph &g) const { return forward(graph_inputs(g)).embedding; }

Tensor Encoder::project(const Tensor &embedding) const {
  Tensor p = mlp2(embedding, "head.projection");
  check_finite(p, "projection");
  return p;
}

Tensor Encoder::energy_head(const Tensor &embedding) const {
  Tensor e = mlp2(embedding, "head.energy");
  check_finite(e, "energy");
  return e;
}

Tensor Encoder::regression_head(const Tensor &embedding) const {
  Tensor y = mlp2(embedding, "head.regression");
  check_finite(y, "affinity");
  return y;
}

Tensor Encoder::energy(const ComplexGraph &g) const { return energy_head(embed(g)); }

Tensor Encoder::predict_affinity(const ComplexGraph &g) const { return regression_head(embed(g)); }

Tensor Encoder::score(const GraphInputs &in, const Forward &fwd) const {
  const auto n_ligand = static_cast<ad::Index>(in.ligand_nodes.size());
  std::vector<int> local(static_cast<std::size_t>(in.num_nodes), -1);
  for (std::size_t k = 0; k < in.ligand_nodes.size(); ++k)
    local[in.ligand_nodes[k]] = static_cast<int>(k);

  std::vector<int> edges, target, self, other;
  for (std::size_t e = 0; e < in.dst.size(); ++e) {
    if (local[in.dst[e]] >= 0) {
      edges.push_back(static_cast<int>(e));
      target.push_back(local[in.dst[e]]);
      self.push_back(in.dst[e]);
      other.push_back(in.src[e]);
    }
  }
  if (edges.empty())
    return Tensor::constant(Matrix::Zero(n_ligand, 3));

  const Tensor pair_parts[] = { ad::gather_rows(fwd.nodes, self), ad::gather_rows(fwd.nodes, other) };
  const Tensor hidden = ad::silu(linear(ad::concat_cols(pair_parts), "head.score.0")
                                 + ad::matmul(ad::gather_rows(fwd.rbf, edges),
                                              params_.at("head.score.rbf.weight")));
  const Tensor weight = linear(hidden, "head.score.1") * ad::gather_rows(fwd.envelope, edges);
  const Tensor direction = (ad::gather_rows(in.positions, self) - ad::gather_rows(in.positions, other))
                           / ad::gather_rows(fwd.distance, edges);
  Tensor s = ad::scatter_add_rows(direction * weight, target, n_ligand);
  check_finite(s, "score");
  return s;
}

Tensor Encoder::score(const ComplexGraph &g) const {
  const GraphInputs in = graph_inputs(g);
  return score(in, forward(in));
}

Matrix Encoder::autograd_score(const ComplexGraph &g) const {
  Matrix lig(static_cast<ad::Index>(g.ligand_nodes.size()), 3);
  for (std::size_t k = 0; k < g.ligand_nodes.size(); ++k)
    lig.row(static_cast<ad::Index>(k)) = g.positions[g.ligand_nodes[k]].transpose();
  const Tensor x = Tensor::variable(std::move(lig));
  const Tensor e = energy_head(forward(graph_inputs(g, x)).embedding);
  const Tensor wrt[] = { x };
  return ad::grad(e, wrt).front();
}

Encoder Encoder::clone() const {
  Encoder copy = *this;
  copy.params_ = params_.clone();
  return copy;
}

void Encoder::load_values(const ParameterSet &from) {
  for (const std::string &name: params_.names()) {
    if (!from.contains(name))
      throw Error(ErrorKind::InvalidConfig, "missing parameter " + name);
    const Tensor &src = from.at(name);
    Tensor &dst = params_.at(name);
    if (src.rows() != dst.rows() || src.cols() != dst.cols())
      throw Error(ErrorKind::ShapeMismatch, "parameter " + name + " has the wrong shape");
    dst.assign(src.value());
  }
}

void Encoder::reinit_regression_head(std::uint64_t seed) {
  init_linear("head.regression.0", cfg_.hidden_dim, cfg_.hidden_dim, seed);
  init_linear("head.regression.1", cfg_.hidden_dim, 1, seed);
}

void Encoder::zero_regression_output() {
  Tensor &w = params_.at("head.regression.1.weight");
  w.assign(Matrix::Zero(w.rows(), w.cols()));
}

}  // namespace decoyforge
