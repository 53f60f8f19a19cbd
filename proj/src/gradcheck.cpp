//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "decoyforge/error.hpp"
#include "decoyforge/rng.hpp"
#include "decoyforge/trainer.hpp"

namespace decoyforge {

using ad::Matrix;
using ad::Tensor;

namespace {

using Inputs = std::vector<Tensor>;

struct OpCase {
  const char *name;
  // Builds inputs for a seed and returns the scalar function over them.
  std::function<std::pair<ad::ScalarFunction, std::vector<Matrix>>(Rng &)> make;
};

Matrix random_matrix(Rng &rng, ad::Index r, ad::Index c, double lo = -1.5, double hi = 1.5) {
  Matrix m(r, c);
  for (ad::Index i = 0; i < m.size(); ++i)
    m.data()[i] = rng.uniform(lo, hi);
  return m;
}

// Values bounded away from zero, with random sign.
Matrix nonzero_matrix(Rng &rng, ad::Index r, ad::Index c) {
  Matrix m(r, c);
  for (ad::Index i = 0; i < m.size(); ++i)
    m.data()[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
  return m;
}

ad::Index dim(Rng &rng) { return static_cast<ad::Index>(1 + rng.below(4)); }

// Contracts a tensor with a fixed random weight so every output entry matters.
ad::ScalarFunction weighted(std::function<Tensor(const Inputs &)> f, Matrix weight) {
  return [f = std::move(f), w = Tensor::constant(std::move(weight))](const Inputs &in) {
    const Tensor out = f(in);
    if (out.rows() == w.rows() && out.cols() == w.cols())
      return ad::sum(out * w);
    return ad::sum(out);
  };
}

using Made = std::pair<ad::ScalarFunction, std::vector<Matrix>>;

Made unary(Rng &rng, Matrix x, std::function<Tensor(const Tensor &)> op) {
  const ad::Index r = x.rows(), c = x.cols();
  return { weighted([op](const Inputs &in) { return op(in[0]); }, random_matrix(rng, r, c)),
           { std::move(x) } };
}

Made binary(Rng &rng, Matrix a, Matrix b, std::function<Tensor(const Tensor &, const Tensor &)> op) {
  const ad::Index r = std::max(a.rows(), b.rows()), c = std::max(a.cols(), b.cols());
  return { weighted([op](const Inputs &in) { return op(in[0], in[1]); }, random_matrix(rng, r, c)),
           { std::move(a), std::move(b) } };
}

const std::vector<OpCase> &op_cases() {
  static const std::vector<OpCase> cases = {
    { "add", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, r, c), ad::add); } },
    { "add_row_broadcast", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, 1, c), ad::add); } },
    { "add_col_broadcast", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, r, 1), ad::add); } },
    { "add_scalar_broadcast", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, 1, 1), ad::add); } },
    { "sub", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, 1, c), ad::sub); } },
    { "mul", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, r, c), ad::mul); } },
    { "mul_broadcast", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), random_matrix(g, r, 1), ad::mul); } },
    { "div", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), nonzero_matrix(g, r, c), ad::div); } },
    { "div_broadcast", [](Rng &g) { auto r = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, c), nonzero_matrix(g, 1, c), ad::div); } },
    { "neg", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::neg); } },
    { "scale", [](Rng &g) { const double s = g.uniform(-2, 2);
        return unary(g, random_matrix(g, dim(g), dim(g)), [s](const Tensor &x) { return ad::scale(x, s); }); } },
    { "add_scalar", [](Rng &g) { const double s = g.uniform(-2, 2);
        return unary(g, random_matrix(g, dim(g), dim(g)), [s](const Tensor &x) { return ad::add_scalar(x, s); }); } },
    { "matmul", [](Rng &g) { auto r = dim(g), k = dim(g), c = dim(g);
        return binary(g, random_matrix(g, r, k), random_matrix(g, k, c), ad::matmul); } },
    { "transpose", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::transpose); } },
    { "sum", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::sum); } },
    { "mean", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::mean); } },
    { "sum_rows", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::sum_rows); } },
    { "sum_cols", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::sum_cols); } },
    { "mean_cols", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::mean_cols); } },
    { "exp", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::exp); } },
    { "log", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g), 0.5, 3.0), ad::log); } },
    { "sqrt", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g), 0.5, 3.0), ad::sqrt); } },
    { "pow", [](Rng &g) { const double p = g.uniform(-1.5, 2.5);
        return unary(g, random_matrix(g, dim(g), dim(g), 0.5, 3.0), [p](const Tensor &x) { return ad::pow(x, p); }); } },
    { "square", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::square); } },
    { "tanh", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g)), ad::tanh); } },
    { "sigmoid", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g), -4, 4), ad::sigmoid); } },
    { "silu", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g), -4, 4), ad::silu); } },
    { "cosine_cutoff", [](Rng &g) {
        Matrix d = random_matrix(g, dim(g), 1, 0.1, 6.0);
        for (ad::Index i = 0; i < d.size(); ++i) {
          if (std::abs(d.data()[i] - 5.0) < 1e-3)
            d.data()[i] = 4.5;
        }
        return unary(g, std::move(d), [](const Tensor &x) { return ad::cosine_cutoff(x, 5.0); }); } },
    { "concat_cols", [](Rng &g) { auto r = dim(g);
        Matrix a = random_matrix(g, r, dim(g)), b = random_matrix(g, r, dim(g)), c = random_matrix(g, r, dim(g));
        const ad::Index cols = a.cols() + b.cols() + c.cols();
        return Made { weighted([](const Inputs &in) { return ad::concat_cols(in); }, random_matrix(g, r, cols)),
                      { a, b, c } }; } },
    { "concat_rows", [](Rng &g) { auto c = dim(g);
        Matrix a = random_matrix(g, dim(g), c), b = random_matrix(g, dim(g), c);
        const ad::Index rows = a.rows() + b.rows();
        return Made { weighted([](const Inputs &in) { return ad::concat_rows(in); }, random_matrix(g, rows, c)),
                      { a, b } }; } },
    { "slice_cols", [](Rng &g) { auto c = 1 + dim(g);
        const auto first = static_cast<ad::Index>(g.below(static_cast<std::uint64_t>(c)));
        const auto count = static_cast<ad::Index>(1 + g.below(static_cast<std::uint64_t>(c - first)));
        return unary(g, random_matrix(g, dim(g), c), [first, count](const Tensor &x) { return ad::slice_cols(x, first, count); }); } },
    { "gather_rows", [](Rng &g) { auto r = dim(g);
        std::vector<int> idx(1 + g.below(6));
        for (int &i: idx)
          i = static_cast<int>(g.below(static_cast<std::uint64_t>(r)));
        auto c = dim(g);
        const auto n = static_cast<ad::Index>(idx.size());
        return Made { weighted([idx](const Inputs &in) { return ad::gather_rows(in[0], idx); }, random_matrix(g, n, c)),
                      { random_matrix(g, r, c) } }; } },
    { "scatter_add_rows", [](Rng &g) { auto n_out = dim(g), r = dim(g), c = dim(g);
        std::vector<int> idx(static_cast<std::size_t>(r));
        for (int &i: idx)
          i = static_cast<int>(g.below(static_cast<std::uint64_t>(n_out)));
        return Made { weighted([idx, n_out](const Inputs &in) { return ad::scatter_add_rows(in[0], idx, n_out); },
                               random_matrix(g, n_out, c)),
                      { random_matrix(g, r, c) } }; } },
    { "cosine_similarity", [](Rng &g) { auto c = 1 + dim(g);
        return binary(g, nonzero_matrix(g, 1, c), nonzero_matrix(g, 1, c), ad::cosine_similarity); } },
    { "logsumexp", [](Rng &g) { return unary(g, random_matrix(g, dim(g), dim(g), -3, 3), ad::logsumexp); } },
  };
  return cases;
}

Coords shifted(const Coords &x, const Vec3 &t) {
  Coords out = x;
  for (Vec3 &p: out)
    p += t;
  return out;
}

}  // namespace

std::size_t GradSuiteResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [](const GradCase &c) { return !c.result.ok; }));
}

std::vector<std::string> gradient_op_names() {
  std::vector<std::string> out;
  for (const OpCase &c: op_cases())
    out.emplace_back(c.name);
  return out;
}

EncoderConfig tiny_encoder_config(std::uint64_t seed) {
  EncoderConfig cfg;
  cfg.layers = 2;
  cfg.hidden_dim = 4;
  cfg.rbf_bins = 4;
  cfg.init_seed = seed;
  return cfg;
}

PretrainBatch random_tiny_batch(std::uint64_t seed) {
  Rng rng(mix_seed({ seed, 0x746e79 }));
  PretrainBatch batch;
  const Element ligand_pool[] = { Element::C, Element::N, Element::O, Element::S };
  const Element protein_pool[] = { Element::C, Element::N, Element::O };
  double d_max = 0.0;
  for (int a = 0; a < 2; ++a) {
    Coords lig { Vec3::Zero(), Vec3(1.5, 0.0, 0.0), Vec3(2.0, 1.4, 0.0) };
    for (Vec3 &p: lig)
      p += Vec3(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
    std::vector<Element> lig_el;
    for (std::size_t k = 0; k < lig.size(); ++k)
      lig_el.push_back(ligand_pool[rng.below(4)]);
    const BondList bonds { { 0, 1 }, { 1, 2 } };

    Coords prot;
    std::vector<Element> prot_el;
    while (prot.size() < 5) {
      Vec3 dir(rng.normal(), rng.normal(), rng.normal());
      if (dir.norm() < 1e-3)
        continue;
      const Vec3 x = lig[rng.below(3)] + rng.uniform(2.6, 3.6) * dir.normalized();
      bool ok = true;
      for (const Vec3 &p: lig)
        ok = ok && (p - x).norm() >= 2.4;
      for (const Vec3 &p: prot)
        ok = ok && (p - x).norm() >= 1.8;
      if (ok) {
        prot.push_back(x);
        prot_el.push_back(protein_pool[rng.below(3)]);
      }
    }

    AnchorSample s;
    s.complex_id = "tiny" + std::to_string(a);
    s.anchor = build_graph(prot_el, prot, lig_el, lig, bonds);
    const double magnitudes[] = { rng.uniform(0.5, 1.5), rng.uniform(2.5, 3.0), rng.uniform(3.0, 3.5) };
    for (std::size_t d = 0; d < 3; ++d) {
      for (;;) {
        Vec3 dir(rng.normal(), rng.normal(), rng.normal());
        if (dir.norm() < 1e-3)
          continue;
        const Coords moved = shifted(lig, magnitudes[d] * dir.normalized());
        bool clash = false;
        for (const Vec3 &p: prot) {
          for (const Vec3 &q: moved)
            clash = clash || (p - q).norm() < 1.2;
        }
        if (clash)
          continue;
        try {
          DecoySample ds;
          ds.pose = d;
          ds.graph = build_graph(prot_el, prot, lig_el, moved, bonds);
          ds.rmsd = rmsd(lig, moved);
          ds.is_positive = is_positive_pose(ds.rmsd);
          s.decoys.push_back(std::move(ds));
          break;
        } catch (const Error &) {
          // empty pocket; draw another direction
        }
      }
      d_max = std::max(d_max, s.decoys.back().rmsd);
    }
    double anchor_max = 0.0;
    for (const DecoySample &ds: s.decoys)
      anchor_max = std::max(anchor_max, ds.rmsd);
    s.anchor_max_rmsd = anchor_max;
    for (int p = 0; p < 2; ++p)
      s.perturbed.push_back(perturb_ligand(s.anchor, 0.3, rng));
    batch.anchors.push_back(std::move(s));
  }
  batch.d_max = d_max;
  return batch;
}

ad::GradCheckResult check_full_loss(std::uint64_t seed, const ObjectiveConfig &objective,
                                    const ad::GradCheckOptions &options) {
  const PretrainBatch batch = random_tiny_batch(seed);
  Encoder model(tiny_encoder_config(seed));
  const std::vector<std::string> names = model.params().names();
  std::vector<Matrix> values;
  for (const std::string &n: names)
    values.push_back(model.params().at(n).value());
  const auto f = [&](const std::vector<Tensor> &ts) {
    for (std::size_t k = 0; k < names.size(); ++k)
      model.params().set(names[k], ts[k]);
    return pretrain_objective(model, batch, objective);
  };
  return ad::check_gradients(f, values, options);
}

GradSuiteResult run_gradient_suite(std::uint64_t first_seed, std::size_t count,
                                   const ad::GradCheckOptions &options,
                                   const std::function<void(const GradCase &)> &on_case) {
  GradSuiteResult out;
  const auto record = [&](GradCase c) {
    out.ok = out.ok && c.result.ok;
    if (on_case)
      on_case(c);
    out.cases.push_back(std::move(c));
  };
  for (std::uint64_t seed = first_seed; seed < first_seed + count; ++seed) {
    for (const OpCase &op: op_cases()) {
      Rng rng(mix_seed({ seed, hash_string(op.name) }));
      auto [f, inputs] = op.make(rng);
      record({ op.name, seed, ad::check_gradients(f, inputs, options) });
    }
    Rng rng(mix_seed({ seed, hash_string("full_loss") }));
    ObjectiveConfig objective;
    objective.dsm.mu = rng.uniform(0.1, 2.0);
    objective.contrastive.tau = rng.uniform(0.2, 1.0);
    objective.contrastive.alpha = rng.uniform(0.5, 2.0);
    record({ "full_loss", seed, check_full_loss(seed, objective, options) });
  }
  return out;
}

}  // namespace decoyforge
