//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "decoyforge/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "decoyforge/error.hpp"

namespace decoyforge::ad {

namespace {

using Array = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string shape_str(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

Index broadcast_dim(Index a, Index b, const char *op) {
  if (a == b || b == 1)
    return a;
  if (a == 1)
    return b;
  throw Error(ErrorKind::ShapeMismatch, std::string(op) + ": cannot broadcast " + std::to_string(a)
                                            + " against " + std::to_string(b));
}

// Returns m itself when no broadcasting is needed, else a copy in storage.
const Matrix &expand(const Matrix &m, Index rows, Index cols, Matrix &storage) {
  if (m.rows() == rows && m.cols() == cols)
    return m;
  storage = m.replicate(rows / m.rows(), cols / m.cols());
  return storage;
}

Matrix reduce_to(const Matrix &g, Index rows, Index cols) {
  if (g.rows() == rows && g.cols() == cols)
    return g;
  Matrix out = g;
  if (rows == 1 && out.rows() != 1)
    out = out.colwise().sum().eval();
  if (cols == 1 && out.cols() != 1)
    out = out.rowwise().sum().eval();
  return out;
}

template <class Fwd, class Bwd>
Tensor binary(const Tensor &a, const Tensor &b, const char *op, Fwd fwd, Bwd bwd) {
  const Index r = broadcast_dim(a.rows(), b.rows(), op);
  const Index c = broadcast_dim(a.cols(), b.cols(), op);
  Matrix sa, sb;
  const Matrix &av = expand(a.value(), r, c, sa);
  const Matrix &bv = expand(b.value(), r, c, sb);
  Matrix out = fwd(av.array(), bv.array()).matrix();
  return make_result(std::move(out), { a, b }, [bwd](Node &self) {
    Node &pa = *self.parents[0];
    Node &pb = *self.parents[1];
    const Index r = self.value.rows(), c = self.value.cols();
    Matrix sa, sb;
    const Array av = expand(pa.value, r, c, sa).array();
    const Array bv = expand(pb.value, r, c, sb).array();
    const Array g = self.grad.array();
    Matrix ga, gb;
    bwd(g, av, bv, pa.requires_grad ? &ga : nullptr, pb.requires_grad ? &gb : nullptr);
    if (pa.requires_grad)
      pa.accumulate(reduce_to(ga, pa.value.rows(), pa.value.cols()));
    if (pb.requires_grad)
      pb.accumulate(reduce_to(gb, pb.value.rows(), pb.value.cols()));
  });
}

// Elementwise unary op given value and derivative as functions of the input.
template <class Fwd, class Deriv>
Tensor unary(const Tensor &a, Fwd fwd, Deriv deriv) {
  Matrix out = a.value().unaryExpr(fwd);
  return make_result(std::move(out), { a }, [deriv](Node &self) {
    Node &pa = *self.parents[0];
    pa.accumulate((self.grad.array() * pa.value.unaryExpr(deriv).array()).matrix());
  });
}

}  // namespace

void Node::accumulate(const Matrix &g) {
  if (!requires_grad)
    return;
  if (grad.size() == 0)
    grad = g;
  else
    grad += g;
}

Tensor::Tensor(): node_(std::make_shared<Node>()) { }

Tensor Tensor::constant(Matrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  return Tensor(std::move(node));
}

Tensor Tensor::constant(double value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return constant(std::move(m));
}

Tensor Tensor::variable(Matrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  return Tensor(std::move(node));
}

Index Tensor::rows() const { return node_->value.rows(); }
Index Tensor::cols() const { return node_->value.cols(); }
const Matrix &Tensor::value() const { return node_->value; }
bool Tensor::requires_grad() const { return node_->requires_grad; }
bool Tensor::is_leaf() const { return node_->leaf; }

double Tensor::item() const {
  if (rows() != 1 || cols() != 1)
    throw Error(ErrorKind::NotAScalar, "item() on " + shape_str(rows(), cols()) + " tensor");
  return node_->value(0, 0);
}

void Tensor::assign(const Matrix &value) {
  if (!node_->leaf)
    throw Error(ErrorKind::InvalidConfig, "assign() on a non-leaf tensor");
  if (value.rows() != rows() || value.cols() != cols())
    throw Error(ErrorKind::ShapeMismatch, "assign " + shape_str(value.rows(), value.cols()) + " to "
                                              + shape_str(rows(), cols()));
  node_->value = value;
}

Tensor make_result(Matrix value, std::vector<Tensor> parents, std::function<void(Node &)> backward) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->leaf = false;
  for (const Tensor &p: parents)
    node->requires_grad = node->requires_grad || p.requires_grad();
  if (node->requires_grad) {
    for (Tensor &p: parents)
      node->parents.push_back(p.node());
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

Tensor add(const Tensor &a, const Tensor &b) {
  return binary(
      a, b, "add", [](const Array &x, const Array &y) -> Array { return x + y; },
      [](const Array &g, const Array &, const Array &, Matrix *ga, Matrix *gb) {
        if (ga)
          *ga = g.matrix();
        if (gb)
          *gb = g.matrix();
      });
}

Tensor sub(const Tensor &a, const Tensor &b) {
  return binary(
      a, b, "sub", [](const Array &x, const Array &y) -> Array { return x - y; },
      [](const Array &g, const Array &, const Array &, Matrix *ga, Matrix *gb) {
        if (ga)
          *ga = g.matrix();
        if (gb)
          *gb = (-g).matrix();
      });
}

Tensor mul(const Tensor &a, const Tensor &b) {
  return binary(
      a, b, "mul", [](const Array &x, const Array &y) -> Array { return x * y; },
      [](const Array &g, const Array &x, const Array &y, Matrix *ga, Matrix *gb) {
        if (ga)
          *ga = (g * y).matrix();
        if (gb)
          *gb = (g * x).matrix();
      });
}

Tensor div(const Tensor &a, const Tensor &b) {
  return binary(
      a, b, "div", [](const Array &x, const Array &y) -> Array { return x / y; },
      [](const Array &g, const Array &x, const Array &y, Matrix *ga, Matrix *gb) {
        if (ga)
          *ga = (g / y).matrix();
        if (gb)
          *gb = (-g * x / y.square()).matrix();
      });
}

Tensor neg(const Tensor &a) { return scale(a, -1.0); }

Tensor scale(const Tensor &a, double s) {
  return make_result(a.value() * s, { a }, [s](Node &self) {
    self.parents[0]->accumulate(self.grad * s);
  });
}

Tensor add_scalar(const Tensor &a, double s) {
  Matrix out = a.value().array() + s;
  return make_result(std::move(out), { a }, [](Node &self) { self.parents[0]->accumulate(self.grad); });
}

Tensor matmul(const Tensor &a, const Tensor &b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "matmul " + shape_str(a.rows(), a.cols()) + " by "
                                              + shape_str(b.rows(), b.cols()));
  }
  Matrix out = a.value() * b.value();
  return make_result(std::move(out), { a, b }, [](Node &self) {
    Node &pa = *self.parents[0];
    Node &pb = *self.parents[1];
    if (pa.requires_grad)
      pa.accumulate(self.grad * pb.value.transpose());
    if (pb.requires_grad)
      pb.accumulate(pa.value.transpose() * self.grad);
  });
}

Tensor transpose(const Tensor &a) {
  Matrix out = a.value().transpose();
  return make_result(std::move(out), { a }, [](Node &self) {
    self.parents[0]->accumulate(self.grad.transpose());
  });
}

Tensor sum(const Tensor &a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return make_result(std::move(out), { a }, [](Node &self) {
    Node &pa = *self.parents[0];
    pa.accumulate(Matrix::Constant(pa.value.rows(), pa.value.cols(), self.grad(0, 0)));
  });
}

Tensor mean(const Tensor &a) {
  if (a.size() == 0)
    throw Error(ErrorKind::ShapeMismatch, "mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor sum_rows(const Tensor &a) {
  Matrix out = a.value().rowwise().sum();
  return make_result(std::move(out), { a }, [](Node &self) {
    Node &pa = *self.parents[0];
    pa.accumulate(self.grad.replicate(1, pa.value.cols()));
  });
}

Tensor sum_cols(const Tensor &a) {
  Matrix out = a.value().colwise().sum();
  return make_result(std::move(out), { a }, [](Node &self) {
    Node &pa = *self.parents[0];
    pa.accumulate(self.grad.replicate(pa.value.rows(), 1));
  });
}

Tensor mean_cols(const Tensor &a) {
  if (a.rows() == 0)
    throw Error(ErrorKind::ShapeMismatch, "mean over zero rows");
  return scale(sum_cols(a), 1.0 / static_cast<double>(a.rows()));
}

Tensor exp(const Tensor &a) {
  Matrix out = a.value().array().exp();
  return make_result(std::move(out), { a }, [](Node &self) {
    self.parents[0]->accumulate((self.grad.array() * self.value.array()).matrix());
  });
}

Tensor log(const Tensor &a) {
  return unary(
      a, [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; });
}

Tensor sqrt(const Tensor &a) {
  Matrix out = a.value().array().sqrt();
  return make_result(std::move(out), { a }, [](Node &self) {
    self.parents[0]->accumulate((self.grad.array() * 0.5 / self.value.array()).matrix());
  });
}

Tensor pow(const Tensor &a, double p) {
  return unary(
      a, [p](double x) { return std::pow(x, p); },
      [p](double x) { return p * std::pow(x, p - 1.0); });
}

Tensor square(const Tensor &a) {
  return unary(
      a, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Tensor tanh(const Tensor &a) {
  Matrix out = a.value().array().tanh();
  return make_result(std::move(out), { a }, [](Node &self) {
    self.parents[0]->accumulate(
        (self.grad.array() * (1.0 - self.value.array().square())).matrix());
  });
}

namespace {

double logistic(double x) {
  if (x >= 0.0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor sigmoid(const Tensor &a) {
  Matrix out = a.value().unaryExpr(&logistic);
  return make_result(std::move(out), { a }, [](Node &self) {
    const auto s = self.value.array();
    self.parents[0]->accumulate((self.grad.array() * s * (1.0 - s)).matrix());
  });
}

Tensor silu(const Tensor &a) {
  return unary(
      a, [](double x) { return x * logistic(x); },
      [](double x) {
        const double s = logistic(x);
        return s * (1.0 + x * (1.0 - s));
      });
}

Tensor cosine_cutoff(const Tensor &d, double cutoff) {
  const double k = std::numbers::pi / cutoff;
  return unary(
      d, [cutoff, k](double x) { return x < cutoff ? 0.5 * (std::cos(k * x) + 1.0) : 0.0; },
      [cutoff, k](double x) { return x < cutoff ? -0.5 * k * std::sin(k * x) : 0.0; });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty())
    throw Error(ErrorKind::ShapeMismatch, "concat of nothing");
  const Index r = parts.front().rows();
  Index c = 0;
  for (const Tensor &p: parts) {
    if (p.rows() != r)
      throw Error(ErrorKind::ShapeMismatch, "concat_cols with mismatched row counts");
    c += p.cols();
  }
  Matrix out(r, c);
  std::vector<Index> widths;
  Index at = 0;
  for (const Tensor &p: parts) {
    out.middleCols(at, p.cols()) = p.value();
    widths.push_back(p.cols());
    at += p.cols();
  }
  return make_result(std::move(out), { parts.begin(), parts.end() }, [widths](Node &self) {
    Index at = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      self.parents[k]->accumulate(self.grad.middleCols(at, widths[k]));
      at += widths[k];
    }
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty())
    throw Error(ErrorKind::ShapeMismatch, "concat of nothing");
  const Index c = parts.front().cols();
  Index r = 0;
  for (const Tensor &p: parts) {
    if (p.cols() != c)
      throw Error(ErrorKind::ShapeMismatch, "concat_rows with mismatched column counts");
    r += p.rows();
  }
  Matrix out(r, c);
  std::vector<Index> heights;
  Index at = 0;
  for (const Tensor &p: parts) {
    out.middleRows(at, p.rows()) = p.value();
    heights.push_back(p.rows());
    at += p.rows();
  }
  return make_result(std::move(out), { parts.begin(), parts.end() }, [heights](Node &self) {
    Index at = 0;
    for (std::size_t k = 0; k < heights.size(); ++k) {
      self.parents[k]->accumulate(self.grad.middleRows(at, heights[k]));
      at += heights[k];
    }
  });
}

Tensor slice_cols(const Tensor &a, Index first, Index count) {
  if (first < 0 || count < 0 || first + count > a.cols())
    throw Error(ErrorKind::IndexOutOfRange, "slice_cols out of range");
  Matrix out = a.value().middleCols(first, count);
  return make_result(std::move(out), { a }, [first, count](Node &self) {
    Node &pa = *self.parents[0];
    Matrix g = Matrix::Zero(pa.value.rows(), pa.value.cols());
    g.middleCols(first, count) = self.grad;
    pa.accumulate(g);
  });
}

Tensor gather_rows(const Tensor &a, std::span<const int> index) {
  const Index n = a.rows();
  Matrix out(static_cast<Index>(index.size()), a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= n)
      throw Error(ErrorKind::IndexOutOfRange, "gather index " + std::to_string(index[k]));
    out.row(static_cast<Index>(k)) = a.value().row(index[k]);
  }
  std::vector<int> idx(index.begin(), index.end());
  return make_result(std::move(out), { a }, [idx = std::move(idx)](Node &self) {
    Node &pa = *self.parents[0];
    Matrix g = Matrix::Zero(pa.value.rows(), pa.value.cols());
    for (std::size_t k = 0; k < idx.size(); ++k)
      g.row(idx[k]) += self.grad.row(static_cast<Index>(k));
    pa.accumulate(g);
  });
}

Tensor scatter_add_rows(const Tensor &a, std::span<const int> index, Index n_out) {
  if (static_cast<Index>(index.size()) != a.rows())
    throw Error(ErrorKind::ShapeMismatch, "scatter index length differs from row count");
  Matrix out = Matrix::Zero(n_out, a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= n_out)
      throw Error(ErrorKind::IndexOutOfRange, "scatter index " + std::to_string(index[k]));
    out.row(index[k]) += a.value().row(static_cast<Index>(k));
  }
  std::vector<int> idx(index.begin(), index.end());
  return make_result(std::move(out), { a }, [idx = std::move(idx)](Node &self) {
    Node &pa = *self.parents[0];
    Matrix g(pa.value.rows(), pa.value.cols());
    for (std::size_t k = 0; k < idx.size(); ++k)
      g.row(static_cast<Index>(k)) = self.grad.row(idx[k]);
    pa.accumulate(g);
  });
}

Tensor cosine_similarity(const Tensor &a, const Tensor &b) {
  if (a.rows() != 1 || b.rows() != 1 || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "cosine_similarity of " + shape_str(a.rows(), a.cols())
                                              + " and " + shape_str(b.rows(), b.cols()));
  }
  const double na = a.value().norm();
  const double nb = b.value().norm();
  if (na == 0.0 || nb == 0.0)
    throw Error(ErrorKind::ZeroVector, "cosine similarity with a zero vector");
  Matrix out(1, 1);
  out(0, 0) = a.value().cwiseProduct(b.value()).sum() / (na * nb);
  return make_result(std::move(out), { a, b }, [na, nb](Node &self) {
    Node &pa = *self.parents[0];
    Node &pb = *self.parents[1];
    const double g = self.grad(0, 0);
    const double cos = self.value(0, 0);
    if (pa.requires_grad)
      pa.accumulate(g * (pb.value / (na * nb) - cos * pa.value / (na * na)));
    if (pb.requires_grad)
      pb.accumulate(g * (pa.value / (na * nb) - cos * pb.value / (nb * nb)));
  });
}

Tensor logsumexp(const Tensor &a) {
  if (a.size() == 0)
    throw Error(ErrorKind::ShapeMismatch, "logsumexp of an empty tensor");
  const double m = a.value().maxCoeff();
  Matrix out(1, 1);
  if (!std::isfinite(m)) {
    out(0, 0) = m;
  } else {
    out(0, 0) = m + std::log((a.value().array() - m).exp().sum());
  }
  return make_result(std::move(out), { a }, [](Node &self) {
    Node &pa = *self.parents[0];
    const double lse = self.value(0, 0);
    pa.accumulate((self.grad(0, 0) * (pa.value.array() - lse).exp()).matrix());
  });
}

std::vector<Matrix> grad(const Tensor &output, std::span<const Tensor> wrt) {
  if (output.rows() != 1 || output.cols() != 1) {
    throw Error(ErrorKind::NotAScalar,
                "grad of a " + shape_str(output.rows(), output.cols()) + " tensor");
  }
  Node *root = output.node().get();
  if (root->freed)
    throw Error(ErrorKind::GraphFreed, "graph was already released by an earlier backward pass");

  // Post-order over nodes that require grad.
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  if (root->requires_grad) {
    std::vector<std::pair<Node *, std::size_t>> stack { { root, 0 } };
    seen.insert(root);
    while (!stack.empty()) {
      auto &[node, next] = stack.back();
      if (node->freed && !node->leaf)
        throw Error(ErrorKind::GraphFreed, "graph reuses a released node");
      if (next < node->parents.size()) {
        Node *p = node->parents[next++].get();
        if (p->requires_grad && seen.insert(p).second)
          stack.emplace_back(p, 0);
      } else {
        order.push_back(node);
        stack.pop_back();
      }
    }
  }

  for (Node *n: order)
    n->grad.resize(0, 0);
  if (root->requires_grad) {
    root->grad = Matrix::Ones(1, 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Node *n = *it;
      if (n->backward && n->grad.size() != 0)
        n->backward(*n);
    }
  }

  std::vector<Matrix> out;
  out.reserve(wrt.size());
  for (const Tensor &t: wrt) {
    Node *n = t.node().get();
    if (seen.contains(n) && n->grad.size() != 0)
      out.push_back(n->grad);
    else
      out.push_back(Matrix::Zero(t.rows(), t.cols()));
  }

  for (Node *n: order) {
    n->grad.resize(0, 0);
    if (!n->leaf) {
      n->backward = nullptr;
      n->parents.clear();
      n->freed = true;
    }
  }
  return out;
}

GradCheckResult check_gradients(const ScalarFunction &f, const std::vector<Matrix> &inputs,
                                const GradCheckOptions &options) {
  std::vector<Tensor> vars;
  for (const Matrix &m: inputs)
    vars.push_back(Tensor::variable(m));
  const std::vector<Matrix> analytic = grad(f(vars), vars);

  // Unperturbed inputs are shared between evaluations; only input k is
  // rebuilt per entry.
  std::vector<Tensor> base;
  for (const Matrix &m: inputs)
    base.push_back(Tensor::constant(m));

  GradCheckResult result;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (Index e = 0; e < inputs[k].size(); ++e) {
      auto eval_at = [&](double delta) {
        std::vector<Tensor> cs = base;
        Matrix m = inputs[k];
        m.data()[e] += delta;
        cs[k] = Tensor::constant(std::move(m));
        return f(cs).item();
      };
      const double numeric = (eval_at(options.step) - eval_at(-options.step)) / (2.0 * options.step);
      const double a = analytic[k].data()[e];
      const double abs_err = std::abs(a - numeric);
      const double scale = std::max(std::abs(a), std::abs(numeric));
      const double rel_err = scale > 0.0 ? abs_err / scale : 0.0;
      ++result.checked;
      if (abs_err > std::max(options.atol, options.rtol * scale)) {
        result.ok = false;
      }
      if (abs_err > result.max_abs_error) {
        result.max_abs_error = abs_err;
        result.worst = "input " + std::to_string(k) + " entry " + std::to_string(e)
                       + ": analytic " + std::to_string(a) + " numeric " + std::to_string(numeric);
      }
      if (abs_err > options.atol)
        result.max_rel_error = std::max(result.max_rel_error, rel_err);
    }
  }
  return result;
}

}  // namespace decoyforge::ad
