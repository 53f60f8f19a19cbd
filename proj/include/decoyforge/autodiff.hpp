//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_AUTODIFF_HPP_
#define DECOYFORGE_AUTODIFF_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace decoyforge::ad {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

struct Node;

/**
 * Handle to a node of a dynamic reverse-mode graph. Every tensor is a dense
 * rows x cols matrix of doubles; scalars are 1 x 1.
 *
 * A graph is recorded as operations are applied and is released by grad():
 * nodes visited by a backward pass drop their closures, so differentiating
 * the same output twice (or differentiating a gradient) is impossible.
 */
class Tensor {
 public:
  Tensor();

  static Tensor constant(Matrix value);
  static Tensor constant(double value);
  /// Leaf that collects gradients.
  static Tensor variable(Matrix value);

  Index rows() const;
  Index cols() const;
  std::array<Index, 2> shape() const { return { rows(), cols() }; }
  Index size() const { return rows() * cols(); }
  const Matrix &value() const;
  double item() const;  // throws NotAScalar
  bool requires_grad() const;
  bool is_leaf() const;

  /// Replaces a leaf's value in place (optimizer steps).
  void assign(const Matrix &value);

  const std::shared_ptr<Node> &node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<Node> node): node_(std::move(node)) { }
  std::shared_ptr<Node> node_;

  friend Tensor make_result(Matrix value, std::vector<Tensor> parents,
                            std::function<void(Node &)> backward);
};

struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  bool leaf = true;
  bool freed = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node &)> backward;

  void accumulate(const Matrix &g);
};

/// Creates an op result; parents that do not require grad are not recorded.
Tensor make_result(Matrix value, std::vector<Tensor> parents, std::function<void(Node &)> backward);

// Elementwise binary ops broadcast (1 x c), (r x 1) and (1 x 1) operands.
Tensor add(const Tensor &a, const Tensor &b);
Tensor sub(const Tensor &a, const Tensor &b);
Tensor mul(const Tensor &a, const Tensor &b);
Tensor div(const Tensor &a, const Tensor &b);

Tensor neg(const Tensor &a);
Tensor scale(const Tensor &a, double s);
Tensor add_scalar(const Tensor &a, double s);

Tensor matmul(const Tensor &a, const Tensor &b);
Tensor transpose(const Tensor &a);

Tensor sum(const Tensor &a);        // -> 1 x 1
Tensor mean(const Tensor &a);       // -> 1 x 1
Tensor sum_rows(const Tensor &a);   // r x c -> r x 1
Tensor sum_cols(const Tensor &a);   // r x c -> 1 x c
Tensor mean_cols(const Tensor &a);  // r x c -> 1 x c

Tensor exp(const Tensor &a);
Tensor log(const Tensor &a);
Tensor sqrt(const Tensor &a);
Tensor pow(const Tensor &a, double p);
Tensor square(const Tensor &a);
Tensor tanh(const Tensor &a);
Tensor sigmoid(const Tensor &a);
Tensor silu(const Tensor &a);
/// 0.5 (cos(pi d / cutoff) + 1) for d < cutoff, else 0. Continuously
/// differentiable at the cutoff.
Tensor cosine_cutoff(const Tensor &d, double cutoff);

Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_rows(std::span<const Tensor> parts);
Tensor slice_cols(const Tensor &a, Index first, Index count);

/// out[k] = a[index[k]] (row gather).
Tensor gather_rows(const Tensor &a, std::span<const int> index);
/// out[index[k]] += a[k] over `n_out` rows.
Tensor scatter_add_rows(const Tensor &a, std::span<const int> index, Index n_out);

/// Cosine similarity of two 1 x d rows -> 1 x 1. Throws ZeroVector.
Tensor cosine_similarity(const Tensor &a, const Tensor &b);
/// log(sum(exp(a))) over all elements, computed with the max shift.
Tensor logsumexp(const Tensor &a);

inline Tensor operator+(const Tensor &a, const Tensor &b) { return add(a, b); }
inline Tensor operator-(const Tensor &a, const Tensor &b) { return sub(a, b); }
inline Tensor operator*(const Tensor &a, const Tensor &b) { return mul(a, b); }
inline Tensor operator/(const Tensor &a, const Tensor &b) { return div(a, b); }
inline Tensor operator-(const Tensor &a) { return neg(a); }

/**
 * Reverse-mode gradients of a scalar output. Inputs that the output does
 * not depend on get zero gradients. Throws NotAScalar, GraphFreed.
 */
std::vector<Matrix> grad(const Tensor &output, std::span<const Tensor> wrt);

// ---------------------------------------------------------------------------
// Finite-difference checking

struct GradCheckOptions {
  double step = 1e-5;
  double rtol = 1e-4;
  double atol = 1e-8;
};

struct GradCheckResult {
  bool ok = true;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // location of the worst entry
};

using ScalarFunction = std::function<Tensor(const std::vector<Tensor> &)>;

/**
 * Compares grad() with central differences on every input entry. An entry
 * passes when |analytic - numeric| <= max(atol, rtol * max(|analytic|, |numeric|)).
 */
GradCheckResult check_gradients(const ScalarFunction &f, const std::vector<Matrix> &inputs,
                                const GradCheckOptions &options = {});

}  // namespace decoyforge::ad

#endif  // DECOYFORGE_AUTODIFF_HPP_
