//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <vector>

#include <doctest.h>

#include "decoyforge/autodiff.hpp"
#include "decoyforge/error.hpp"
#include "decoyforge/gradcheck.hpp"

using namespace decoyforge;
using ad::Matrix;
using ad::Tensor;

namespace {

Matrix mat(ad::Index r, ad::Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  auto it = v.begin();
  for (ad::Index i = 0; i < r; ++i)
    for (ad::Index j = 0; j < c; ++j)
      m(i, j) = *it++;
  return m;
}

template <class F> ErrorKind kind_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("product rule by hand") {
  // f(x, y) = sum(x * y + x^2), df/dx = y + 2x, df/dy = x.
  const Tensor x = Tensor::variable(mat(1, 3, { 1, -2, 0.5 }));
  const Tensor y = Tensor::variable(mat(1, 3, { 3, 4, -1 }));
  const Tensor f = ad::sum(x * y + ad::square(x));
  CHECK(f.item() == doctest::Approx(3 - 8 - 0.5 + 1 + 4 + 0.25));
  const std::vector<Tensor> wrt { x, y };
  const auto g = ad::grad(f, wrt);
  CHECK(g[0] == mat(1, 3, { 5, 0, 0 }));
  CHECK(g[1] == mat(1, 3, { 1, -2, 0.5 }));
}

TEST_CASE("matmul and broadcasting by hand") {
  const Tensor a = Tensor::variable(mat(2, 2, { 1, 2, 3, 4 }));
  const Tensor b = Tensor::variable(mat(2, 1, { 5, 6 }));
  const Tensor bias = Tensor::variable(mat(1, 1, { 0.5 }));
  // sum(A b + bias) = 17 + 39 + 1
  const Tensor f = ad::sum(ad::matmul(a, b) + bias);
  CHECK(f.item() == 57.0);
  const std::vector<Tensor> wrt { a, b, bias };
  const auto g = ad::grad(f, wrt);
  CHECK(g[0] == mat(2, 2, { 5, 6, 5, 6 }));
  CHECK(g[1] == mat(2, 1, { 4, 6 }));
  CHECK(g[2](0, 0) == 2.0);
}

TEST_CASE("logsumexp is stable and its gradient is softmax") {
  const Tensor x = Tensor::variable(mat(1, 3, { 1000, 1000, 1000 - std::log(2.0) }));
  const Tensor f = ad::logsumexp(x);
  CHECK(f.item() == doctest::Approx(1000 + std::log(2.5)));
  const std::vector<Tensor> wrt { x };
  const auto g = ad::grad(f, wrt);
  CHECK(g[0](0, 0) == doctest::Approx(0.4));
  CHECK(g[0](0, 2) == doctest::Approx(0.2));
}

TEST_CASE("cosine cutoff is C1 at the cutoff") {
  const double c = 5.0;
  const Tensor d = Tensor::variable(mat(1, 4, { 0.0, 2.5, c, 7.0 }));
  const Tensor f = ad::cosine_cutoff(d, c);
  CHECK(f.value()(0, 0) == 1.0);
  CHECK(f.value()(0, 1) == doctest::Approx(0.5));
  CHECK(f.value()(0, 2) == 0.0);
  CHECK(f.value()(0, 3) == 0.0);
  const std::vector<Tensor> wrt { d };
  const auto g = ad::grad(ad::sum(f), wrt);
  CHECK(g[0](0, 1) == doctest::Approx(-0.5 * M_PI / c));
  CHECK(std::abs(g[0](0, 2)) < 1e-12);
  CHECK(g[0](0, 3) == 0.0);
}

TEST_CASE("unused inputs receive zero gradients") {
  const Tensor x = Tensor::variable(mat(2, 2, { 1, 2, 3, 4 }));
  const Tensor unused = Tensor::variable(mat(1, 3, { 1, 1, 1 }));
  const std::vector<Tensor> wrt { x, unused };
  const auto g = ad::grad(ad::mean(x), wrt);
  CHECK(g[0] == Matrix::Constant(2, 2, 0.25));
  CHECK(g[1] == Matrix::Zero(1, 3));
}

TEST_CASE("error kinds") {
  const Tensor x = Tensor::variable(mat(2, 2, { 1, 2, 3, 4 }));
  const Tensor y = Tensor::variable(mat(3, 1, { 1, 2, 3 }));
  CHECK(kind_of([&] { ad::add(x, y); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([&] { ad::matmul(x, y); }) == ErrorKind::ShapeMismatch);
  const std::vector<Tensor> wrt { x };
  CHECK(kind_of([&] { ad::grad(x, wrt); }) == ErrorKind::NotAScalar);
  CHECK(kind_of([&] { (void) x.item(); }) == ErrorKind::NotAScalar);
  const std::vector<int> idx { 0, 5 };
  CHECK(kind_of([&] { ad::gather_rows(x, idx); }) == ErrorKind::IndexOutOfRange);
  const Tensor z = Tensor::variable(Matrix::Zero(1, 3));
  const Tensor w = Tensor::variable(mat(1, 3, { 1, 0, 0 }));
  CHECK(kind_of([&] { ad::cosine_similarity(z, w); }) == ErrorKind::ZeroVector);
}

TEST_CASE("a graph can be differentiated once") {
  const Tensor x = Tensor::variable(mat(1, 2, { 1, 2 }));
  const Tensor f = ad::sum(ad::exp(x));
  const std::vector<Tensor> wrt { x };
  CHECK(ad::grad(f, wrt)[0](0, 1) == doctest::Approx(std::exp(2.0)));
  CHECK(kind_of([&] { ad::grad(f, wrt); }) == ErrorKind::GraphFreed);
}

TEST_CASE("gradients are plain values, not differentiable tensors") {
  // A gradient wrapped back into a tensor is a constant leaf: differentiating
  // through it yields nothing about second derivatives.
  const Tensor x = Tensor::variable(mat(1, 1, { 3 }));
  const std::vector<Tensor> wrt { x };
  const Matrix g = ad::grad(ad::sum(ad::pow(x, 3.0)), wrt)[0];
  CHECK(g(0, 0) == doctest::Approx(27.0));
  const Tensor gt = Tensor::constant(g);
  CHECK_FALSE(gt.requires_grad());
  const Tensor x2 = Tensor::variable(mat(1, 1, { 3 }));
  const std::vector<Tensor> wrt2 { x2 };
  CHECK(ad::grad(ad::sum(gt * x2), wrt2)[0](0, 0) == doctest::Approx(27.0));
}

TEST_CASE("constant inputs do not require gradients") {
  const Tensor c = Tensor::constant(mat(1, 2, { 1, 2 }));
  const Tensor v = Tensor::variable(mat(1, 2, { 3, 4 }));
  const Tensor f = ad::sum(c * v);
  CHECK(f.requires_grad());
  CHECK_FALSE(ad::sum(c * c).requires_grad());
}

TEST_CASE("finite-difference checker catches a wrong gradient") {
  // Correct op passes.
  const auto good = ad::check_gradients(
      [](const std::vector<Tensor> &in) { return ad::sum(ad::tanh(in[0])); }, { mat(2, 2, { 0.1, -0.4, 1.3, 2 }) });
  CHECK(good.ok);
  CHECK(good.checked == 4);
  // A custom op with a deliberately wrong backward fails.
  const auto bad = ad::check_gradients(
      [](const std::vector<Tensor> &in) {
        Matrix v = in[0].value().array().square();
        const Tensor sq = ad::make_result(v, { in[0] }, [](ad::Node &n) {
          n.parents[0]->accumulate(n.grad);  // should be 2 x grad
        });
        return ad::sum(sq);
      },
      { mat(1, 2, { 1.5, -2 }) });
  CHECK_FALSE(bad.ok);
}

TEST_CASE("operator suite over a few seeds") {
  const GradSuiteResult r = run_gradient_suite(0, 3);
  for (const GradCase &c: r.cases) {
    INFO(c.name << " seed " << c.seed << " worst " << c.result.worst);
    CHECK(c.result.ok);
  }
  CHECK(r.ok);
  CHECK(r.failures() == 0);
  CHECK(r.cases.size() >= 3 * gradient_op_names().size());
}
