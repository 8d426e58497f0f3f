#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "polyak/errors.hpp"
#include "polyak/oracles.hpp"
#include "polyak/spectral.hpp"
#include "test_helpers.hpp"

using namespace polyak;
using namespace polyak::testing;

TEST_CASE("isotropic quadratic evaluates exactly") {
  const int n = 3;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  const SmoothOracle q = make_quadratic(a, Eigen::VectorXd::Zero(n));
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(n, 0);
  CHECK(q.value(e1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK((q.gradient(e1) - e1).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(q.f_star_value() == 0.0);
}

TEST_CASE("diagonal quadratic reads its class off the spectrum") {
  Eigen::MatrixXd a(2, 2);
  a << 0.01, 0.0, 0.0, 1.0;
  const SmoothOracle q = make_quadratic(a, Eigen::VectorXd::Zero(2));
  CHECK(q.regularity().L == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(q.regularity().mu == doctest::Approx(0.01).epsilon(1e-7));
  CHECK(q.f_star_value() == 0.0);
}

TEST_CASE("power iteration matches a dense eigensolver on a random Gram matrix") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd g = gaussian_matrix(20, 20, rng);
  const Eigen::MatrixXd gram = g.transpose() * g;
  const SmoothOracle q = make_quadratic(gram, Eigen::VectorXd::Zero(20));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(gram);
  const double top = dense.eigenvalues().maxCoeff();
  CHECK(std::abs(q.regularity().L - top) <= 1e-8 * top);
}

TEST_CASE("make_quadratic rejects bad input") {
  Eigen::MatrixXd skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(make_quadratic(skew, Eigen::VectorXd::Zero(2)), DomainError);
  CHECK_THROWS_AS(make_quadratic(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2)),
                  DomainError);
}

TEST_CASE("logistic loss with a zero feature row is log 2 plus the ridge term") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 2);
  Eigen::VectorXd y(1);
  y << 1.0;
  const double reg = 0.37;
  const SmoothOracle f = make_logistic(a, y, reg);
  Eigen::VectorXd x(2);
  x << 1.5, -2.0;
  CHECK(f.value(x) ==
        doctest::Approx(std::log(2.0) + 0.5 * reg * x.squaredNorm()).epsilon(1e-14));
}

TEST_CASE("separable logistic problem has infimum zero") {
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 0.0;
  Eigen::VectorXd y(1);
  y << 1.0;
  const SmoothOracle f = make_logistic(a, y, 0.0);
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  CHECK(f.value(10.0 * e1) < f.value(5.0 * e1));
  CHECK(f.value(100.0 * e1) < 1e-40);
}

TEST_CASE("logistic rejects bad labels and empty data") {
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 0.0;
  Eigen::VectorXd bad(1);
  bad << 2.0;
  CHECK_THROWS_AS(make_logistic(a, bad, 0.1), DataError);
  CHECK_THROWS_AS(make_logistic(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0), 0.1), DataError);
}

TEST_CASE("logistic f* presolve is stable across starts") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd a = gaussian_matrix(30, 5, rng);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const SmoothOracle f = make_logistic(a, y, 1e-3);
  CHECK(!f.f_star().has_value());

  const FStar from_zero = estimate_f_star(f, 1000000, 1e-28);
  const FStar from_random = estimate_f_star(f, 1000000, 1e-28, gaussian_vector(5, rng));
  CHECK(from_zero.trusted);
  CHECK(from_random.trusted);
  CHECK(std::abs(from_zero.value - from_random.value) <= 1e-12);
}

TEST_CASE("soft threshold is the l1 prox") {
  Eigen::VectorXd x(2);
  x << 2.0, -0.5;
  const Eigen::VectorXd p = soft_threshold(x, 1.0);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("lasso with identity features and zero target is minimized at zero") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const CompositeOracle lasso = make_lasso(a, Eigen::VectorXd::Zero(3), 0.7);
  CHECK(lasso.total_value(Eigen::VectorXd::Zero(3)) == 0.0);
  // zero is a prox fixed point of the forward-backward map
  const Eigen::VectorXd step =
      lasso.prox(-lasso.smooth().gradient(Eigen::VectorXd::Zero(3)), 1.0);
  CHECK(step.norm() == 0.0);
}

TEST_CASE("closed-form lasso instance reaches F* = 2.52") {
  Eigen::VectorXd b(2);
  b << 3.0, 0.2;
  const CompositeOracle lasso = make_lasso(Eigen::MatrixXd::Identity(2, 2), b, 1.0);
  // per-coordinate soft-threshold solution: x* = (2, 0), F* = 0.5*1.04 + 2
  const FStar est = estimate_f_star(lasso, 200000, 1e-26);
  CHECK(est.trusted);
  CHECK(std::abs(est.value - 2.52) <= 1e-10);
}

TEST_CASE("lasso rejects mismatched shapes") {
  CHECK_THROWS_AS(make_lasso(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(2), 1.0),
                  DataError);
  CHECK_THROWS_AS(make_lasso(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 0.0),
                  DomainError);
}

TEST_CASE("estimate_f_star returns the exact optimum when x* is known") {
  std::mt19937_64 rng(17);
  const SmoothOracle q = random_quadratic(6, 0.05, 1.0, rng);
  const FStar est = estimate_f_star(q, 10, 1e-20);
  CHECK(est.trusted);
  CHECK(std::abs(est.value - q.f_star_value()) <= 1e-12);
}

TEST_CASE("estimate_f_star flags an exhausted budget") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd a = gaussian_matrix(10, 4, rng);
  Eigen::VectorXd y(10);
  for (int i = 0; i < 10; ++i) y[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const SmoothOracle f = make_logistic(a, y, 1e-3);
  const FStar est = estimate_f_star(f, 3, 1e-30);
  CHECK(!est.trusted);
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(31);
  const SmoothOracle quad = random_quadratic(8, 0.1, 2.0, rng);
  const Eigen::MatrixXd a = gaussian_matrix(12, 6, rng);
  Eigen::VectorXd y(12);
  for (int i = 0; i < 12; ++i) y[i] = (i % 3 == 0) ? 1.0 : -1.0;
  const SmoothOracle logit = make_logistic(a, y, 1e-2);
  const CompositeOracle lasso = make_lasso(a, gaussian_vector(12, rng), 0.5);

  const auto check_gradients = [&](const SmoothOracle& oracle) {
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd x = gaussian_vector(oracle.dim(), rng);
      const Eigen::VectorXd g = oracle.gradient(x);
      const Eigen::VectorXd fd = fd_gradient(oracle, x);
      CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
  };
  check_gradients(quad);
  check_gradients(logit);
  check_gradients(lasso.smooth());
}

TEST_CASE("interpolation inequality holds at random point pairs") {
  std::mt19937_64 rng(37);
  const SmoothOracle quad = random_quadratic(8, 0.03, 1.5, rng);
  const Eigen::MatrixXd a = gaussian_matrix(15, 5, rng);
  Eigen::VectorXd labels(15);
  for (int i = 0; i < 15; ++i) labels[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const SmoothOracle logit = make_logistic(a, labels, 1e-2);

  const auto check_pairs = [&](const SmoothOracle& oracle) {
    const double mu = oracle.regularity().mu, L = oracle.regularity().L;
    for (int t = 0; t < 1000; ++t) {
      const Eigen::VectorXd x = gaussian_vector(oracle.dim(), rng);
      const Eigen::VectorXd y = gaussian_vector(oracle.dim(), rng);
      const double lhs = interpolation_lhs(oracle, x, y, mu, L);
      const double scale =
          std::max({1.0, std::abs(oracle.value(x) - oracle.value(y)), (x - y).squaredNorm()});
      CHECK(lhs <= 1e-10 * scale);
    }
  };
  check_pairs(quad);
  check_pairs(logit);
}

TEST_CASE("gap is sandwiched by the class bounds when x* is known") {
  std::mt19937_64 rng(41);
  const SmoothOracle q = random_quadratic(10, 0.02, 1.0, rng);
  const Eigen::VectorXd xs = *q.x_star();
  const double mu = q.regularity().mu, L = q.regularity().L;
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd x = gaussian_vector(10, rng);
    const double gap = q.value(x) - q.f_star_value();
    const double d2 = (x - xs).squaredNorm();
    CHECK(gap >= 0.5 * mu * d2 * (1.0 - 1e-10));
    CHECK(gap <= 0.5 * L * d2 * (1.0 + 1e-10));
  }
}
