#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyak/errors.hpp"
#include "polyak/rates.hpp"
#include "test_helpers.hpp"

using namespace polyak;
using namespace polyak::testing;

TEST_CASE("distance-contraction rate vanishes at both interval endpoints") {
  const RegularityClass cls(0.1, 1.0);
  CHECK(rate_value(RateFormula::Prop1, cls, 1.0 / cls.L) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rate_value(RateFormula::Prop1, cls, 1.0 / cls.mu) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("distance-contraction rate peaks at the known worst case") {
  const RegularityClass cls(0.1, 1.0);
  const double peak = rate_value(RateFormula::Prop1, cls, 2.0 / (cls.L + cls.mu));
  CHECK(peak == doctest::Approx(0.6694214876033057).epsilon(1e-12));
}

TEST_CASE("gap-contraction rate boundary values") {
  const RegularityClass cls(0.1, 1.0);
  CHECK(rate_value(RateFormula::Prop2, cls, 1.0 / cls.L) == doctest::Approx(0.0).epsilon(1e-14));
  // right endpoint evaluates to ((L-mu)/L)^4
  const double right = (2.0 - cls.mu / cls.L) / cls.L;
  CHECK(rate_value(RateFormula::Prop2, cls, right) == doctest::Approx(0.6561).epsilon(1e-12));
}

TEST_CASE("rate formulas reject out-of-domain arguments") {
  const RegularityClass cls(0.1, 1.0);
  CHECK_THROWS_AS(rate_value(RateFormula::Prop1, cls, 0.5), DomainError);
  CHECK_THROWS_AS(rate_value(RateFormula::Prop1, cls, 11.0), DomainError);
  CHECK_THROWS_AS(rate_value(RateFormula::Prop2, cls, 2.5), DomainError);
  CHECK_THROWS_AS(rate_value(RateFormula::Lemma2, cls, 1.5), DomainError);
  CHECK_THROWS_AS(rate_value(RateFormula::Lemma2, cls, 0.0), DomainError);
}

TEST_CASE("tiny condition numbers are refused") {
  const RegularityClass cls(1e-14, 1.0);
  CHECK_THROWS_AS(rate_value(RateFormula::Rho1, cls), DomainError);
  CHECK_THROWS_AS(prop4_constant(cls), DomainError);
}

TEST_CASE("composite bound plug-in cases") {
  const RegularityClass cls(0.01, 1.0);
  const double gap0 = 3.7;
  // never-switched regime after one iteration
  CHECK(prop4_bound(cls, 1, std::nullopt, gap0) ==
        doctest::Approx(gap0 / 1.1).epsilon(1e-12));
  // zero iterations: the gap itself
  CHECK(prop4_bound(cls, 0, std::nullopt, gap0) == doctest::Approx(gap0).epsilon(1e-14));
  // frozen high-precision constants at kappa = 0.01
  CHECK(rate_value(RateFormula::Rho1, cls) ==
        doctest::Approx(0.9693465699682844).epsilon(1e-14));
  CHECK(prop4_constant(cls) == doctest::Approx(3.0599752021858375).epsilon(1e-12));
  CHECK_THROWS_AS(prop4_bound(cls, 5, 7, gap0), DomainError);
  CHECK_THROWS_AS(prop4_bound(cls, 5, 0, gap0), DomainError);  // missing distance
}

TEST_CASE("potentials vanish at the optimum and reduce to the gap when x = y") {
  std::mt19937_64 rng(3);
  const SmoothOracle q = random_quadratic(6, 0.05, 1.0, rng);
  const Eigen::VectorXd xs = *q.x_star();
  const RegularityClass cls = q.regularity();

  const PotentialSpec v1{PotentialKind::Lemma1V, cls, 0.0, {}};
  const PotentialSpec v2{PotentialKind::Lemma2V, cls, 0.0, {}};
  const PotentialSpec v3{PotentialKind::Lemma3V, cls, 0.8, xs};
  CHECK(potential_value(v1, q, xs, xs) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(potential_value(v2, q, xs, xs) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(potential_value(v3, q, xs, xs) == doctest::Approx(0.0).epsilon(1e-14));

  const Eigen::VectorXd z = gaussian_vector(6, rng);
  CHECK(potential_value(v1, q, z, z) ==
        doctest::Approx(q.value(z) - q.f_star_value()).epsilon(1e-12));

  PotentialSpec missing = v3;
  missing.x_star.reset();
  CHECK_THROWS_AS(potential_value(missing, q, z, z), DomainError);
}

TEST_CASE("Lemma3 potential matches an independent re-evaluation") {
  std::mt19937_64 rng(7);
  const SmoothOracle q = random_quadratic(5, 0.1, 1.3, rng);
  const Eigen::VectorXd xs = *q.x_star();
  const double rho = 0.9;
  const PotentialSpec v3{PotentialKind::Lemma3V, q.regularity(), rho, xs};
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd x = gaussian_vector(5, rng), y = gaussian_vector(5, rng);
    // expand the norm from scratch: ||a/sqrt(rho) - sqrt(rho) b||^2
    const Eigen::VectorXd a = x - xs, b = y - xs;
    const double expanded =
        a.squaredNorm() / rho - 2.0 * a.dot(b) + rho * b.squaredNorm();
    const double expect = 0.5 * q.regularity().L * expanded + q.value(y) - q.f_star_value();
    CHECK(potential_value(v3, q, x, y) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("distance-contraction rate is concave on its interval") {
  const RegularityClass cls(0.07, 1.0);
  const double lo = 1.0 / cls.L, hi = 1.0 / cls.mu;
  const double h = (hi - lo) / 400.0;
  for (int i = 1; i < 400; ++i) {
    const double g = lo + i * h;
    const double second = rate_value(RateFormula::Prop1, cls, g - h) -
                          2.0 * rate_value(RateFormula::Prop1, cls, g) +
                          rate_value(RateFormula::Prop1, cls, g + h);
    CHECK(second <= 1e-10);
  }
}

TEST_CASE("grid maxima of both step-rule rates agree with the closed form") {
  const RegularityClass cls(0.1, 1.0);
  const double target = 0.6694214876033057;  // ((L-mu)/(L+mu))^2
  const MaxResult m1 = grid_golden_max(
      [&](double g) { return rate_value(RateFormula::Prop1, cls, g); }, 1.0 / cls.L,
      1.0 / cls.mu);
  CHECK(std::abs(m1.value - target) <= 1e-10);
  CHECK(std::abs(m1.arg - 2.0 / (cls.L + cls.mu)) <= 1e-5);

  const MaxResult m2 = grid_golden_max(
      [&](double g) { return rate_value(RateFormula::Prop2, cls, g); }, 1.0 / cls.L,
      (2.0 * cls.L - cls.mu) / (cls.L * cls.L));
  CHECK(std::abs(m2.value - target) <= 1e-10);
  CHECK(std::abs(m2.arg - 2.0 / (cls.L + cls.mu)) <= 1e-5);
}

TEST_CASE("adaptive rate at the geometric-mean estimate is the accelerated rate") {
  const RegularityClass cls(0.04, 1.0);
  const double at_crossover =
      rate_value(RateFormula::Lemma2, cls, std::sqrt(cls.L * cls.mu));
  CHECK(at_crossover == doctest::Approx(rate_value(RateFormula::Rho2, cls)).epsilon(1e-13));
}
