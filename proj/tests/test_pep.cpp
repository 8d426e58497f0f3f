#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "polyak/errors.hpp"
#include "polyak/methods.hpp"
#include "polyak/pep.hpp"
#include "polyak/rates.hpp"
#include "test_helpers.hpp"

using namespace polyak;
using namespace polyak::testing;

namespace {

/// Brute-force oracle: maximize the reduced objective over a (GX, G) grid on
/// a box inferred from the constraint intersections, keeping only feasible
/// points. Returns the best value and a bound on how far the true maximum
/// can exceed it (objective Lipschitz constant times the cell diagonal).
struct GridResult {
  double value;
  double resolution_bound;
};

GridResult grid_oracle(const RegularityClass& cls, double gamma, PepRule rule, int grid) {
  const double c = rule == PepRule::VariantI ? 0.5 : 1.0;
  const double s = cls.mu * cls.L / (2.0 * (cls.L - cls.mu));
  const double L = cls.L;
  const double a1g = c * gamma + 0.5 / L + s / (L * L);
  const double a1x = 1.0 + 2.0 * s / L;
  const double a2g = -c * gamma + 0.5 / L + s / (L * L);
  const double a2x = 2.0 * s / L;

  // box from the tighter interpolation constraint intersected with G = GX^2
  const double disc = a1x * a1x - 4.0 * a1g * s;
  REQUIRE(disc >= 0.0);
  const double r1 = (-a1x + std::sqrt(disc)) / (2.0 * a1g);
  const double r2 = (-a1x - std::sqrt(disc)) / (2.0 * a1g);
  const double gx_lo = std::min(r1, r2) - 0.1, gx_hi = std::max(r1, r2) + 0.1;
  const double g_hi = std::max(r1 * r1, r2 * r2) + 0.2;

  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double gx = gx_lo + (gx_hi - gx_lo) * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double g = g_hi * j / (grid - 1);
      if (gx * gx - g > 0.0) continue;
      if (a1g * g + a1x * gx + s > 0.0) continue;
      if (a2g * g + a2x * gx + s > 0.0) continue;
      best = std::max(best, 1.0 + 2.0 * gamma * gx + gamma * gamma * g);
    }
  }
  const double cell = std::hypot((gx_hi - gx_lo) / (grid - 1), g_hi / (grid - 1));
  const double lipschitz = 2.0 * gamma + gamma * gamma;
  return {best, 2.0 * lipschitz * cell};
}

}  // namespace

TEST_CASE("one-step worst case vanishes at the doubled step's endpoints") {
  const RegularityClass cls(0.1, 1.0);
  CHECK(solve_rho_of_gamma(cls, 1.0 / cls.L, PepRule::VariantI).objective ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(solve_rho_of_gamma(cls, 1.0 / cls.mu, PepRule::VariantI).objective ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("doubled-step sweep reaches the known worst case") {
  const RegularityClass cls(0.1, 1.0);
  const GammaSweep sweep = sweep_gamma(cls, PepRule::VariantI, 400);
  CHECK(std::abs(sweep.rho_max - 0.6694214876033057) <= 1e-6);
  CHECK(std::abs(sweep.gamma_max - 2.0 / 1.1) <= 1e-4);
  CHECK(sweep.curve.front().rho == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sweep.curve.back().rho == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("reduced solver matches the closed-form rate across the interval") {
  const RegularityClass cls(0.1, 1.0);
  for (int i = 0; i <= 100; ++i) {
    const double gamma = 1.0 / cls.L + (1.0 / cls.mu - 1.0 / cls.L) * i / 100.0;
    const double pep = solve_rho_of_gamma(cls, gamma, PepRule::VariantI).objective;
    const double analytic = rate_value(RateFormula::Prop1, cls, gamma);
    CHECK(std::abs(pep - analytic) <= 1e-8);
  }
}

TEST_CASE("reduced solver matches a brute-force grid search") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double mu = std::pow(10.0, -2.0 + 1.4 * uni(rng));
    const RegularityClass cls(mu, 1.0);
    const PepRule rule = trial % 2 == 0 ? PepRule::VariantI : PepRule::RegularPolyak;
    const auto [lo, hi] = admissible_gamma_interval(cls, rule);
    const double gamma = lo + (hi - lo) * (0.05 + 0.9 * uni(rng));

    const double kkt = solve_rho_of_gamma(cls, gamma, rule).objective;
    const GridResult grid = grid_oracle(cls, gamma, rule, 2000);
    CHECK(grid.value <= kkt + 1e-9);                     // relaxation of the grid
    CHECK(kkt <= grid.value + grid.resolution_bound);    // grid cannot be far below
    CHECK(std::abs(kkt - grid.value) <= 1e-4 * std::max(1.0, kkt));
  }
}

TEST_CASE("regular-step sweep reaches the distinct worst-case level") {
  const RegularityClass cls(0.01, 1.0);
  const GammaSweep sweep = sweep_gamma(cls, PepRule::RegularPolyak, 400);
  const double level =
      (cls.L * cls.L - cls.L * cls.mu + cls.mu * cls.mu) / ((cls.L + cls.mu) * (cls.L + cls.mu));
  CHECK(std::abs(sweep.rho_max - level) <= 1e-6);
}

TEST_CASE("worst case upper-bounds observed one-step ratios") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const SmoothOracle q = random_quadratic(8, 0.05, 1.0, rng);
    const RegularityClass cls = q.regularity();
    const Eigen::VectorXd xs = *q.x_star();
    RunOptions opts;
    opts.stop = {80, 0.0, 0.0};
    opts.record_iterates = true;
    for (const auto& [rule, pep_rule] :
         {std::pair{StepRule::variant_i(), PepRule::VariantI},
          std::pair{StepRule::regular_polyak(), PepRule::RegularPolyak}}) {
      const RunTrace trace = run(q, MethodSpec::gd(rule), gaussian_vector(8, rng), opts);
      const auto [lo, hi] = admissible_gamma_interval(cls, pep_rule);
      for (std::size_t i = 0; i + 1 < trace.xs.size(); ++i) {
        const double gamma = std::clamp(*trace.rows[i].step_or_mu, lo, hi);
        const double observed =
            (trace.xs[i + 1] - xs).squaredNorm() / (trace.xs[i] - xs).squaredNorm();
        const double bound = solve_rho_of_gamma(cls, gamma, pep_rule).objective;
        CHECK(observed <= bound + 1e-9);
      }
    }
  }
}

TEST_CASE("out-of-interval step sizes are rejected") {
  const RegularityClass cls(0.1, 1.0);
  CHECK_THROWS_AS(solve_rho_of_gamma(cls, 0.5, PepRule::VariantI), DomainError);
  CHECK_THROWS_AS(solve_rho_of_gamma(cls, 20.0, PepRule::VariantI), DomainError);
  CHECK_THROWS_AS(sweep_gamma(cls, PepRule::VariantI, 1), DomainError);
}

TEST_CASE("certificate multipliers behave as the closed forms dictate") {
  const RegularityClass cls(0.1, 1.0);
  // the step-equality multiplier vanishes at the worst-case step size
  const MultiplierReport at_peak = verify_certificate_multipliers(cls, 2.0 / 1.1);
  CHECK(at_peak.lambda3 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(at_peak.pass);
  // lambda1 vanishes as gamma approaches 1/L
  const std::vector<double> lam =
      identity_multipliers(IdentityTag::AppA, cls, 1.0 / cls.L);
  CHECK(lam[0] == doctest::Approx(0.0).epsilon(1e-14));

  const MultiplierReport mid = verify_certificate_multipliers(cls, 1.2);
  CHECK(mid.pass);
  CHECK(mid.max_residual < 1e-10);
  CHECK(mid.lambda1 >= 0.0);
  CHECK(mid.lambda2 >= 0.0);

  CHECK_THROWS_AS(verify_certificate_multipliers(cls, 1.0 / cls.L), DomainError);
}
