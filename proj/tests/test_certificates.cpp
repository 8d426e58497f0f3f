#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyak/certificates.hpp"
#include "polyak/errors.hpp"
#include "test_helpers.hpp"

using namespace polyak;

namespace {

AtomSample sample_atoms(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> off(0.0, 1.0);
  const auto vec = [&] {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = sym(rng);
    return v;
  };
  AtomSample a;
  a.x_k = vec();
  a.y_k = vec();
  a.x_star = vec();
  a.g_xk = vec();
  a.g_yk = vec();
  a.g_yk1 = vec();
  a.g_xk1 = vec();
  a.f_star = sym(rng);
  a.f_xk = a.f_star + off(rng);
  a.f_yk = a.f_star + off(rng);
  a.f_yk1 = a.f_star + off(rng);
  a.f_xk1 = a.f_star + off(rng);
  return a;
}

double bracket_beta(const RegularityClass& cls, double t) {
  const double q = std::pow(cls.kappa(), 0.25), s = std::sqrt(cls.kappa());
  const double lo = (1.0 - q) / (1.0 + q), hi = (1.0 - s) / (1.0 + s);
  return lo + t * (hi - lo);
}

}  // namespace

TEST_CASE("distance-contraction identity holds at the worst-case step size") {
  const RegularityClass cls(0.1, 1.0);
  const CertificateReport rep =
      check_identity(IdentityTag::AppA, cls, 2.0 / 1.1, 1000, 4);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-10);
  CHECK(rep.multiplier_min >= -1e-12);
}

TEST_CASE("momentum robustness identity at beta = 0 has unit residual coefficient") {
  const RegularityClass cls(0.2, 1.0);
  const std::vector<double> nonneg = identity_nonneg_values(IdentityTag::AppC1, cls, 0.0);
  // last entry is (1 - beta^2) rho / (2L) = rho / (2L) at beta = 0
  CHECK(nonneg.back() == doctest::Approx((1.0 - 0.2) / 2.0).epsilon(1e-14));
  const CertificateReport rep = check_identity(IdentityTag::AppC1, cls, 0.0, 500, 4);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-10);
}

TEST_CASE("adaptive potential identity at the estimate's upper end") {
  const RegularityClass cls(0.0, 1.0);
  // mu~ = L gives rho = 1/2
  const std::vector<double> lam = identity_multipliers(IdentityTag::AppC2, cls, cls.L);
  CHECK(lam[0] == doctest::Approx(0.5).epsilon(1e-14));
  const CertificateReport rep = check_identity(IdentityTag::AppC2, cls, cls.L, 500, 4);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-10);
}

TEST_CASE("every identity passes across parameter spreads") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int s = 0; s < 8; ++s) {
    const double mu = std::pow(10.0, -3.0 + 2.5 * uni(rng));
    const RegularityClass cls(mu, 1.0);
    const double t = uni(rng);

    const auto run_one = [&](IdentityTag tag, double param) {
      const CertificateReport rep = check_identity(tag, cls, param, 200, 5, 100 + s);
      CAPTURE(to_string(tag));
      CAPTURE(param);
      CHECK(rep.pass);
    };
    run_one(IdentityTag::AppA, 1.0 + t * (1.0 / mu - 1.0));
    run_one(IdentityTag::AppB, 1.0 + t * (1.0 - mu));
    run_one(IdentityTag::AppC1, t);
    run_one(IdentityTag::AppC2, 0.05 + 0.95 * t);
    run_one(IdentityTag::AppC3, bracket_beta(cls, t));
  }
}

TEST_CASE("residuals are invariant under degree-consistent atom rescaling") {
  const RegularityClass cls(0.05, 1.0);
  const AtomSample base = sample_atoms(5, 77);
  AtomSample scaled = base;
  const double s = 3.7;
  for (Eigen::VectorXd* v :
       {&scaled.x_k, &scaled.y_k, &scaled.x_star, &scaled.g_xk, &scaled.g_yk, &scaled.g_yk1,
        &scaled.g_xk1})
    *v *= s;
  for (double* f : {&scaled.f_xk, &scaled.f_yk, &scaled.f_yk1, &scaled.f_xk1, &scaled.f_star})
    *f *= s * s;

  for (const auto& [tag, param] :
       {std::pair{IdentityTag::AppA, 2.0}, std::pair{IdentityTag::AppB, 1.5},
        std::pair{IdentityTag::AppC1, 0.4}, std::pair{IdentityTag::AppC2, 0.3},
        std::pair{IdentityTag::AppC3, bracket_beta(cls, 0.5)}}) {
    const double r0 = identity_residual(tag, cls, param, base);
    const double r1 = identity_residual(tag, cls, param, scaled);
    CHECK(r0 <= 1e-12);
    CHECK(r1 <= 1e-12);
  }
}

TEST_CASE("perturbing any multiplier is detected") {
  const RegularityClass cls(0.05, 1.0);
  const auto params = [&](IdentityTag tag) {
    switch (tag) {
      case IdentityTag::AppA: return 2.0;
      case IdentityTag::AppB: return 1.5;
      case IdentityTag::AppC1: return 0.4;
      case IdentityTag::AppC2: return 0.3;
      case IdentityTag::AppC3: return bracket_beta(cls, 0.5);
    }
    return 0.0;
  };
  for (const IdentityTag tag : {IdentityTag::AppA, IdentityTag::AppB, IdentityTag::AppC1,
                                IdentityTag::AppC2, IdentityTag::AppC3}) {
    const int count =
        static_cast<int>(identity_multipliers(tag, cls, params(tag)).size());
    for (int i = 0; i < count; ++i) {
      const CertificateReport rep =
          check_identity(tag, cls, params(tag), 50, 4, 7, Mutation{i, 1e-3});
      CAPTURE(to_string(tag));
      CAPTURE(i);
      CHECK(rep.max_residual > 1e-5);
    }
  }
}

TEST_CASE("nonnegative multipliers across a dense parameter sweep") {
  // 10^4 parameter points spread over the admissible ranges of every identity
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2000; ++i) {
    const double mu = std::pow(10.0, -4.0 + 3.5 * uni(rng));
    const RegularityClass cls(mu, 1.0);
    const double t = uni(rng);
    const auto fold = [&](IdentityTag tag, double param) {
      for (const double v : identity_nonneg_values(tag, cls, param))
        worst = std::min(worst, v);
    };
    fold(IdentityTag::AppA, 1.0 + t * (1.0 / mu - 1.0));
    fold(IdentityTag::AppB, 1.0 + t * (1.0 - mu));
    fold(IdentityTag::AppC1, t);
    fold(IdentityTag::AppC2, 1e-3 + (1.0 - 1e-3) * t);
    fold(IdentityTag::AppC3, bracket_beta(cls, t));
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("identity parameters are validated") {
  const RegularityClass cls(0.1, 1.0);
  CHECK_THROWS_AS(check_identity(IdentityTag::AppA, cls, 0.2, 10, 4), DomainError);
  CHECK_THROWS_AS(check_identity(IdentityTag::AppC1, cls, 1.5, 10, 4), DomainError);
  CHECK_THROWS_AS(check_identity(IdentityTag::AppC2, cls, 0.0, 10, 4), DomainError);
  CHECK_THROWS_AS(check_identity(IdentityTag::AppC3, cls, 0.99, 10, 4), DomainError);
}

TEST_CASE("certificate polynomials evaluate to the paper's endpoint values") {
  CHECK(poly_p1(0.0) == 4.0);
  CHECK(poly_p1(1.0) == 1.0);  // coefficient sum of the displayed polynomial
  CHECK(poly_p2(0.0) == 4.0);
  CHECK(poly_p4(1.0) == 4.0);  // 1-1+2+3-7+5+4-7+4
}

TEST_CASE("certificate polynomials are nonnegative on the unit interval") {
  const PolynomialReport rep = check_polynomials(100000);
  CHECK(rep.pass);
  CHECK(rep.p1_min >= -1e-12);
  CHECK(rep.p2_min >= -1e-12);
  CHECK(rep.p4_min >= -1e-12);
  CHECK(rep.p3_minus_min >= -1e-12);
  CHECK(rep.p3_plus_min >= -1e-12);
}

TEST_CASE("bracket condition at the isotropic corner") {
  // kappa = 1: both bracket ends collapse to 0 and rho^3 = 1/8
  const BracketReport rep = check_lemma3_bracket(1, 1.0, 1.0);
  CHECK(rep.pass);
  CHECK(rep.rho_cubed_minus_beta_sq_min == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("bracket condition survives the vanishing-kappa limit") {
  const BracketReport rep = check_lemma3_bracket(1000, 1e-8, 1.0);
  CHECK(rep.pass);
  CHECK(rep.rho_cubed_minus_beta_sq_min >= -1e-12);
  CHECK(rep.p3_min >= -1e-12);
}

TEST_CASE("bracket margin at kappa = 0.01 matches an extended-precision evaluation") {
  const double kappa = 0.01;
  const double rho = 1.0 / (1.0 + std::pow(kappa, 0.75));
  const double s = std::sqrt(kappa);
  const double beta_plus = (1.0 - s) / (1.0 + s);
  const double margin = rho * rho * rho - beta_plus * beta_plus;

  const long double kl = 0.01L;
  const long double rl = 1.0L / (1.0L + powl(kl, 0.75L));
  const long double bl = (1.0L - sqrtl(kl)) / (1.0L + sqrtl(kl));
  const long double wide = rl * rl * rl - bl * bl;
  CHECK(margin > 0.0);
  CHECK(std::abs(margin - static_cast<double>(wide)) <= 1e-14);
}
