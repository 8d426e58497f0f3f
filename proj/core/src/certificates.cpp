#include "polyak/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "polyak/errors.hpp"

namespace polyak {
namespace {

template <typename Real>
using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
struct RealAtoms {
  VecR<Real> x_k, y_k, x_star, g_xk, g_yk, g_yk1, g_xk1;
  Real f_xk, f_yk, f_yk1, f_xk1, f_star;
};

template <typename Real>
RealAtoms<Real> promote(const AtomSample& a) {
  RealAtoms<Real> r;
  r.x_k = a.x_k.cast<Real>();
  r.y_k = a.y_k.cast<Real>();
  r.x_star = a.x_star.cast<Real>();
  r.g_xk = a.g_xk.cast<Real>();
  r.g_yk = a.g_yk.cast<Real>();
  r.g_yk1 = a.g_yk1.cast<Real>();
  r.g_xk1 = a.g_xk1.cast<Real>();
  r.f_xk = a.f_xk;
  r.f_yk = a.f_yk;
  r.f_yk1 = a.f_yk1;
  r.f_xk1 = a.f_xk1;
  r.f_star = a.f_star;
  return r;
}

/// Interpolation inequality left-hand side between (f_a, g_a, a) and
/// (f_b, g_b, b) for the class (mu, L).
template <typename Real>
Real interp(Real fa, const VecR<Real>& ga, const VecR<Real>& a, Real fb, const VecR<Real>& gb,
            const VecR<Real>& b, Real mu, Real L) {
  return fa - fb + ga.dot(b - a) + (ga - gb).squaredNorm() / (2 * L) +
         mu / (2 * (1 - mu / L)) * (a - b - (ga - gb) / L).squaredNorm();
}

template <typename Real>
struct Sides {
  Real lhs, rhs;
};

template <typename Real>
Sides<Real> eval_app_a(const RealAtoms<Real>& at, Real mu, Real L, Real gamma,
                       const std::vector<Real>& lam) {
  const VecR<Real> zero = VecR<Real>::Zero(at.x_k.size());
  const Real i1 = interp(at.f_xk, at.g_xk, at.x_k, at.f_star, zero, at.x_star, mu, L);
  const Real i2 = interp(at.f_star, zero, at.x_star, at.f_xk, at.g_xk, at.x_k, mu, L);
  const Real i3 = 2 * (at.f_xk - at.f_star) - gamma * at.g_xk.squaredNorm();
  const Real rho = (gamma * L - 1) * (1 - gamma * mu) / (gamma * (L + mu) - 1);
  const VecR<Real> x_next = at.x_k - gamma * at.g_xk;
  return {lam[0] * i1 + lam[1] * i2 + lam[2] * i3,
          (x_next - at.x_star).squaredNorm() - rho * (at.x_k - at.x_star).squaredNorm()};
}

template <typename Real>
Sides<Real> eval_app_b(const RealAtoms<Real>& at, Real mu, Real L, Real gamma,
                       const std::vector<Real>& lam) {
  const VecR<Real> zero = VecR<Real>::Zero(at.x_k.size());
  const VecR<Real> x_next = at.x_k - gamma * at.g_xk;
  const Real i1 = interp(at.f_xk, at.g_xk, at.x_k, at.f_star, zero, at.x_star, mu, L);
  const Real i2 = interp(at.f_xk1, at.g_xk1, x_next, at.f_star, zero, at.x_star, mu, L);
  const Real i3 = interp(at.f_xk1, at.g_xk1, x_next, at.f_xk, at.g_xk, at.x_k, mu, L);
  const Real i4 =
      (2 * L * L * gamma - 4 * L) * (at.f_xk - at.f_star) + at.g_xk.squaredNorm();
  const Real rho = (L * gamma - 1) * (L * gamma * (3 - gamma * (L + mu)) - 1);
  const VecR<Real> resid =
      at.g_xk1 - L * mu * gamma * (at.x_k - at.x_star) + (gamma * (L + mu) - 1) * at.g_xk;
  return {lam[0] * i1 + lam[1] * i2 + lam[2] * i3 + lam[3] * i4,
          (at.f_xk1 - at.f_star) - rho * (at.f_xk - at.f_star) +
              resid.squaredNorm() / (2 * (L - mu))};
}

template <typename Real>
Sides<Real> eval_app_c1(const RealAtoms<Real>& at, Real mu, Real L, Real beta,
                        const std::vector<Real>& lam) {
  const VecR<Real> zero = VecR<Real>::Zero(at.x_k.size());
  const Real rho = 1 - mu / L;
  const VecR<Real> y1 = at.x_k - at.g_xk / L;
  const VecR<Real> x1 = y1 + beta * (y1 - at.y_k);
  const Real i1 = interp(at.f_xk, at.g_xk, at.x_k, at.f_yk, at.g_yk, at.y_k, mu, L);
  const Real i2 = interp(at.f_yk1, at.g_yk1, y1, at.f_star, zero, at.x_star, mu, L);
  const Real i3 = interp(at.f_yk1, at.g_yk1, y1, at.f_xk, at.g_xk, at.x_k, mu, L);
  const auto pot = [&](const VecR<Real>& x, const VecR<Real>& y, Real fy) {
    return (L - mu) / 2 * (x - y).squaredNorm() + fy - at.f_star;
  };
  const VecR<Real> r1 = (1 - rho) * (at.g_xk - L * (at.x_k - at.x_star)) + at.g_yk1;
  const VecR<Real> r2 = at.g_yk - at.g_xk + mu * (at.x_k - at.y_k);
  const VecR<Real> r3 = at.g_xk + L * (at.y_k - at.x_k);
  return {lam[0] * i1 + lam[1] * i2 + lam[2] * i3,
          pot(x1, y1, at.f_yk1) - rho * pot(at.x_k, at.y_k, at.f_yk) +
              r1.squaredNorm() / (2 * (L - mu)) + rho * r2.squaredNorm() / (2 * (L - mu)) +
              (1 - beta * beta) * rho / (2 * L) * r3.squaredNorm()};
}

template <typename Real>
Sides<Real> eval_app_c2(const RealAtoms<Real>& at, Real /*mu*/, Real L, Real mu_tilde,
                        const std::vector<Real>& lam) {
  const Real s = std::sqrt(mu_tilde / L);
  const Real beta = (1 - s) / (1 + s);
  const Real rho = 1 / (1 + mu_tilde / L);
  const VecR<Real> y1 = at.x_k - at.g_xk / L;
  const VecR<Real> x1 = y1 + beta * (y1 - at.y_k);
  const Real i1 = at.f_yk1 - at.f_xk + at.g_yk1.dot(at.x_k - y1) +
                  (at.g_xk - at.g_yk1).squaredNorm() / (2 * L);
  const Real i2 = at.f_xk - at.f_yk + at.g_xk.dot(at.y_k - at.x_k);
  const Real i3 = 2 * mu_tilde * (at.f_yk1 - at.f_star) - at.g_yk1.squaredNorm();
  const auto pot = [&](const VecR<Real>& x, const VecR<Real>& y, Real fy) {
    return L / 2 * (x - y).squaredNorm() + fy - at.f_star;
  };
  const Real coeff =
      (4 * L * L * s - L * (mu_tilde - 2 * mu_tilde * s) - mu_tilde * mu_tilde) /
      (2 * L * L * (L + mu_tilde) * (s + 1) * (s + 1));
  const VecR<Real> r = at.g_xk + L * (at.y_k - at.x_k);
  return {lam[0] * i1 + lam[1] * i2 + lam[2] * i3,
          pot(x1, y1, at.f_yk1) - rho * pot(at.x_k, at.y_k, at.f_yk) +
              coeff * r.squaredNorm()};
}

template <typename Real>
Sides<Real> eval_app_c3(const RealAtoms<Real>& at, Real mu, Real L, Real beta,
                        const std::vector<Real>& lam) {
  const VecR<Real> zero = VecR<Real>::Zero(at.x_k.size());
  const Real kappa = mu / L;
  const Real rho = 1 / (1 + std::pow(kappa, Real(0.75)));
  const VecR<Real> y1 = at.x_k - at.g_xk / L;
  const VecR<Real> x1 = y1 + beta * (y1 - at.y_k);
  const Real i1 = interp(at.f_yk1, at.g_yk1, y1, at.f_xk, at.g_xk, at.x_k, mu, L);
  const Real i2 = interp(at.f_xk, at.g_xk, at.x_k, at.f_star, zero, at.x_star, mu, L);
  const Real i3 = at.f_xk - at.f_yk + at.g_xk.dot(at.y_k - at.x_k);
  const Real sq = std::sqrt(rho);
  const auto pot = [&](const VecR<Real>& x, const VecR<Real>& y, Real fy) {
    return L / 2 * ((x - at.x_star) / sq - sq * (y - at.x_star)).squaredNorm() + fy -
           at.f_star;
  };
  const Real denom = beta * beta - rho * rho * rho;
  const Real c1 = (beta * rho - beta * (beta + 1) + rho * rho) / denom;
  const Real c2 = (beta * beta - beta * rho + beta - rho * rho) / (L * denom);
  const Real c3 = L * L * (1 - rho) *
                  (kappa * rho * (2 * beta * rho - beta * (beta + 2) + rho) +
                   (rho - 1) * (beta - rho) * (beta - rho)) /
                  (2 * (-denom) * (L - mu));
  const VecR<Real> r3 = (at.y_k - at.x_star) + c1 * (at.x_k - at.x_star) + c2 * at.g_xk;
  const VecR<Real> r4 = at.x_k - at.x_star - at.g_xk / L;
  return {lam[0] * i1 + lam[1] * i2 + lam[2] * i3,
          pot(x1, y1, at.f_yk1) - rho * pot(at.x_k, at.y_k, at.f_yk) +
              at.g_yk1.squaredNorm() / (2 * (L - mu)) +
              (1 - rho) / (2 * L) * at.g_xk.squaredNorm() +
              L * (-denom) / (2 * rho) * r3.squaredNorm() + c3 * r4.squaredNorm()};
}

template <typename Real>
Sides<Real> eval_identity(IdentityTag tag, const RealAtoms<Real>& atoms, Real mu, Real L,
                          Real param, const std::vector<Real>& lam) {
  switch (tag) {
    case IdentityTag::AppA: return eval_app_a(atoms, mu, L, param, lam);
    case IdentityTag::AppB: return eval_app_b(atoms, mu, L, param, lam);
    case IdentityTag::AppC1: return eval_app_c1(atoms, mu, L, param, lam);
    case IdentityTag::AppC2: return eval_app_c2(atoms, mu, L, param, lam);
    case IdentityTag::AppC3: return eval_app_c3(atoms, mu, L, param, lam);
  }
  throw DomainError("unknown identity tag");
}

template <typename Real>
Real relative_residual(const Sides<Real>& s) {
  using std::abs;
  const Real scale = std::max(Real(1), std::max(abs(s.lhs), abs(s.rhs)));
  return abs(s.lhs - s.rhs) / scale;
}

void validate_param(IdentityTag tag, const RegularityClass& cls, double param) {
  const double mu = cls.mu, L = cls.L;
  const double slack = 1e-9;
  switch (tag) {
    case IdentityTag::AppA:
      if (mu <= 0.0) throw DomainError("AppA: needs mu > 0");
      if (param < 1.0 / L - slack / L || param > 1.0 / mu + slack / mu)
        throw DomainError("AppA: gamma outside [1/L, 1/mu]");
      return;
    case IdentityTag::AppB:
      if (param < 1.0 / L - slack / L || param > (2.0 * L - mu) / (L * L) + slack / L)
        throw DomainError("AppB: gamma outside [1/L, (2L-mu)/L^2]");
      return;
    case IdentityTag::AppC1:
      if (param < -slack || param > 1.0 + slack)
        throw DomainError("AppC1: beta outside [0, 1]");
      return;
    case IdentityTag::AppC2:
      if (!(param > 0.0) || param > L * (1.0 + slack))
        throw DomainError("AppC2: mu~ outside (0, L]");
      return;
    case IdentityTag::AppC3: {
      if (mu <= 0.0) throw DomainError("AppC3: needs mu > 0");
      const double q = std::pow(cls.kappa(), 0.25);
      const double s = std::sqrt(cls.kappa());
      const double beta_minus = (1.0 - q) / (1.0 + q);
      const double beta_plus = (1.0 - s) / (1.0 + s);
      if (param < beta_minus - slack || param > beta_plus + slack)
        throw DomainError("AppC3: beta outside the admissible bracket");
      return;
    }
  }
}

AtomSample draw_atoms(int dim, std::mt19937_64& rng) {
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

template <typename Real>
std::vector<Real> to_real(const std::vector<double>& v) {
  return std::vector<Real>(v.begin(), v.end());
}

constexpr double kResidualTol = 1e-10;
constexpr double kSignTol = -1e-12;

}  // namespace

const char* to_string(IdentityTag tag) {
  switch (tag) {
    case IdentityTag::AppA: return "appa";
    case IdentityTag::AppB: return "appb";
    case IdentityTag::AppC1: return "appc1";
    case IdentityTag::AppC2: return "appc2";
    case IdentityTag::AppC3: return "appc3";
  }
  return "unknown";
}

std::vector<double> identity_multipliers(IdentityTag tag, const RegularityClass& cls,
                                         double param) {
  const double mu = cls.mu, L = cls.L;
  switch (tag) {
    case IdentityTag::AppA: {
      const double d = param * (L + mu) - 1.0;
      return {2.0 * param * (param * L - 1.0) / d, 2.0 * param * (1.0 - param * mu) / d,
              param * (2.0 - param * (L + mu)) / d};
    }
    case IdentityTag::AppB:
      return {param * mu * (L * param - 1.0), param * mu, 1.0 - param * mu,
              0.5 * param * ((L + mu) * param - 2.0)};
    case IdentityTag::AppC1: {
      const double rho = 1.0 - mu / L;
      return {rho, 1.0 - rho, rho};
    }
    case IdentityTag::AppC2: {
      const double rho = 1.0 / (1.0 + param / L);
      return {rho, rho, (1.0 - rho) / (2.0 * param)};
    }
    case IdentityTag::AppC3: {
      const double rho = 1.0 / (1.0 + std::pow(cls.kappa(), 0.75));
      return {1.0, 1.0 - rho, rho};
    }
  }
  throw DomainError("unknown identity tag");
}

std::vector<double> identity_nonneg_values(IdentityTag tag, const RegularityClass& cls,
                                           double param) {
  const double mu = cls.mu, L = cls.L;
  std::vector<double> lam = identity_multipliers(tag, cls, param);
  switch (tag) {
    case IdentityTag::AppA:
      return {lam[0], lam[1]};
    case IdentityTag::AppB:
      return {lam[0], lam[1], lam[2]};
    case IdentityTag::AppC1: {
      const double rho = 1.0 - mu / L;
      lam.push_back((1.0 - param * param) * rho / (2.0 * L));
      return lam;
    }
    case IdentityTag::AppC2: {
      const double s = std::sqrt(param / L);
      lam.push_back((4.0 * L * L * s - L * (param - 2.0 * param * s) - param * param) /
                    (2.0 * L * L * (L + param) * (s + 1.0) * (s + 1.0)));
      return lam;
    }
    case IdentityTag::AppC3: {
      const double kappa = cls.kappa();
      const double rho = 1.0 / (1.0 + std::pow(kappa, 0.75));
      const double beta = param;
      const double gap = rho * rho * rho - beta * beta;
      const double p3 = kappa * rho * (2.0 * beta * rho - beta * (beta + 2.0) + rho) +
                        (rho - 1.0) * (beta - rho) * (beta - rho);
      lam.push_back(1.0 / (2.0 * (L - mu)));
      lam.push_back((1.0 - rho) / (2.0 * L));
      lam.push_back(L * gap / (2.0 * rho));
      lam.push_back(L * L * (1.0 - rho) * p3 / (2.0 * gap * (L - mu)));
      return lam;
    }
  }
  throw DomainError("unknown identity tag");
}

double identity_residual(IdentityTag tag, const RegularityClass& cls, double free_param,
                         const AtomSample& atoms, const Mutation& mutation) {
  std::vector<double> lam = identity_multipliers(tag, cls, free_param);
  if (mutation.multiplier_index >= 0) {
    if (mutation.multiplier_index >= static_cast<int>(lam.size()))
      throw DomainError("mutation index out of range");
    lam[mutation.multiplier_index] += mutation.delta;
  }
  const auto sides = eval_identity<double>(tag, promote<double>(atoms), cls.mu, cls.L,
                                           free_param, lam);
  double res = relative_residual(sides);
  if (res > 0.1 * kResidualTol) {
    const auto wide = eval_identity<long double>(
        tag, promote<long double>(atoms), static_cast<long double>(cls.mu),
        static_cast<long double>(cls.L), static_cast<long double>(free_param),
        to_real<long double>(lam));
    res = static_cast<double>(relative_residual(wide));
  }
  return res;
}

CertificateReport check_identity(IdentityTag tag, const RegularityClass& cls,
                                 double free_param, int samples, int dim,
                                 std::uint64_t seed, const Mutation& mutation) {
  validate_param(tag, cls, free_param);
  if (samples <= 0 || dim <= 0)
    throw DomainError("check_identity: samples and dim must be positive");

  std::mt19937_64 rng(seed);
  CertificateReport report;
  report.tag = tag;
  report.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const AtomSample atoms = draw_atoms(dim, rng);
    report.max_residual =
        std::max(report.max_residual, identity_residual(tag, cls, free_param, atoms, mutation));
  }
  const std::vector<double> nonneg = identity_nonneg_values(tag, cls, free_param);
  report.multiplier_min = *std::min_element(nonneg.begin(), nonneg.end());
  report.pass = report.max_residual <= kResidualTol && report.multiplier_min >= kSignTol;
  return report;
}

double poly_p1(double x) {
  // -x^8 + 4x^7 - 8x^6 + 9x^5 - 4x^4 - 4x^3 + 9x^2 - 8x + 4
  return ((((((((-x + 4) * x - 8) * x + 9) * x - 4) * x - 4) * x + 9) * x - 8) * x + 4);
}

double poly_p2(double x) {
  // -x^11 + 2x^9 - 3x^8 - x^7 + 6x^6 - 3x^5 - 3x^4 + 6x^3 - 3x + 4
  return (((((((((((-x) * x + 2) * x - 3) * x - 1) * x + 6) * x - 3) * x - 3) * x + 6) * x +
            0) * x - 3) * x + 4);
}

double poly_p4(double x) {
  // x^8 - x^7 + 2x^6 + 3x^5 - 7x^4 + 5x^3 + 4x^2 - 7x + 4
  return ((((((((x - 1) * x + 2) * x + 3) * x - 7) * x + 5) * x + 4) * x - 7) * x + 4);
}

namespace {

double p3_minus_closed(double kappa) {
  const double q = std::pow(kappa, 0.25);
  const double s = std::sqrt(kappa);
  const double num = (1.0 - s + std::pow(kappa, 0.75)) * std::pow(kappa, 1.75);
  const double den = std::pow(1.0 + q, 3) * std::pow(1.0 - q + s, 3);
  return num / den;
}

double p3_plus_closed(double kappa) {
  const double q = std::pow(kappa, 0.25);
  const double s = std::sqrt(kappa);
  const double num = std::pow(kappa, 1.5) * poly_p4(q);
  const double den = std::pow(1.0 + q, 3) * (1.0 + s) * (1.0 + s) * std::pow(1.0 - q + s, 3);
  return num / den;
}

/// The concave-in-beta quadratic whose sign drives the last residual
/// coefficient: kappa*rho*(2 beta rho - beta(beta+2) + rho) + (rho-1)(beta-rho)^2.
double p3_assembled(double kappa, double beta) {
  const double rho = 1.0 / (1.0 + std::pow(kappa, 0.75));
  return kappa * rho * (2.0 * beta * rho - beta * (beta + 2.0) + rho) +
         (rho - 1.0) * (beta - rho) * (beta - rho);
}

}  // namespace

PolynomialReport check_polynomials(int grid) {
  if (grid < 2) throw DomainError("check_polynomials: grid must have at least 2 points");
  PolynomialReport rep;
  rep.grid = grid;
  rep.p1_min = rep.p2_min = rep.p4_min = std::numeric_limits<double>::infinity();
  rep.p3_minus_min = rep.p3_plus_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    rep.p1_min = std::min(rep.p1_min, poly_p1(t));
    rep.p2_min = std::min(rep.p2_min, poly_p2(t));
    rep.p4_min = std::min(rep.p4_min, poly_p4(t));
    rep.p3_minus_min = std::min(rep.p3_minus_min, p3_minus_closed(t));
    rep.p3_plus_min = std::min(rep.p3_plus_min, p3_plus_closed(t));
  }
  rep.pass = rep.p1_min >= kSignTol && rep.p2_min >= kSignTol && rep.p4_min >= kSignTol &&
             rep.p3_minus_min >= kSignTol && rep.p3_plus_min >= kSignTol;
  return rep;
}

BracketReport check_lemma3_bracket(int kappa_points, double kappa_min, double kappa_max) {
  if (kappa_points < 1) throw DomainError("check_lemma3_bracket: need at least one point");
  if (!(kappa_min > 0.0) || kappa_max > 1.0 || kappa_min > kappa_max)
    throw DomainError("check_lemma3_bracket: kappa range must lie in (0, 1]");

  BracketReport rep;
  rep.kappa_points = kappa_points;
  rep.rho_cubed_minus_beta_sq_min = std::numeric_limits<double>::infinity();
  rep.p3_min = std::numeric_limits<double>::infinity();
  const double log_lo = std::log(kappa_min), log_hi = std::log(kappa_max);
  for (int i = 0; i < kappa_points; ++i) {
    const double t = kappa_points == 1 ? 0.0 : static_cast<double>(i) / (kappa_points - 1);
    const double kappa = std::exp(log_lo + t * (log_hi - log_lo));
    const double rho = 1.0 / (1.0 + std::pow(kappa, 0.75));
    const double q = std::pow(kappa, 0.25);
    const double s = std::sqrt(kappa);
    const double beta_minus = (1.0 - q) / (1.0 + q);
    const double beta_plus = (1.0 - s) / (1.0 + s);
    // both endpoints plus 100 interior values of [beta-, beta+]
    for (int j = 0; j <= 101; ++j) {
      const double u = static_cast<double>(j) / 101.0;
      const double beta = beta_minus + u * (beta_plus - beta_minus);
      rep.rho_cubed_minus_beta_sq_min =
          std::min(rep.rho_cubed_minus_beta_sq_min, rho * rho * rho - beta * beta);
      rep.p3_min = std::min(rep.p3_min, p3_assembled(kappa, beta));
    }
  }
  rep.pass = rep.rho_cubed_minus_beta_sq_min >= kSignTol && rep.p3_min >= kSignTol;
  return rep;
}

}  // namespace polyak
