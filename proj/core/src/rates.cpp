#include "polyak/rates.hpp"

#include <cmath>

#include "polyak/errors.hpp"

namespace polyak {
namespace {

constexpr double kMinKappa = 1e-12;

void require_interval(double arg, double lo, double hi, const char* what) {
  const double slack = 1e-9 * std::max(1.0, hi - lo);
  if (arg < lo - slack || arg > hi + slack)
    throw DomainError(std::string(what) + ": argument outside the stated interval");
}

void require_kappa(const RegularityClass& cls, const char* what) {
  if (cls.kappa() < kMinKappa)
    throw DomainError(std::string(what) + ": kappa below 1e-12 loses significance");
}

}  // namespace

double rate_value(RateFormula formula, const RegularityClass& cls, double arg) {
  const double mu = cls.mu, L = cls.L;
  switch (formula) {
    case RateFormula::Prop1: {
      if (mu <= 0.0) throw DomainError("Prop1 rate: needs mu > 0");
      require_interval(arg, 1.0 / L, 1.0 / mu, "Prop1 rate");
      return (arg * L - 1.0) * (1.0 - arg * mu) / (arg * (L + mu) - 1.0);
    }
    case RateFormula::Prop2: {
      require_interval(arg, 1.0 / L, (2.0 * L - mu) / (L * L), "Prop2 rate");
      return (L * arg - 1.0) * (L * arg * (3.0 - arg * (L + mu)) - 1.0);
    }
    case RateFormula::Lemma2: {
      require_interval(arg, 0.0, L, "Lemma2 rate");
      if (arg <= 0.0) throw DomainError("Lemma2 rate: needs mu~ > 0");
      return 1.0 / (1.0 + arg / L);
    }
    case RateFormula::Rho1:
      require_kappa(cls, "rho1");
      return 1.0 / (1.0 + std::pow(cls.kappa(), 0.75));
    case RateFormula::Rho2:
      require_kappa(cls, "rho2");
      return 1.0 / (1.0 + std::sqrt(cls.kappa()));
  }
  throw DomainError("rate_value: unknown formula");
}

double prop4_constant(const RegularityClass& cls) {
  require_kappa(cls, "prop4 constant");
  const double rho1 = rate_value(RateFormula::Rho1, cls);
  const double root = 1.0 + std::sqrt(cls.L / (2.0 * cls.mu));
  return (1.0 / rho1 - 1.0) * root * root + 1.0;
}

double prop4_bound(const RegularityClass& cls, int N, std::optional<int> m,
                   double initial_gap, std::optional<double> initial_dist) {
  if (N < 0) throw DomainError("prop4_bound: negative iteration count");
  require_kappa(cls, "prop4 bound");
  const double rho1 = rate_value(RateFormula::Rho1, cls);
  const double rho2 = rate_value(RateFormula::Rho2, cls);
  if (!m) return std::pow(rho2, N) * initial_gap;
  if (*m < 0 || *m > N) throw DomainError("prop4_bound: m outside {0,...,N}");
  if (*m == 0) {
    if (!initial_dist) throw DomainError("prop4_bound: m = 0 case needs ||x0 - x*||^2");
    const double stretch = 1.0 / std::sqrt(rho1) - std::sqrt(rho1);
    return std::pow(rho1, N) *
           (0.5 * cls.L * stretch * stretch * *initial_dist + initial_gap);
  }
  return prop4_constant(cls) * std::pow(rho1, N - *m) * std::pow(rho2, *m) * initial_gap;
}

double potential_value(const PotentialSpec& spec, const SmoothOracle& oracle,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double gap = oracle.value(y) - oracle.f_star_value();
  switch (spec.kind) {
    case PotentialKind::Lemma1V:
      return 0.5 * (spec.cls.L - spec.cls.mu) * (x - y).squaredNorm() + gap;
    case PotentialKind::Lemma2V:
      return 0.5 * spec.cls.L * (x - y).squaredNorm() + gap;
    case PotentialKind::Lemma3V: {
      if (!spec.x_star) throw DomainError("Lemma3 potential: x* required");
      if (!(spec.rho > 0.0)) throw DomainError("Lemma3 potential: rho must be positive");
      const double root = std::sqrt(spec.rho);
      const Eigen::VectorXd mix = (x - *spec.x_star) / root - root * (y - *spec.x_star);
      return 0.5 * spec.cls.L * mix.squaredNorm() + gap;
    }
  }
  throw DomainError("potential_value: unknown potential");
}

MaxResult grid_golden_max(const std::function<double(double)>& f, double lo, double hi,
                          int grid, int refine_steps) {
  if (!(hi >= lo)) throw DomainError("grid_golden_max: empty interval");
  if (grid < 2) throw DomainError("grid_golden_max: need at least 2 grid points");
  int best_i = 0;
  double best_v = f(lo);
  for (int i = 1; i < grid; ++i) {
    const double g = lo + (hi - lo) * i / (grid - 1);
    const double v = f(g);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / (grid - 1);
  double b = lo + (hi - lo) * std::min(grid - 1, best_i + 1) / (grid - 1);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < refine_steps; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = f(mid);
  if (fmid >= best_v) return {mid, fmid};
  return {lo + (hi - lo) * best_i / (grid - 1), best_v};
}

}  // namespace polyak
