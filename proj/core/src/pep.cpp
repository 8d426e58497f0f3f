#include "polyak/pep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyak/errors.hpp"
#include "polyak/rates.hpp"

namespace polyak {
namespace {

/// Reduced program data at fixed gamma. The step equality fgap = c*gamma*G
/// (c = 1/2 for the doubled step, 1 for the regular step) is already
/// substituted, leaving
///   maximize 1 + 2 gamma GX + gamma^2 G
///   s.t.     a1g G + a1x GX + s <= 0      (interpolation x_k -> x*)
///            a2g G + a2x GX + s <= 0      (interpolation x* -> x_k)
///            GX^2 - G <= 0                (Gram PSD with X = 1)
/// where s = mu L / (2 (L - mu)).
struct Reduced {
  double gamma = 0.0;
  double c = 0.5;
  double s = 0.0;
  double a1g = 0.0, a1x = 0.0;
  double a2g = 0.0, a2x = 0.0;

  double objective(double gx, double g) const {
    return 1.0 + 2.0 * gamma * gx + gamma * gamma * g;
  }
  double slack1(double gx, double g) const { return a1g * g + a1x * gx + s; }
  double slack2(double gx, double g) const { return a2g * g + a2x * gx + s; }
  double slack_gram(double gx, double g) const { return gx * gx - g; }
};

Reduced build_reduced(const RegularityClass& cls, double gamma, PepRule rule) {
  Reduced r;
  r.gamma = gamma;
  r.c = rule == PepRule::VariantI ? 0.5 : 1.0;
  r.s = cls.mu * cls.L / (2.0 * (cls.L - cls.mu));
  const double L = cls.L;
  r.a1g = r.c * gamma + 0.5 / L + r.s / (L * L);
  r.a1x = 1.0 + 2.0 * r.s / L;
  r.a2g = -r.c * gamma + 0.5 / L + r.s / (L * L);
  r.a2x = 2.0 * r.s / L;
  return r;
}

struct Candidate {
  double gx = 0.0;
  double g = 0.0;
  bool on_gram = false;
};

void append_line_intersection(const Reduced& r, std::vector<Candidate>& out) {
  // C1 = 0 and C2 = 0
  const double det = r.a1x * r.a2g - r.a2x * r.a1g;
  if (std::abs(det) < 1e-300) return;
  const double gx = (-r.s * r.a2g + r.s * r.a1g) / det;
  const double g = (-r.a1x * r.s + r.a2x * r.s) / det;
  out.push_back({gx, g, false});
}

void append_parabola_intersections(double ag, double ax, double b,
                                   std::vector<Candidate>& out) {
  // ag * gx^2 + ax * gx + b = 0 with g = gx^2
  if (std::abs(ag) < 1e-300) {
    if (std::abs(ax) > 1e-300) {
      const double gx = -b / ax;
      out.push_back({gx, gx * gx, true});
    }
    return;
  }
  const double disc = ax * ax - 4.0 * ag * b;
  if (disc < 0.0) return;
  const double root = std::sqrt(disc);
  for (const double sgn : {1.0, -1.0}) {
    const double gx = (-ax + sgn * root) / (2.0 * ag);
    out.push_back({gx, gx * gx, true});
  }
}

}  // namespace

const char* to_string(PepRule rule) {
  return rule == PepRule::VariantI ? "variant-i" : "polyak";
}

std::pair<double, double> admissible_gamma_interval(const RegularityClass& cls, PepRule rule) {
  if (!(cls.mu > 0.0))
    throw DomainError("admissible_gamma_interval: needs mu > 0 for a finite interval");
  if (rule == PepRule::VariantI) return {1.0 / cls.L, 1.0 / cls.mu};
  return {0.5 / cls.L, 0.5 / cls.mu};
}

PepSolution solve_rho_of_gamma(const RegularityClass& cls, double gamma, PepRule rule) {
  const auto [lo, hi] = admissible_gamma_interval(cls, rule);
  if (gamma < lo * (1.0 - 1e-9) || gamma > hi * (1.0 + 1e-9))
    throw DomainError("solve_rho_of_gamma: gamma outside the rule's admissible interval");

  const Reduced r = build_reduced(cls, gamma, rule);
  std::vector<Candidate> candidates;
  candidates.reserve(5);
  append_line_intersection(r, candidates);
  append_parabola_intersections(r.a1g, r.a1x, r.s, candidates);
  append_parabola_intersections(r.a2g, r.a2x, r.s, candidates);

  // Feasibility slack relative to the magnitude of the terms entering each
  // constraint, so vertices sitting exactly on a boundary are not rejected.
  const auto feasible = [&](double gx, double g) {
    const double t1 = 1e-11 * std::max({1.0, std::abs(r.a1g * g), std::abs(r.a1x * gx), r.s});
    const double t2 = 1e-11 * std::max({1.0, std::abs(r.a2g * g), std::abs(r.a2x * gx), r.s});
    const double tg = 1e-11 * std::max(1.0, gx * gx);
    return r.slack1(gx, g) <= t1 && r.slack2(gx, g) <= t2 && r.slack_gram(gx, g) <= tg;
  };

  PepSolution sol;
  bool found = false;
  double best_obj = -std::numeric_limits<double>::infinity();
  double best_norm = std::numeric_limits<double>::infinity();
  for (const Candidate& cand : candidates) {
    if (cand.g < -1e-11 * std::max(1.0, std::abs(cand.gx))) continue;
    const double g = std::max(0.0, cand.g);
    if (!feasible(cand.gx, g)) continue;
    const double obj = r.objective(cand.gx, g);
    const double norm = std::hypot(cand.gx, g);
    const bool better =
        !found || obj > best_obj * (1.0 + 1e-12) + 1e-300 ||
        (std::abs(obj - best_obj) <= 1e-12 * std::max(1.0, std::abs(best_obj)) &&
         norm < best_norm);
    if (better) {
      found = true;
      best_obj = obj;
      best_norm = norm;
      sol.objective = obj;
      sol.vars = {1.0, g, cand.gx, r.c * gamma * g};
      sol.gamma = gamma;
      const double scale = std::max(1.0, std::abs(g) + std::abs(cand.gx));
      sol.active.interp_point_to_star = std::abs(r.slack1(cand.gx, g)) <= 1e-9 * scale;
      sol.active.interp_star_to_point = std::abs(r.slack2(cand.gx, g)) <= 1e-9 * scale;
      sol.active.gram = std::abs(r.slack_gram(cand.gx, g)) <= 1e-9 * scale;
    }
  }
  if (!found)
    throw DomainError("solve_rho_of_gamma: empty feasible set (gamma not reachable)");
  return sol;
}

GammaSweep sweep_gamma(const RegularityClass& cls, PepRule rule, int grid_size) {
  if (grid_size < 2) throw DomainError("sweep_gamma: grid_size must be at least 2");
  const auto [lo, hi] = admissible_gamma_interval(cls, rule);

  GammaSweep sweep;
  sweep.curve.reserve(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const double gamma = lo + (hi - lo) * i / (grid_size - 1);
    sweep.curve.push_back({gamma, solve_rho_of_gamma(cls, gamma, rule).objective});
  }
  const MaxResult refined = grid_golden_max(
      [&](double gamma) { return solve_rho_of_gamma(cls, gamma, rule).objective; }, lo, hi,
      std::max(grid_size, 1024));
  sweep.gamma_max = refined.arg;
  sweep.rho_max = refined.value;
  return sweep;
}

MultiplierReport verify_certificate_multipliers(const RegularityClass& cls, double gamma,
                                                int samples, int dim, std::uint64_t seed) {
  if (!(cls.mu > 0.0)) throw DomainError("verify_certificate_multipliers: needs mu > 0");
  if (gamma <= 1.0 / cls.L || gamma >= 1.0 / cls.mu)
    throw DomainError("verify_certificate_multipliers: gamma must lie strictly in (1/L, 1/mu)");

  const std::vector<double> lam = identity_multipliers(IdentityTag::AppA, cls, gamma);
  const CertificateReport id =
      check_identity(IdentityTag::AppA, cls, gamma, samples, dim, seed);

  MultiplierReport rep;
  rep.lambda1 = lam[0];
  rep.lambda2 = lam[1];
  rep.lambda3 = lam[2];
  rep.max_residual = id.max_residual;
  rep.samples = id.samples;
  rep.pass = id.pass && rep.lambda1 >= -1e-12 && rep.lambda2 >= -1e-12;
  return rep;
}

}  // namespace polyak
