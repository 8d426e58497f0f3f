#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include <polyak/oracles.hpp>
#include <polyak/regularity.hpp>

namespace polyak {

/// Closed-form worst-case one-iteration rates.
///   Prop1  : rho(gamma) = (gamma L - 1)(1 - gamma mu) / (gamma (L+mu) - 1),
///            gamma in [1/L, 1/mu]
///   Prop2  : rho(gamma) = (L gamma - 1)(L gamma (3 - gamma (L+mu)) - 1),
///            gamma in [1/L, (2L - mu)/L^2]
///   Lemma2 : rho(mu~) = 1 / (1 + mu~/L), mu~ in (0, L]
///   Rho1   : (1 + (mu/L)^{3/4})^{-1}        (no argument)
///   Rho2   : (1 + sqrt(mu/L))^{-1}          (no argument)
enum class RateFormula { Prop1, Prop2, Lemma2, Rho1, Rho2 };

/// Evaluates a rate formula at `arg` (gamma or mu~; ignored by Rho1/Rho2).
/// Throws DomainError outside the stated interval (small relative overhang
/// from floating-point step computations is tolerated).
double rate_value(RateFormula formula, const RegularityClass& cls, double arg = 0.0);

/// The constant C = ((1/rho1 - 1)(1 + sqrt(L/(2 mu)))^2 + 1) of the composite
/// bound. Refuses kappa < 1e-12 (loss of significance in sqrt(L/(2 mu))).
double prop4_constant(const RegularityClass& cls);

/// Right-hand side of the three-case composite bound after N iterations with
/// regime switch at m (nullopt = the switch never happened). `initial_dist`
/// = ||x0 - x*||^2 is required only for the m = 0 case.
double prop4_bound(const RegularityClass& cls, int N, std::optional<int> m,
                   double initial_gap, std::optional<double> initial_dist = {});

/// Lyapunov functions used by the momentum analyses.
///   Lemma1V : (L-mu)/2 ||x - y||^2 + f(y) - f*
///   Lemma2V : L/2 ||x - y||^2 + f(y) - f*
///   Lemma3V : L/2 || (x - x*)/sqrt(rho) - sqrt(rho)(y - x*) ||^2 + f(y) - f*
enum class PotentialKind { Lemma1V, Lemma2V, Lemma3V };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Lemma2V;
  RegularityClass cls;
  double rho = 0.0;                         // Lemma3V contraction factor
  std::optional<Eigen::VectorXd> x_star;    // required for Lemma3V
};

/// Exact potential evaluation; requires f* on the oracle (and x* for Lemma3V).
double potential_value(const PotentialSpec& spec, const SmoothOracle& oracle,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct MaxResult {
  double arg = 0.0;
  double value = 0.0;
};

/// Maximum of a concave (or at least unimodal-near-peak) function on [lo, hi]:
/// coarse grid scan followed by golden-section refinement of the bracketing
/// interval.
MaxResult grid_golden_max(const std::function<double(double)>& f, double lo, double hi,
                          int grid = 10000, int refine_steps = 60);

}  // namespace polyak
