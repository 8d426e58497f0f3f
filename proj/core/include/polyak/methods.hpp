#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include <polyak/oracles.hpp>

namespace polyak {

/// Step-size policies for the adaptive gradient method
///   x_{k+1} = x_k - gamma_k grad f(x_k):
///   RegularPolyak : gamma = (f(x) - f*) / ||grad f(x)||^2
///   VariantI      : gamma = 2 (f(x) - f*) / ||grad f(x)||^2
///   VariantII     : gamma = (2 - ||grad f(x)||^2 / (2L (f(x) - f*))) / L
///   FixedStep     : a constant gamma (default 1/L).
enum class StepVariant { RegularPolyak, VariantI, VariantII, FixedStep };

struct StepRule {
  StepVariant variant = StepVariant::VariantI;
  std::optional<double> gamma;  // FixedStep only; unset means 1/L

  static StepRule regular_polyak() { return {StepVariant::RegularPolyak, {}}; }
  static StepRule variant_i() { return {StepVariant::VariantI, {}}; }
  static StepRule variant_ii() { return {StepVariant::VariantII, {}}; }
  static StepRule fixed(std::optional<double> gamma = {}) {
    return {StepVariant::FixedStep, gamma};
  }
};

/// Momentum policies for the accelerated method. The adaptive rules estimate
/// strong convexity from the inverse Polyak ratio at the fresh iterate:
///   ConstMom     : mu~ = mu (unset: the oracle's class value)
///   AccVariantI  : mu~ = ||grad f(y+)||^2 / (2 (f(y+) - f*))
///   AccVariantII : running minimum of the AccVariantI estimates.
enum class MomentumVariant { ConstMom, AccVariantI, AccVariantII };

struct MomentumRule {
  MomentumVariant variant = MomentumVariant::AccVariantII;
  std::optional<double> mu;  // ConstMom only; unset means the class mu

  static MomentumRule const_mom(std::optional<double> mu = {}) {
    return {MomentumVariant::ConstMom, mu};
  }
  static MomentumRule acc_variant_i() { return {MomentumVariant::AccVariantI, {}}; }
  static MomentumRule acc_variant_ii() { return {MomentumVariant::AccVariantII, {}}; }
};

/// Iteration state. `y` is present only for momentum methods; `mu_tilde_prev`
/// carries AccVariantII's running minimum (unset plays the role of the +inf
/// initialization at k = -1).
struct IterateState {
  Eigen::VectorXd x;
  std::optional<Eigen::VectorXd> y;
  int k = 0;
  std::optional<double> mu_tilde_prev;

  static IterateState start_gd(Eigen::VectorXd x0) { return {std::move(x0), {}, 0, {}}; }
  static IterateState start_agm(Eigen::VectorXd x0) {
    IterateState s{x0, std::move(x0), 0, {}};
    return s;
  }
};

struct GdStep {
  Eigen::VectorXd x_next;
  double gamma = 0.0;
};

struct AgmStep {
  IterateState next;
  double mu_tilde = 0.0;
  double beta = 0.0;
  double raw_ratio = 0.0;  // unclamped estimate (== mu_tilde for ConstMom)
  bool clamped = false;
};

/// One iteration of the adaptive gradient method. Returns nullopt when the
/// denominator guards fire, i.e. the iterate is optimal to working precision
/// (f - f* <= 1e-14 max(1,|f*|) or ||grad||^2 <= 1e-28 max(1,L^2)).
/// Throws MissingFStar when a Polyak rule is used without an optimal value.
std::optional<GdStep> polyak_gd_step(const SmoothOracle& oracle, const Eigen::VectorXd& x,
                                     const StepRule& rule);

/// Algorithm-2 update with an explicit momentum factor:
///   y+ = x - grad f(x)/L,  x+ = y+ + beta (y+ - y).
IterateState agm_update(const SmoothOracle& oracle, const IterateState& state, double beta);

/// One iteration of the accelerated method with the given momentum rule.
/// nullopt signals optimality at the fresh iterate (same guards as above).
/// Adaptive estimates are clamped to [1e-16 L, L] (flagged in `clamped`).
std::optional<AgmStep> agm_step(const SmoothOracle& oracle, const IterateState& state,
                                const MomentumRule& rule);

/// Proximal counterpart: y+ = prox_{h/L}(x - grad f(x)/L), and the adaptive
/// estimate uses D(y+, L) / (2 (F(y+) - F*)) where
///   D(x, L) = -2L min_y [ <grad f(x), y-x> + L/2 ||x-y||^2 + h(y) - h(x) ],
/// evaluated in closed form through the prox point of x.
std::optional<AgmStep> prox_agm_step(const CompositeOracle& oracle, const IterateState& state,
                                     const MomentumRule& rule);

/// D(x, L) above; nonnegative, zero exactly at minimizers of F.
double prox_curvature_gap(const CompositeOracle& oracle, const Eigen::VectorXd& x);

/// A method the runner can drive: the paper's two algorithm templates plus
/// the Nesterov t-sequence baseline. On composite oracles Gd must use
/// FixedStep (proximal gradient); Agm/AgmSmooth use the proximal template.
struct MethodSpec {
  enum class Family { Gd, Agm, AgmSmooth };
  Family family = Family::Gd;
  StepRule step;
  MomentumRule momentum;
  std::string label;

  static MethodSpec gd(StepRule rule, std::string label = {});
  static MethodSpec agm(MomentumRule rule, std::string label = {});
  static MethodSpec agm_smooth(std::string label = {});
};

struct StopRule {
  int max_iter = 1000;
  double gap_tol = 0.0;
  double grad_tol = 0.0;
};

enum class StopReason { Converged, Budget, GradientVanished, NumericalAbort };

const char* to_string(StopReason reason);

/// One per-iteration record. Row k describes iterate k; step_or_mu / beta /
/// raw_ratio describe the transition taken from row k (unset on the final
/// row). For momentum methods the displayed iterate is y_k, grad_sq is the
/// squared (prox-)gradient norm there, and `potential` holds
/// L/2 ||x_k - y_k||^2 + f(y_k) - f*.
struct TraceRow {
  int k = 0;
  double f_gap = 0.0;
  double grad_sq = 0.0;
  std::optional<double> step_or_mu;
  std::optional<double> beta;
  std::optional<double> raw_ratio;
  std::optional<double> potential;
  double best_gap = 0.0;
  bool clamp_warning = false;
};

struct RunTrace {
  std::string method;
  std::vector<TraceRow> rows;
  StopReason reason = StopReason::Budget;
  // Iterates aligned with rows, recorded on request (ys empty for GD).
  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> ys;
};

struct RunOptions {
  StopRule stop;
  bool record_iterates = false;
};

/// Drives a method until a stopping condition and records the full trace.
RunTrace run(const SmoothOracle& oracle, const MethodSpec& method, const Eigen::VectorXd& x0,
             const RunOptions& opts);
RunTrace run(const CompositeOracle& oracle, const MethodSpec& method, const Eigen::VectorXd& x0,
             const RunOptions& opts);

}  // namespace polyak
