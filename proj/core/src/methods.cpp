#include "polyak/methods.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "polyak/errors.hpp"

namespace polyak {
namespace {

bool gap_vanished(double gap, double f_star) {
  return gap <= 1e-14 * std::max(1.0, std::abs(f_star));
}

bool grad_vanished(double grad_sq, double lips) {
  return grad_sq <= 1e-28 * std::max(1.0, lips * lips);
}

double momentum_factor(double lips, double mu_tilde) {
  const double rl = std::sqrt(lips), rm = std::sqrt(mu_tilde);
  return (rl - rm) / (rl + rm);
}

struct ClampedEstimate {
  double value;
  bool clamped;
};

ClampedEstimate clamp_estimate(double raw, double lips) {
  const double lo = 1e-16 * lips;
  if (raw < lo) return {lo, true};
  if (raw > lips) return {lips, true};
  return {raw, false};
}

}  // namespace

std::optional<GdStep> polyak_gd_step(const SmoothOracle& oracle, const Eigen::VectorXd& x,
                                     const StepRule& rule) {
  const double lips = oracle.regularity().L;
  const Eigen::VectorXd g = oracle.gradient(x);
  const double grad_sq = g.squaredNorm();

  if (rule.variant == StepVariant::FixedStep) {
    const double gamma = rule.gamma.value_or(1.0 / lips);
    return GdStep{x - gamma * g, gamma};
  }

  const double f_star = oracle.f_star_value();
  const double gap = oracle.value(x) - f_star;
  if (gap_vanished(gap, f_star) || grad_vanished(grad_sq, lips)) return std::nullopt;

  double gamma = 0.0;
  switch (rule.variant) {
    case StepVariant::RegularPolyak:
      gamma = gap / grad_sq;
      break;
    case StepVariant::VariantI:
      gamma = 2.0 * gap / grad_sq;
      break;
    case StepVariant::VariantII:
      gamma = (2.0 - grad_sq / (2.0 * lips * gap)) / lips;
      break;
    case StepVariant::FixedStep:
      break;  // handled above
  }
  return GdStep{x - gamma * g, gamma};
}

IterateState agm_update(const SmoothOracle& oracle, const IterateState& state, double beta) {
  if (!state.y) throw DomainError("agm_update: state has no auxiliary sequence");
  const double lips = oracle.regularity().L;
  Eigen::VectorXd y_next = state.x - oracle.gradient(state.x) / lips;
  IterateState next;
  next.x = y_next + beta * (y_next - *state.y);
  next.y = std::move(y_next);
  next.k = state.k + 1;
  next.mu_tilde_prev = state.mu_tilde_prev;
  return next;
}

namespace {

/// Shared tail of the adaptive momentum step once the fresh iterate y+ and
/// the raw strong-convexity estimate there are known.
std::optional<AgmStep> finish_adaptive_step(const IterateState& state, Eigen::VectorXd y_next,
                                            double raw_ratio, double lips,
                                            const MomentumRule& rule) {
  double candidate = raw_ratio;
  if (rule.variant == MomentumVariant::AccVariantII && state.mu_tilde_prev)
    candidate = std::min(*state.mu_tilde_prev, candidate);
  const ClampedEstimate est = clamp_estimate(candidate, lips);
  const double beta = momentum_factor(lips, est.value);

  AgmStep out;
  out.next.x = y_next + beta * (y_next - *state.y);
  out.next.y = std::move(y_next);
  out.next.k = state.k + 1;
  out.next.mu_tilde_prev =
      rule.variant == MomentumVariant::AccVariantII ? std::optional<double>(est.value)
                                                    : std::nullopt;
  out.mu_tilde = est.value;
  out.beta = beta;
  out.raw_ratio = raw_ratio;
  out.clamped = est.clamped;
  return out;
}

}  // namespace

std::optional<AgmStep> agm_step(const SmoothOracle& oracle, const IterateState& state,
                                const MomentumRule& rule) {
  if (!state.y) throw DomainError("agm_step: state has no auxiliary sequence");
  const double lips = oracle.regularity().L;

  if (rule.variant == MomentumVariant::ConstMom) {
    const double mu = rule.mu.value_or(oracle.regularity().mu);
    AgmStep out;
    out.next = agm_update(oracle, state, momentum_factor(lips, mu));
    out.mu_tilde = mu;
    out.beta = momentum_factor(lips, mu);
    out.raw_ratio = mu;
    return out;
  }

  const double f_star = oracle.f_star_value();
  Eigen::VectorXd y_next = state.x - oracle.gradient(state.x) / lips;
  const double gap = oracle.value(y_next) - f_star;
  const double grad_sq = oracle.gradient(y_next).squaredNorm();
  if (gap_vanished(gap, f_star) || grad_vanished(grad_sq, lips)) return std::nullopt;
  return finish_adaptive_step(state, std::move(y_next), grad_sq / (2.0 * gap), lips, rule);
}

double prox_curvature_gap(const CompositeOracle& oracle, const Eigen::VectorXd& x) {
  const double lips = oracle.smooth().regularity().L;
  const Eigen::VectorXd g = oracle.smooth().gradient(x);
  const Eigen::VectorXd y = oracle.prox(x - g / lips, 1.0 / lips);
  const double inner = g.dot(y - x) + 0.5 * lips * (x - y).squaredNorm() +
                       oracle.nonsmooth_value(y) - oracle.nonsmooth_value(x);
  return -2.0 * lips * inner;
}

std::optional<AgmStep> prox_agm_step(const CompositeOracle& oracle, const IterateState& state,
                                     const MomentumRule& rule) {
  if (!state.y) throw DomainError("prox_agm_step: state has no auxiliary sequence");
  const SmoothOracle& f = oracle.smooth();
  const double lips = f.regularity().L;

  const auto prox_step = [&](const Eigen::VectorXd& x) {
    return oracle.prox(x - f.gradient(x) / lips, 1.0 / lips);
  };

  if (rule.variant == MomentumVariant::ConstMom) {
    const double mu = rule.mu.value_or(f.regularity().mu);
    const double beta = momentum_factor(lips, mu);
    Eigen::VectorXd y_next = prox_step(state.x);
    AgmStep out;
    out.next.x = y_next + beta * (y_next - *state.y);
    out.next.y = std::move(y_next);
    out.next.k = state.k + 1;
    out.mu_tilde = mu;
    out.beta = beta;
    out.raw_ratio = mu;
    return out;
  }

  const double F_star = oracle.F_star_value();
  Eigen::VectorXd y_next = prox_step(state.x);
  const double gap = oracle.total_value(y_next) - F_star;
  const double curvature = prox_curvature_gap(oracle, y_next);
  if (gap_vanished(gap, F_star) || grad_vanished(curvature, lips)) return std::nullopt;
  return finish_adaptive_step(state, std::move(y_next), curvature / (2.0 * gap), lips, rule);
}

MethodSpec MethodSpec::gd(StepRule rule, std::string label) {
  MethodSpec m;
  m.family = Family::Gd;
  m.step = rule;
  if (label.empty()) {
    switch (rule.variant) {
      case StepVariant::RegularPolyak: label = "polyak"; break;
      case StepVariant::VariantI: label = "variant-i"; break;
      case StepVariant::VariantII: label = "variant-ii"; break;
      case StepVariant::FixedStep: label = "gd"; break;
    }
  }
  m.label = std::move(label);
  return m;
}

MethodSpec MethodSpec::agm(MomentumRule rule, std::string label) {
  MethodSpec m;
  m.family = Family::Agm;
  m.momentum = rule;
  if (label.empty()) {
    switch (rule.variant) {
      case MomentumVariant::ConstMom: label = "agm-const"; break;
      case MomentumVariant::AccVariantI: label = "acc-variant-i"; break;
      case MomentumVariant::AccVariantII: label = "acc-variant-ii"; break;
    }
  }
  m.label = std::move(label);
  return m;
}

MethodSpec MethodSpec::agm_smooth(std::string label) {
  MethodSpec m;
  m.family = Family::AgmSmooth;
  m.label = label.empty() ? "agm-smooth" : std::move(label);
  return m;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::Budget: return "budget";
    case StopReason::GradientVanished: return "gradient-vanished";
    case StopReason::NumericalAbort: return "numerical-abort";
  }
  return "unknown";
}

namespace {

/// Nesterov's t-sequence: t0 = 1, t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2,
/// beta_k = (t_k - 1) / t_{k+1}.
class NesterovSchedule {
 public:
  double next_beta() {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_ * t_));
    const double beta = (t_ - 1.0) / t_next;
    t_ = t_next;
    return beta;
  }

 private:
  double t_ = 1.0;
};

/// Problem adapter so one driver serves smooth and composite objectives.
struct SmoothProblem {
  const SmoothOracle& oracle;
  double f_star() const { return oracle.f_star_value(); }
  double lips() const { return oracle.regularity().L; }
  double value(const Eigen::VectorXd& z) const { return oracle.value(z); }
  double residual_sq(const Eigen::VectorXd& z) const { return oracle.gradient(z).squaredNorm(); }
  Eigen::VectorXd fixed_gd(const Eigen::VectorXd& x, double gamma) const {
    return x - gamma * oracle.gradient(x);
  }
  IterateState momentum_update(const IterateState& s, double beta) const {
    return agm_update(oracle, s, beta);
  }
  std::optional<GdStep> adaptive_gd(const Eigen::VectorXd& x, const StepRule& rule) const {
    return polyak_gd_step(oracle, x, rule);
  }
  std::optional<AgmStep> adaptive_agm(const IterateState& s, const MomentumRule& rule) const {
    return agm_step(oracle, s, rule);
  }
};

struct CompositeProblem {
  const CompositeOracle& oracle;
  double f_star() const { return oracle.F_star_value(); }
  double lips() const { return oracle.smooth().regularity().L; }
  double value(const Eigen::VectorXd& z) const { return oracle.total_value(z); }
  double residual_sq(const Eigen::VectorXd& z) const {
    const double L = lips();
    const Eigen::VectorXd p = oracle.prox(z - oracle.smooth().gradient(z) / L, 1.0 / L);
    return (L * (z - p)).squaredNorm();
  }
  Eigen::VectorXd fixed_gd(const Eigen::VectorXd& x, double gamma) const {
    return oracle.prox(x - gamma * oracle.smooth().gradient(x), gamma);
  }
  IterateState momentum_update(const IterateState& s, double beta) const {
    const double L = lips();
    Eigen::VectorXd y_next = oracle.prox(s.x - oracle.smooth().gradient(s.x) / L, 1.0 / L);
    IterateState next;
    next.x = y_next + beta * (y_next - *s.y);
    next.y = std::move(y_next);
    next.k = s.k + 1;
    next.mu_tilde_prev = s.mu_tilde_prev;
    return next;
  }
  std::optional<GdStep> adaptive_gd(const Eigen::VectorXd&, const StepRule&) const {
    throw ConfigError("Polyak step rules have no proximal form; use a momentum method");
  }
  std::optional<AgmStep> adaptive_agm(const IterateState& s, const MomentumRule& rule) const {
    return prox_agm_step(oracle, s, rule);
  }
};

template <typename Problem>
RunTrace drive(const Problem& problem, const MethodSpec& method, const Eigen::VectorXd& x0,
               const RunOptions& opts) {
  const bool momentum = method.family != MethodSpec::Family::Gd;
  RunTrace trace;
  trace.method = method.label;
  const double f_star = problem.f_star();
  const double lips = problem.lips();

  IterateState state =
      momentum ? IterateState::start_agm(x0) : IterateState::start_gd(x0);
  NesterovSchedule schedule;
  double best = std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    const Eigen::VectorXd& shown = momentum ? *state.y : state.x;
    const double gap = problem.value(shown) - f_star;
    const double res_sq = problem.residual_sq(shown);
    best = std::min(best, gap);

    TraceRow row;
    row.k = k;
    row.f_gap = gap;
    row.grad_sq = res_sq;
    row.best_gap = best;
    if (momentum)
      row.potential = 0.5 * lips * (state.x - *state.y).squaredNorm() + gap;
    trace.rows.push_back(row);
    if (opts.record_iterates) {
      trace.xs.push_back(state.x);
      if (momentum) trace.ys.push_back(*state.y);
    }

    if (!std::isfinite(gap) || !std::isfinite(res_sq)) {
      trace.reason = StopReason::NumericalAbort;
      break;
    }
    if (opts.stop.gap_tol > 0.0 && gap <= opts.stop.gap_tol) {
      trace.reason = StopReason::Converged;
      break;
    }
    if (opts.stop.grad_tol > 0.0 && res_sq <= opts.stop.grad_tol) {
      trace.reason = StopReason::Converged;
      break;
    }
    if (k >= opts.stop.max_iter) {
      trace.reason = StopReason::Budget;
      break;
    }

    TraceRow& cur = trace.rows.back();
    if (!momentum) {
      if (method.step.variant == StepVariant::FixedStep) {
        const double gamma = method.step.gamma.value_or(1.0 / lips);
        state.x = problem.fixed_gd(state.x, gamma);
        cur.step_or_mu = gamma;
      } else {
        const auto step = problem.adaptive_gd(state.x, method.step);
        if (!step) {
          trace.reason = StopReason::GradientVanished;
          break;
        }
        cur.step_or_mu = step->gamma;
        state.x = step->x_next;
      }
      state.k = k + 1;
    } else if (method.family == MethodSpec::Family::AgmSmooth) {
      const double beta = schedule.next_beta();
      cur.beta = beta;
      state = problem.momentum_update(state, beta);
    } else {
      const auto step = problem.adaptive_agm(state, method.momentum);
      if (!step) {
        trace.reason = StopReason::GradientVanished;
        break;
      }
      cur.step_or_mu = step->mu_tilde;
      cur.beta = step->beta;
      if (method.momentum.variant != MomentumVariant::ConstMom) {
        cur.raw_ratio = step->raw_ratio;
        cur.clamp_warning = step->clamped;
      }
      state = step->next;
    }
  }
  return trace;
}

}  // namespace

RunTrace run(const SmoothOracle& oracle, const MethodSpec& method, const Eigen::VectorXd& x0,
             const RunOptions& opts) {
  return drive(SmoothProblem{oracle}, method, x0, opts);
}

RunTrace run(const CompositeOracle& oracle, const MethodSpec& method, const Eigen::VectorXd& x0,
             const RunOptions& opts) {
  if (method.family == MethodSpec::Family::Gd &&
      method.step.variant != StepVariant::FixedStep) {
    throw ConfigError("Polyak step rules have no proximal form; use a momentum method");
  }
  return drive(CompositeProblem{oracle}, method, x0, opts);
}

}  // namespace polyak
