#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include <polyak/regularity.hpp>

namespace polyak {

/// Optimal objective value attached to an oracle. `trusted` is false when the
/// value came from a presolve that exhausted its budget before reaching the
/// requested tolerance; methods accept the value as ground truth either way.
struct FStar {
  double value = 0.0;
  bool trusted = true;
};

/// A differentiable objective with known regularity constants. Evaluation is
/// pure; instances are safe to share across threads once setup is finished.
class SmoothOracle {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  SmoothOracle(int dim, ValueFn value, GradFn gradient, RegularityClass cls);

  int dim() const { return dim_; }
  double value(const Eigen::VectorXd& x) const { return value_(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return gradient_(x); }
  const RegularityClass& regularity() const { return cls_; }

  const std::optional<FStar>& f_star() const { return f_star_; }
  void set_f_star(FStar fs) { f_star_ = fs; }
  /// Optimal value, throwing MissingFStar when none has been set.
  double f_star_value() const;

  const std::optional<Eigen::VectorXd>& x_star() const { return x_star_; }
  void set_x_star(Eigen::VectorXd xs) { x_star_ = std::move(xs); }

 private:
  int dim_;
  ValueFn value_;
  GradFn gradient_;
  RegularityClass cls_;
  std::optional<FStar> f_star_;
  std::optional<Eigen::VectorXd> x_star_;
};

/// Composite objective F = f + h with a proximable nonsmooth part h.
class CompositeOracle {
 public:
  using ProxFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;

  CompositeOracle(SmoothOracle smooth, SmoothOracle::ValueFn nonsmooth_value, ProxFn prox);

  const SmoothOracle& smooth() const { return smooth_; }
  SmoothOracle& smooth() { return smooth_; }
  double nonsmooth_value(const Eigen::VectorXd& x) const { return nonsmooth_(x); }
  /// argmin_y { h(y) + ||y - x||^2 / (2 t) }.
  Eigen::VectorXd prox(const Eigen::VectorXd& x, double t) const { return prox_(x, t); }
  double total_value(const Eigen::VectorXd& x) const {
    return smooth_.value(x) + nonsmooth_(x);
  }

  const std::optional<FStar>& F_star() const { return F_star_; }
  void set_F_star(FStar fs) { F_star_ = fs; }
  double F_star_value() const;

  const std::optional<Eigen::VectorXd>& x_star() const { return x_star_; }
  void set_x_star(Eigen::VectorXd xs) { x_star_ = std::move(xs); }

 private:
  SmoothOracle smooth_;
  SmoothOracle::ValueFn nonsmooth_;
  ProxFn prox_;
  std::optional<FStar> F_star_;
  std::optional<Eigen::VectorXd> x_star_;
};

/// f(x) = 1/2 (x-c)^T A (x-c) for a symmetric PSD matrix A. The class is set
/// from the extreme eigenvalues (power iteration); pass `mu_override` to pin
/// the strong convexity yourself (e.g. smallest eigenvalue on the range of a
/// singular A). Exact f* = 0 and x* = c are attached.
SmoothOracle make_quadratic(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& target,
                            std::optional<double> mu_override = {});

/// Least squares f(x) = 1/2 ||A x - b||^2 with exact optimum from a dense
/// solve; class from the extreme eigenvalues of A^T A.
SmoothOracle make_least_squares(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets);

/// Regularized logistic loss
///   f(x) = (1/m) sum_i log(1 + exp(-y_i a_i^T x)) + (reg/2) ||x||^2
/// with labels in {-1,+1}. Class: mu = reg, L = ||A||_op^2 / (4m) + reg.
/// No optimal value is attached; compute one with estimate_f_star.
SmoothOracle make_logistic(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                           double reg);

/// LASSO: smooth part 1/2 ||A x - b||^2, nonsmooth part l1_weight * ||x||_1,
/// prox = soft-thresholding. F* is left unset.
CompositeOracle make_lasso(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                           double l1_weight);

/// Componentwise soft-threshold, the prox of threshold * ||.||_1.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double threshold);

/// Upper bound on f* from running the constant-momentum accelerated method
/// until ||grad f||^2 < tolerance or the iteration budget runs out. Returns
/// the best value seen; `trusted` is false when the budget was exhausted
/// first. If the oracle already knows x*, returns f(x*) directly.
FStar estimate_f_star(const SmoothOracle& oracle, long budget, double tolerance,
                      std::optional<Eigen::VectorXd> x0 = {});

/// Composite variant; stops on the squared prox-gradient-mapping norm.
FStar estimate_f_star(const CompositeOracle& oracle, long budget, double tolerance,
                      std::optional<Eigen::VectorXd> x0 = {});

}  // namespace polyak
