#include "polyak/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "polyak/errors.hpp"
#include "polyak/spectral.hpp"

namespace polyak {

SmoothOracle::SmoothOracle(int dim, ValueFn value, GradFn gradient, RegularityClass cls)
    : dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)), cls_(cls) {
  if (dim <= 0) throw DomainError("SmoothOracle: dimension must be positive");
  if (!value_ || !gradient_) throw DomainError("SmoothOracle: missing value or gradient");
}

double SmoothOracle::f_star_value() const {
  if (!f_star_) throw MissingFStar("oracle has no optimal value set");
  return f_star_->value;
}

CompositeOracle::CompositeOracle(SmoothOracle smooth, SmoothOracle::ValueFn nonsmooth_value,
                                 ProxFn prox)
    : smooth_(std::move(smooth)), nonsmooth_(std::move(nonsmooth_value)), prox_(std::move(prox)) {
  if (!nonsmooth_ || !prox_) throw DomainError("CompositeOracle: missing h or prox");
}

double CompositeOracle::F_star_value() const {
  if (!F_star_) throw MissingFStar("composite oracle has no optimal value set");
  return F_star_->value;
}

SmoothOracle make_quadratic(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& target,
                            std::optional<double> mu_override) {
  if (matrix.rows() != matrix.cols()) throw DomainError("make_quadratic: matrix not square");
  if (matrix.rows() != target.size())
    throw DomainError("make_quadratic: matrix/target dimension mismatch");
  const double scale = matrix.cwiseAbs().maxCoeff();
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    throw DomainError("make_quadratic: matrix not symmetric");

  const double top = top_eigenvalue(matrix);
  if (!(top > 0.0)) throw DomainError("make_quadratic: zero matrix has no valid class");
  const double bottom = mu_override ? *mu_override : bottom_eigenvalue(matrix);

  Eigen::MatrixXd a = matrix;
  Eigen::VectorXd c = target;
  SmoothOracle oracle(
      static_cast<int>(target.size()),
      [a, c](const Eigen::VectorXd& x) { return 0.5 * (x - c).dot(a * (x - c)); },
      [a, c](const Eigen::VectorXd& x) { return Eigen::VectorXd(a * (x - c)); },
      RegularityClass::from_spectrum(bottom, top));
  oracle.set_f_star({0.0, true});
  oracle.set_x_star(c);
  return oracle;
}

SmoothOracle make_least_squares(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets) {
  if (features.rows() != targets.size())
    throw DataError("make_least_squares: row count does not match target length");
  if (features.size() == 0) throw DataError("make_least_squares: empty data");

  const double top = operator_norm_sq(features);
  if (!(top > 0.0)) throw DomainError("make_least_squares: zero feature matrix");
  const Eigen::MatrixXd gram = features.transpose() * features;
  const double bottom = bottom_eigenvalue(gram);

  const Eigen::VectorXd xhat = features.colPivHouseholderQr().solve(targets);
  Eigen::MatrixXd a = features;
  Eigen::VectorXd b = targets;
  SmoothOracle oracle(
      static_cast<int>(features.cols()),
      [a, b](const Eigen::VectorXd& x) { return 0.5 * (a * x - b).squaredNorm(); },
      [a, b](const Eigen::VectorXd& x) { return Eigen::VectorXd(a.transpose() * (a * x - b)); },
      RegularityClass::from_spectrum(bottom, top));
  oracle.set_f_star({0.5 * (features * xhat - targets).squaredNorm(), true});
  oracle.set_x_star(xhat);
  return oracle;
}

namespace {

/// log(1 + exp(-t)) without overflow.
double logistic_loss(double t) {
  return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

}  // namespace

SmoothOracle make_logistic(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                           double reg) {
  const Eigen::Index m = features.rows();
  if (m == 0 || features.cols() == 0) throw DataError("make_logistic: empty data");
  if (labels.size() != m) throw DataError("make_logistic: label count mismatch");
  if (reg < 0.0) throw DomainError("make_logistic: negative regularization");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw DataError("make_logistic: labels must be in {-1,+1}");
  }

  const double lips = operator_norm_sq(features) / (4.0 * static_cast<double>(m)) + reg;
  Eigen::MatrixXd a = features;
  Eigen::VectorXd y = labels;
  const double inv_m = 1.0 / static_cast<double>(m);
  return SmoothOracle(
      static_cast<int>(features.cols()),
      [a, y, reg, inv_m](const Eigen::VectorXd& x) {
        const Eigen::VectorXd t = y.cwiseProduct(a * x);
        double loss = 0.0;
        for (Eigen::Index i = 0; i < t.size(); ++i) loss += logistic_loss(t[i]);
        return inv_m * loss + 0.5 * reg * x.squaredNorm();
      },
      [a, y, reg, inv_m](const Eigen::VectorXd& x) {
        const Eigen::VectorXd t = y.cwiseProduct(a * x);
        Eigen::VectorXd w(t.size());
        for (Eigen::Index i = 0; i < t.size(); ++i) w[i] = -y[i] / (1.0 + std::exp(t[i]));
        return Eigen::VectorXd(inv_m * (a.transpose() * w) + reg * x);
      },
      RegularityClass::from_spectrum(reg, lips));
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double threshold) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    out[i] = v > threshold ? v - threshold : (v < -threshold ? v + threshold : 0.0);
  }
  return out;
}

CompositeOracle make_lasso(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                           double l1_weight) {
  if (features.rows() != labels.size())
    throw DataError("make_lasso: feature/label dimension mismatch");
  if (!(l1_weight > 0.0)) throw DomainError("make_lasso: l1 weight must be positive");

  const double top = operator_norm_sq(features);
  if (!(top > 0.0)) throw DomainError("make_lasso: zero feature matrix");
  const Eigen::MatrixXd gram = features.transpose() * features;
  double bottom = bottom_eigenvalue(gram);
  if (bottom < 1e-12 * top) bottom = 0.0;  // rank-deficient: merely convex

  Eigen::MatrixXd a = features;
  Eigen::VectorXd b = labels;
  SmoothOracle smooth(
      static_cast<int>(features.cols()),
      [a, b](const Eigen::VectorXd& x) { return 0.5 * (a * x - b).squaredNorm(); },
      [a, b](const Eigen::VectorXd& x) { return Eigen::VectorXd(a.transpose() * (a * x - b)); },
      RegularityClass::from_spectrum(bottom, top));

  return CompositeOracle(
      std::move(smooth),
      [l1_weight](const Eigen::VectorXd& x) { return l1_weight * x.lpNorm<1>(); },
      [l1_weight](const Eigen::VectorXd& x, double t) {
        return soft_threshold(x, t * l1_weight);
      });
}

namespace {

/// Lean constant-momentum accelerated loop shared by both presolvers.
/// `gradient_step` maps x to the next y (plain or proximal gradient step);
/// `stop_sq` returns the squared residual used against `tolerance`;
/// `objective` is the function being minimized (f or F).
template <typename GradStep, typename StopSq, typename Objective>
FStar presolve_loop(const Eigen::VectorXd& x0, double mu, double lips, long budget,
                    double tolerance, const GradStep& gradient_step, const StopSq& stop_sq,
                    const Objective& objective) {
  const double beta =
      (std::sqrt(lips) - std::sqrt(mu)) / (std::sqrt(lips) + std::sqrt(mu));
  Eigen::VectorXd x = x0, y = x0;
  double best = objective(x0);
  for (long k = 0; k < budget; ++k) {
    Eigen::VectorXd y_next = gradient_step(x);
    x = y_next + beta * (y_next - y);
    y = std::move(y_next);
    const double fy = objective(y);
    if (fy < best) best = fy;
    if (stop_sq(y) < tolerance) return {best, true};
  }
  return {best, false};
}

}  // namespace

FStar estimate_f_star(const SmoothOracle& oracle, long budget, double tolerance,
                      std::optional<Eigen::VectorXd> x0) {
  if (oracle.x_star()) return {oracle.value(*oracle.x_star()), true};
  const Eigen::VectorXd start = x0 ? *x0 : Eigen::VectorXd::Zero(oracle.dim());
  const double lips = oracle.regularity().L;
  return presolve_loop(
      start, oracle.regularity().mu, lips, budget, tolerance,
      [&](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(x - oracle.gradient(x) / lips);
      },
      [&](const Eigen::VectorXd& y) { return oracle.gradient(y).squaredNorm(); },
      [&](const Eigen::VectorXd& x) { return oracle.value(x); });
}

FStar estimate_f_star(const CompositeOracle& oracle, long budget, double tolerance,
                      std::optional<Eigen::VectorXd> x0) {
  if (oracle.x_star()) return {oracle.total_value(*oracle.x_star()), true};
  const Eigen::VectorXd start = x0 ? *x0 : Eigen::VectorXd::Zero(oracle.smooth().dim());
  const double lips = oracle.smooth().regularity().L;
  const auto prox_step = [&](const Eigen::VectorXd& x) {
    return oracle.prox(x - oracle.smooth().gradient(x) / lips, 1.0 / lips);
  };
  return presolve_loop(
      start, oracle.smooth().regularity().mu, lips, budget, tolerance, prox_step,
      [&](const Eigen::VectorXd& y) {
        return (lips * (y - prox_step(y))).squaredNorm();
      },
      [&](const Eigen::VectorXd& x) { return oracle.total_value(x); });
}

}  // namespace polyak
