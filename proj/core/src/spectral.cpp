#include "polyak/spectral.hpp"

#include <cmath>
#include <random>

#include "polyak/errors.hpp"

namespace polyak {
namespace {

Eigen::VectorXd random_unit(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  const double norm = v.norm();
  return norm > 0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

/// Power iteration on an abstract symmetric PSD operator.
template <typename Apply>
double power_iterate(Eigen::Index n, const Apply& apply,
                     const PowerIterationOptions& opts) {
  if (n == 0) throw DomainError("power iteration: empty matrix");
  Eigen::VectorXd v = random_unit(n, opts.seed);
  double lambda = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::VectorXd w = apply(v);
    const double rayleigh = v.dot(w);
    const double wnorm = w.norm();
    if (wnorm == 0.0) return 0.0;  // v in the kernel: operator is PSD-singular
    v = w / wnorm;
    if (it > 0 && std::abs(rayleigh - lambda) <= opts.tol * std::max(1.0, std::abs(rayleigh))) {
      return rayleigh;
    }
    lambda = rayleigh;
  }
  return lambda;
}

}  // namespace

double top_eigenvalue(const Eigen::MatrixXd& sym, const PowerIterationOptions& opts) {
  return power_iterate(sym.rows(), [&](const Eigen::VectorXd& v) { return sym * v; }, opts);
}

double bottom_eigenvalue(const Eigen::MatrixXd& sym, const PowerIterationOptions& opts) {
  const double top = top_eigenvalue(sym, opts);
  if (top <= 0.0) return 0.0;
  const double reflected = power_iterate(
      sym.rows(), [&](const Eigen::VectorXd& v) { return top * v - sym * v; }, opts);
  return std::max(0.0, top - reflected);
}

double operator_norm_sq(const Eigen::MatrixXd& a, const PowerIterationOptions& opts) {
  return power_iterate(
      a.cols(), [&](const Eigen::VectorXd& v) { return a.transpose() * (a * v); }, opts);
}

}  // namespace polyak
