#pragma once

#include <Eigen/Core>

namespace polyak {

/// Options for the power-iteration routines. The defaults (1e-10 Rayleigh
/// tolerance, 10000 iteration cap) are adequate for desk-scale problems.
struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  unsigned seed = 0x9e3779b9u;  // fixed so results are reproducible
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double top_eigenvalue(const Eigen::MatrixXd& sym,
                      const PowerIterationOptions& opts = {});

/// Smallest eigenvalue of a symmetric PSD matrix, obtained by power
/// iteration on top*I - A (spectrum reflection). Clamped at zero.
double bottom_eigenvalue(const Eigen::MatrixXd& sym,
                         const PowerIterationOptions& opts = {});

/// Squared operator (spectral) norm of a rectangular matrix, i.e. the top
/// eigenvalue of A^T A, computed without forming A^T A.
double operator_norm_sq(const Eigen::MatrixXd& a,
                        const PowerIterationOptions& opts = {});

}  // namespace polyak
