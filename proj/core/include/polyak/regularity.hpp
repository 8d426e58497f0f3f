#pragma once

#include <polyak/errors.hpp>

namespace polyak {

/// Smoothness / strong-convexity parameters of an objective: the function has
/// an L-Lipschitz gradient and is mu-strongly convex, with 0 <= mu < L.
struct RegularityClass {
  double mu = 0.0;
  double L = 1.0;

  RegularityClass() = default;

  RegularityClass(double mu_, double L_) : mu(mu_), L(L_) {
    if (!(L > 0.0)) throw DomainError("RegularityClass: L must be positive");
    if (!(mu >= 0.0) || !(mu < L))
      throw DomainError("RegularityClass: need 0 <= mu < L");
  }

  /// Inverse condition number mu/L in [0, 1).
  double kappa() const { return mu / L; }

  /// Builds a class from measured spectral bounds. Degenerate spectra
  /// (mu == L, e.g. isotropic quadratics) are nudged to mu = L*(1 - 1e-9);
  /// membership in the wider class is preserved since the classes are nested.
  static RegularityClass from_spectrum(double mu_, double L_) {
    if (!(L_ > 0.0)) throw DomainError("RegularityClass: L must be positive");
    if (mu_ < 0.0) mu_ = 0.0;
    const double cap = L_ * (1.0 - 1e-9);
    if (mu_ > cap) mu_ = cap;
    return RegularityClass(mu_, L_);
  }
};

}  // namespace polyak
