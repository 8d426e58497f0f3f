#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include <polyak/regularity.hpp>

namespace polyak {

/// The appendix proofs, each a weighted sum of interpolation inequalities
/// that reformulates exactly into a contraction plus nonnegative residual
/// terms. Tags name the appendix carrying the multipliers:
///   AppA  : distance contraction of the doubled Polyak step
///   AppB  : primal-gap contraction of the descent variant
///   AppC1 : momentum robustness for any beta in [0, 1]
///   AppC2 : adaptive potential decrease (convex case)
///   AppC3 : accelerated contraction for beta in the admissible bracket
enum class IdentityTag { AppA, AppB, AppC1, AppC2, AppC3 };

const char* to_string(IdentityTag tag);

/// Free variables of one identity check. Identities are polynomial in these,
/// so random sampling falsifies a non-identity almost surely.
struct AtomSample {
  Eigen::VectorXd x_k, y_k, x_star;
  Eigen::VectorXd g_xk, g_yk, g_yk1, g_xk1;
  double f_xk = 0.0, f_yk = 0.0, f_yk1 = 0.0, f_xk1 = 0.0, f_star = 0.0;
};

/// Optional perturbation of one multiplier, used to confirm the checks are
/// not vacuous: a perturbed certificate must produce large residuals.
struct Mutation {
  int multiplier_index = -1;  // -1: no mutation
  double delta = 0.0;
};

struct CertificateReport {
  IdentityTag tag = IdentityTag::AppA;
  double max_residual = 0.0;
  double multiplier_min = 0.0;
  int samples = 0;
  bool pass = false;
};

/// Draws `samples` random atom sets in dimension `dim` and evaluates the
/// tagged identity with the paper's multipliers at the given parameters.
/// `free_param` is gamma (AppA, AppB), beta (AppC1, AppC3) or mu~ (AppC2).
/// Reports the max relative residual |LHS-RHS| / max(1,|LHS|,|RHS|), the
/// minimum over all required-nonnegative multipliers and coefficients, and
/// passes iff residual <= 1e-10 and multiplier_min >= -1e-12. Samples within
/// 10x of the tolerance are re-evaluated in extended precision.
CertificateReport check_identity(IdentityTag tag, const RegularityClass& cls,
                                 double free_param, int samples, int dim,
                                 std::uint64_t seed = 12345,
                                 const Mutation& mutation = {});

/// The paper's multipliers for one identity (the order mutations index).
std::vector<double> identity_multipliers(IdentityTag tag, const RegularityClass& cls,
                                         double free_param);

/// All values the proof requires nonnegative at these parameters
/// (multipliers and residual-term coefficients).
std::vector<double> identity_nonneg_values(IdentityTag tag, const RegularityClass& cls,
                                           double free_param);

/// Raw residual evaluation on one explicit atom sample (mainly for property
/// tests). Returns |LHS - RHS| / max(1,|LHS|,|RHS|).
double identity_residual(IdentityTag tag, const RegularityClass& cls, double free_param,
                         const AtomSample& atoms, const Mutation& mutation = {});

struct PolynomialReport {
  double p1_min = 0.0;
  double p2_min = 0.0;
  double p4_min = 0.0;
  double p3_minus_min = 0.0;  // closed form at beta-
  double p3_plus_min = 0.0;   // closed form at beta+
  int grid = 0;
  bool pass = false;
};

/// Minima of the sign-certificate polynomials over a uniform grid of [0, 1];
/// pass iff every minimum is >= -1e-12.
PolynomialReport check_polynomials(int grid);

/// Endpoint polynomial evaluations (x = kappa^{1/4} substitution).
double poly_p1(double x);
double poly_p2(double x);
double poly_p4(double x);

struct BracketReport {
  double rho_cubed_minus_beta_sq_min = 0.0;
  double p3_min = 0.0;
  int kappa_points = 0;
  bool pass = false;
};

/// For kappa on a log grid of [kappa_min, kappa_max] verifies the bracket
/// facts behind the accelerated-regime lemma: rho^3 - beta^2 >= -1e-12 and
/// the concave quadratic p3(beta) >= -1e-12 at both bracket endpoints and at
/// 100 interior beta values per kappa.
BracketReport check_lemma3_bracket(int kappa_points, double kappa_min = 1e-8,
                                   double kappa_max = 1.0);

}  // namespace polyak
