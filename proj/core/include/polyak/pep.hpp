#pragma once

#include <utility>
#include <vector>

#include <polyak/certificates.hpp>
#include <polyak/regularity.hpp>

namespace polyak {

/// Step rules whose one-iteration worst case the reduced program covers.
enum class PepRule { VariantI, RegularPolyak };

const char* to_string(PepRule rule);

/// Kernelized variables of the one-step program after imposing X = 1:
/// X = ||x - x*||^2, G = ||g||^2, GX = g^T (x* - x), fgap = f - f*.
struct PepVars {
  double X = 1.0;
  double G = 0.0;
  double GX = 0.0;
  double fgap = 0.0;
};

struct PepActiveSet {
  bool interp_point_to_star = false;  // inequality between x_k and x*
  bool interp_star_to_point = false;  // inequality between x* and x_k
  bool gram = false;                  // G = GX^2 (rank-one Gram)
};

struct PepSolution {
  double objective = 0.0;
  PepVars vars;
  PepActiveSet active;
  double gamma = 0.0;
};

/// Admissible step-size interval of a rule, implied by the interpolation
/// inequalities: [1/L, 1/mu] for the doubled step, [1/(2L), 1/(2mu)] for the
/// regular Polyak step. Requires mu > 0.
std::pair<double, double> admissible_gamma_interval(const RegularityClass& cls, PepRule rule);

/// Exact maximizer of the reduced one-step worst-case program at a fixed
/// step size. With X = 1 and the function gap eliminated through the step
/// equality, the program maximizes a linear function of (GX, G) over two
/// linear interpolation constraints and the convex Gram constraint
/// G >= GX^2; the maximum sits at a vertex, found by enumerating the
/// closed-form intersections. Throws DomainError when gamma is outside the
/// admissible interval or no feasible candidate exists.
PepSolution solve_rho_of_gamma(const RegularityClass& cls, double gamma, PepRule rule);

struct SweepPoint {
  double gamma = 0.0;
  double rho = 0.0;
};

struct GammaSweep {
  std::vector<SweepPoint> curve;
  double gamma_max = 0.0;  // argmax over the admissible interval
  double rho_max = 0.0;
};

/// rho(gamma) on a uniform grid of the admissible interval, with the maximum
/// refined by golden section around the best grid point.
GammaSweep sweep_gamma(const RegularityClass& cls, PepRule rule, int grid_size);

struct MultiplierReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double max_residual = 0.0;
  int samples = 0;
  bool pass = false;
};

/// Checks the distance-contraction certificate at one step size: lambda1,
/// lambda2 >= 0 and the weighted-sum identity reproduces
/// ||x+ - x*||^2 - rho(gamma) ||x - x*||^2 over random atom samples.
MultiplierReport verify_certificate_multipliers(const RegularityClass& cls, double gamma,
                                                int samples = 100, int dim = 4,
                                                std::uint64_t seed = 2024);

}  // namespace polyak
