#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <polyak/data.hpp>
#include <polyak/methods.hpp>
#include <polyak/pep.hpp>

namespace polyak {

/// Experiment description, read from a flat key=value text file.
/// Recognized keys (see README for the full list): problem, dataset,
/// label_column, has_header, synthetic, kappa, standardize, target_L, reg,
/// l1_weight, methods, seed, max_iter, gap_tol, grad_tol, fstar,
/// presolve_budget, presolve_tol, allow_untrusted_fstar, out_dir.
struct ExperimentConfig {
  enum class Problem { Quadratic, Logistic, Lasso };
  enum class FStarPolicy { Exact, Presolve, Literal };

  Problem problem = Problem::Quadratic;
  std::string dataset_path;  // empty: synthetic least squares
  int label_column = -1;
  bool has_header = false;
  int synthetic_rows = 0;
  int synthetic_cols = 0;
  double kappa = 1e-2;  // synthetic spectrum: eigenvalues of A^T A in [kappa, 1]
  bool standardize_data = false;
  std::optional<double> target_L;
  double reg = 1e-3;
  double l1_weight = 1.0;
  std::vector<std::string> methods;
  std::uint64_t seed = 42;
  StopRule stop{10000, 1e-9, 0.0};
  FStarPolicy f_star_policy = FStarPolicy::Exact;
  double f_star_literal = 0.0;
  long presolve_budget = 1000000;
  double presolve_tol = 1e-24;  // on the squared residual norm
  bool allow_untrusted_f_star = false;
  std::string out_dir = ".";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

/// Resolves a registered method name (gd, polyak, variant-i, variant-ii,
/// agm-const, acc-variant-i, acc-variant-ii, agm-smooth). Throws ConfigError
/// on unknown names.
MethodSpec method_from_name(const std::string& name);

struct ExperimentSummary {
  struct Row {
    std::string method;
    int iters_to_tol = -1;  // -1: tolerance not reached
    double final_gap = 0.0;
    double best_gap = 0.0;
    StopReason reason = StopReason::Budget;
    std::string csv_path;
    bool f_star_trusted = true;
  };
  std::vector<Row> rows;
  double f_star = 0.0;
  bool f_star_trusted = true;
};

/// Runs every configured method on the configured problem and writes one
/// trace CSV per method plus summary.csv into out_dir. Deterministic for a
/// fixed config (seeded generator, fixed formatting).
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Trace CSV schema: header iter,f_gap,best_gap,grad_sq,step_or_mu,beta;
/// one row per iteration, %.17g formatting, unset cells written as nan.
void write_trace_csv(const RunTrace& trace, const std::string& path);
std::vector<TraceRow> load_trace_csv(const std::string& path);

/// PEP rate curve with the analytic reference column. Schema:
/// gamma,rho,rho_analytic where rho_analytic is the closed-form rate for the
/// doubled step and the worst-case level (L^2 - L mu + mu^2)/(L+mu)^2 for
/// the regular step.
void emit_rate_curves(const RegularityClass& cls, PepRule rule, int grid,
                      const std::string& path);

struct Histogram {
  std::vector<double> centers;
  std::vector<double> proportions;  // sums to 1
};

/// Normalized histogram of the step_or_mu column over `range` (defaults to
/// the observed min/max); out-of-range values are clipped into the end bins.
/// Throws DataError when the trace holds no step values.
Histogram step_histogram(const std::vector<TraceRow>& rows, int bins,
                         std::optional<std::pair<double, double>> range = {});

/// Histogram CSV schema: bin_center,proportion.
void write_histogram_csv(const Histogram& histogram, const std::string& path);

/// Synthetic least-squares instance with eigenvalues of A^T A spread over
/// [kappa, 1] (both attained): A = U diag(sqrt(eig)) V^T with seeded
/// orthonormal factors, plus a seeded Gaussian target vector.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> synthetic_least_squares(int rows, int cols,
                                                                    double kappa,
                                                                    std::uint64_t seed);

/// Standard-normal vector from a seeded generator (experiment starts).
Eigen::VectorXd gaussian_vector(int dim, std::uint64_t seed);

}  // namespace polyak
