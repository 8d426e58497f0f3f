// Command-line front end: reproduces the library's experiments and emits
// plot-ready CSV. Exit codes: 0 success, 2 configuration error, 3 data
// error, 4 numerical abort, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "polyak/certificates.hpp"
#include "polyak/errors.hpp"
#include "polyak/experiment.hpp"
#include "polyak/pep.hpp"
#include "polyak/rates.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

polyak::PepRule parse_rule(const std::string& name) {
  if (name == "variant-i") return polyak::PepRule::VariantI;
  if (name == "polyak") return polyak::PepRule::RegularPolyak;
  throw polyak::ConfigError("unknown rule '" + name + "' (expected variant-i or polyak)");
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            const std::optional<std::uint64_t>& seed, const std::optional<double>& tol,
            const std::optional<int>& max_iter, const std::optional<std::string>& fstar) {
  polyak::ExperimentConfig cfg = polyak::parse_config(config_path);
  if (out_dir) cfg.out_dir = *out_dir;
  if (seed) cfg.seed = *seed;
  if (tol) cfg.stop.gap_tol = *tol;
  if (max_iter) cfg.stop.max_iter = *max_iter;
  if (fstar) {
    if (*fstar == "presolve") {
      cfg.f_star_policy = polyak::ExperimentConfig::FStarPolicy::Presolve;
    } else if (*fstar == "exact") {
      cfg.f_star_policy = polyak::ExperimentConfig::FStarPolicy::Exact;
    } else {
      cfg.f_star_policy = polyak::ExperimentConfig::FStarPolicy::Literal;
      cfg.f_star_literal = std::stod(*fstar);
    }
  }

  const polyak::ExperimentSummary summary = polyak::run_experiment(cfg);
  std::printf("f* = %.17g%s\n", summary.f_star,
              summary.f_star_trusted ? "" : " (low confidence)");
  std::printf("%-16s %12s %14s %14s  %s\n", "method", "iters_to_tol", "final_gap", "best_gap",
              "reason");
  for (const auto& row : summary.rows) {
    std::printf("%-16s %12d %14.6g %14.6g  %s\n", row.method.c_str(), row.iters_to_tol,
                row.final_gap, row.best_gap, polyak::to_string(row.reason));
  }
  bool aborted = false;
  for (const auto& row : summary.rows)
    aborted = aborted || row.reason == polyak::StopReason::NumericalAbort;
  return aborted ? kExitNumerical : kExitOk;
}

int cmd_rates(double mu, double lips, const std::string& rule_name, int grid,
              const std::string& out) {
  const polyak::RegularityClass cls(mu, lips);
  polyak::emit_rate_curves(cls, parse_rule(rule_name), grid, out);
  std::printf("wrote %s (%d points)\n", out.c_str(), grid);
  return kExitOk;
}

int cmd_certify(const std::vector<std::string>& tags, int samples, int settings, int dim,
                std::uint64_t seed, const std::optional<std::string>& out_csv) {
  using polyak::IdentityTag;
  std::vector<std::string> expanded = tags;
  if (expanded.empty() || (expanded.size() == 1 && expanded[0] == "all"))
    expanded = {"appa", "appb", "appc1", "appc2", "appc3", "polys", "bracket"};

  std::FILE* csv = nullptr;
  if (out_csv) {
    csv = std::fopen(out_csv->c_str(), "w");
    if (!csv) throw polyak::DataError("cannot open '" + *out_csv + "' for writing");
    std::fprintf(csv, "tag,max_residual,multiplier_min,samples\n");
  }

  bool all_pass = true;
  for (const std::string& tag_name : expanded) {
    if (tag_name == "polys") {
      const polyak::PolynomialReport rep = polyak::check_polynomials(100000);
      const double min_all = std::min({rep.p1_min, rep.p2_min, rep.p4_min, rep.p3_minus_min,
                                       rep.p3_plus_min});
      std::printf("[%s] polys      min=%.3e over %d-point grid\n", rep.pass ? "pass" : "FAIL",
                  min_all, rep.grid);
      if (csv) std::fprintf(csv, "polys,0,%.17g,%d\n", min_all, rep.grid);
      all_pass = all_pass && rep.pass;
      continue;
    }
    if (tag_name == "bracket") {
      const polyak::BracketReport rep = polyak::check_lemma3_bracket(1000);
      const double min_all = std::min(rep.rho_cubed_minus_beta_sq_min, rep.p3_min);
      std::printf("[%s] bracket    min=%.3e over %d kappa points\n", rep.pass ? "pass" : "FAIL",
                  min_all, rep.kappa_points);
      if (csv) std::fprintf(csv, "bracket,0,%.17g,%d\n", min_all, rep.kappa_points);
      all_pass = all_pass && rep.pass;
      continue;
    }

    IdentityTag tag;
    if (tag_name == "appa") tag = IdentityTag::AppA;
    else if (tag_name == "appb") tag = IdentityTag::AppB;
    else if (tag_name == "appc1") tag = IdentityTag::AppC1;
    else if (tag_name == "appc2") tag = IdentityTag::AppC2;
    else if (tag_name == "appc3") tag = IdentityTag::AppC3;
    else throw polyak::ConfigError("unknown certificate tag '" + tag_name + "'");

    double worst_residual = 0.0;
    double worst_mult = std::numeric_limits<double>::infinity();
    bool pass = true;
    long total = 0;
    for (int s = 0; s < settings; ++s) {
      // parameter settings spread over the admissible ranges
      const double t = settings == 1 ? 0.5 : static_cast<double>(s) / (settings - 1);
      const double mu = std::pow(10.0, -3.0 + 2.5 * t);  // mu in [1e-3, ~0.3], L = 1
      const polyak::RegularityClass cls(mu, 1.0);
      double param = 0.0;
      switch (tag) {
        case IdentityTag::AppA:
          param = 1.0 + t * (1.0 / mu - 1.0) * 0.9;
          break;
        case IdentityTag::AppB:
          param = 1.0 + t * (1.0 - mu);
          break;
        case IdentityTag::AppC1:
          param = t;
          break;
        case IdentityTag::AppC2:
          param = 0.05 + 0.95 * t;
          break;
        case IdentityTag::AppC3: {
          const double q = std::pow(mu, 0.25), r = std::sqrt(mu);
          const double lo = (1.0 - q) / (1.0 + q), hi = (1.0 - r) / (1.0 + r);
          param = lo + t * (hi - lo);
          break;
        }
      }
      const polyak::CertificateReport rep =
          polyak::check_identity(tag, cls, param, samples, dim, seed + s);
      worst_residual = std::max(worst_residual, rep.max_residual);
      worst_mult = std::min(worst_mult, rep.multiplier_min);
      pass = pass && rep.pass;
      total += rep.samples;
    }
    std::printf("[%s] %-10s max_residual=%.3e multiplier_min=%.3e samples=%ld\n",
                pass ? "pass" : "FAIL", tag_name.c_str(), worst_residual, worst_mult, total);
    if (csv)
      std::fprintf(csv, "%s,%.17g,%.17g,%ld\n", tag_name.c_str(), worst_residual, worst_mult,
                   total);
    all_pass = all_pass && pass;
  }
  if (csv) std::fclose(csv);
  return all_pass ? kExitOk : kExitNumerical;
}

int cmd_hist(const std::string& trace_path, int bins, const std::optional<double>& lo,
             const std::optional<double>& hi, const std::string& out) {
  const std::vector<polyak::TraceRow> rows = polyak::load_trace_csv(trace_path);
  std::optional<std::pair<double, double>> range;
  if (lo && hi) range = std::make_pair(*lo, *hi);
  const polyak::Histogram h = polyak::step_histogram(rows, bins, range);
  polyak::write_histogram_csv(h, out);
  std::printf("wrote %s (%d bins)\n", out.c_str(), bins);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyak-step methods, one-step worst-case rates and proof certificates"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  std::optional<std::string> run_out_dir;
  std::optional<std::uint64_t> run_seed;
  std::optional<double> run_tol;
  std::optional<int> run_max_iter;
  std::optional<std::string> run_fstar;
  run_cmd->add_option("config", config_path, "experiment config (key = value lines)")
      ->required();
  run_cmd->add_option("--out-dir", run_out_dir, "override the configured output directory");
  run_cmd->add_option("--seed", run_seed, "override the configured seed");
  run_cmd->add_option("--tol", run_tol, "override the gap tolerance");
  run_cmd->add_option("--max-iter", run_max_iter, "override the iteration budget");
  run_cmd->add_option("--fstar", run_fstar, "f* policy: exact, presolve, or a literal value");

  // rates
  auto* rates_cmd = app.add_subcommand("rates", "Emit a worst-case rate curve as CSV");
  double rates_mu = 0.1, rates_L = 1.0;
  std::string rates_rule = "variant-i";
  int rates_grid = 200;
  std::string rates_out = "rates.csv";
  rates_cmd->add_option("--mu", rates_mu, "strong convexity");
  rates_cmd->add_option("--L", rates_L, "smoothness");
  rates_cmd->add_option("--rule", rates_rule, "variant-i or polyak");
  rates_cmd->add_option("--grid", rates_grid, "curve resolution");
  rates_cmd->add_option("--out", rates_out, "output CSV path");

  // pep
  auto* pep_cmd = app.add_subcommand("pep", "Solve the one-step worst-case program");
  double pep_mu = 0.1, pep_L = 1.0;
  std::string pep_rule = "variant-i";
  std::optional<double> pep_gamma;
  bool pep_sweep = false;
  int pep_grid = 200;
  std::optional<std::string> pep_out;
  pep_cmd->add_option("--mu", pep_mu, "strong convexity");
  pep_cmd->add_option("--L", pep_L, "smoothness");
  pep_cmd->add_option("--rule", pep_rule, "variant-i or polyak");
  pep_cmd->add_option("--gamma", pep_gamma, "solve at a single step size");
  pep_cmd->add_flag("--sweep", pep_sweep, "sweep the admissible interval");
  pep_cmd->add_option("--grid", pep_grid, "sweep resolution");
  pep_cmd->add_option("--out", pep_out, "CSV output for the sweep curve");

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "Numerically verify the proof certificates");
  std::vector<std::string> certify_tags;
  int certify_samples = 1000, certify_settings = 20, certify_dim = 4;
  std::uint64_t certify_seed = 12345;
  std::optional<std::string> certify_out;
  certify_cmd->add_option("--tags", certify_tags,
                          "appa appb appc1 appc2 appc3 polys bracket (default: all)");
  certify_cmd->add_option("--samples", certify_samples, "atom samples per setting");
  certify_cmd->add_option("--settings", certify_settings, "parameter settings per identity");
  certify_cmd->add_option("--dim", certify_dim, "atom dimension");
  certify_cmd->add_option("--seed", certify_seed, "sampling seed");
  certify_cmd->add_option("--out", certify_out, "machine-readable CSV report");

  // hist
  auto* hist_cmd = app.add_subcommand("hist", "Histogram of effective step sizes in a trace");
  std::string hist_trace;
  int hist_bins = 50;
  std::optional<double> hist_min, hist_max;
  std::string hist_out = "hist.csv";
  hist_cmd->add_option("trace", hist_trace, "trace CSV from the run subcommand")->required();
  hist_cmd->add_option("--bins", hist_bins, "bin count");
  hist_cmd->add_option("--min", hist_min, "histogram range lower edge");
  hist_cmd->add_option("--max", hist_max, "histogram range upper edge");
  hist_cmd->add_option("--out", hist_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, run_out_dir, run_seed, run_tol, run_max_iter, run_fstar);
    if (rates_cmd->parsed())
      return cmd_rates(rates_mu, rates_L, rates_rule, rates_grid, rates_out);
    if (pep_cmd->parsed()) {
      const polyak::RegularityClass cls(pep_mu, pep_L);
      const polyak::PepRule rule = parse_rule(pep_rule);
      if (pep_sweep) {
        const polyak::GammaSweep sweep = polyak::sweep_gamma(cls, rule, pep_grid);
        if (pep_out) {
          polyak::emit_rate_curves(cls, rule, pep_grid, *pep_out);
          std::printf("wrote %s\n", pep_out->c_str());
        }
        std::printf("max_gamma rho(gamma) = %.12g at gamma = %.12g\n", sweep.rho_max,
                    sweep.gamma_max);
        return kExitOk;
      }
      if (!pep_gamma) throw polyak::ConfigError("pep: pass --gamma or --sweep");
      const polyak::PepSolution sol = polyak::solve_rho_of_gamma(cls, *pep_gamma, rule);
      std::printf("rho(%.12g) = %.12g\n", sol.gamma, sol.objective);
      std::printf("vars: X=%.12g G=%.12g GX=%.12g fgap=%.12g\n", sol.vars.X, sol.vars.G,
                  sol.vars.GX, sol.vars.fgap);
      std::printf("active: interp(x,x*)=%d interp(x*,x)=%d gram=%d\n",
                  sol.active.interp_point_to_star, sol.active.interp_star_to_point,
                  sol.active.gram);
      return kExitOk;
    }
    if (certify_cmd->parsed())
      return cmd_certify(certify_tags, certify_samples, certify_settings, certify_dim,
                         certify_seed, certify_out);
    if (hist_cmd->parsed()) return cmd_hist(hist_trace, hist_bins, hist_min, hist_max, hist_out);
  } catch (const polyak::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const polyak::MissingFStar& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const polyak::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const polyak::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const polyak::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
