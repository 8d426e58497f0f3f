#include "polyak/experiment.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <variant>

#include "polyak/errors.hpp"
#include "polyak/oracles.hpp"
#include "polyak/rates.hpp"

namespace polyak {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: boolean expected for '" + key + "', got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: number expected for '" + key + "', got '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& key) {
  const double x = parse_double(v, key);
  if (x != std::floor(x)) throw ConfigError("config: integer expected for '" + key + "'");
  return static_cast<long>(x);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : "nan";
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool methods_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "problem") {
      if (val == "quadratic") cfg.problem = ExperimentConfig::Problem::Quadratic;
      else if (val == "logistic") cfg.problem = ExperimentConfig::Problem::Logistic;
      else if (val == "lasso") cfg.problem = ExperimentConfig::Problem::Lasso;
      else throw ConfigError("config: unknown problem '" + val + "'");
    } else if (key == "dataset") {
      cfg.dataset_path = val;
    } else if (key == "label_column") {
      cfg.label_column = static_cast<int>(parse_long(val, key));
    } else if (key == "has_header") {
      cfg.has_header = parse_bool(val, key);
    } else if (key == "synthetic") {
      const auto x = val.find('x');
      if (x == std::string::npos)
        throw ConfigError("config: synthetic expects ROWSxCOLS, got '" + val + "'");
      cfg.synthetic_rows = static_cast<int>(parse_long(trim(val.substr(0, x)), key));
      cfg.synthetic_cols = static_cast<int>(parse_long(trim(val.substr(x + 1)), key));
    } else if (key == "kappa") {
      cfg.kappa = parse_double(val, key);
    } else if (key == "standardize") {
      cfg.standardize_data = parse_bool(val, key);
    } else if (key == "target_L") {
      cfg.target_L = parse_double(val, key);
    } else if (key == "reg") {
      cfg.reg = parse_double(val, key);
    } else if (key == "l1_weight") {
      cfg.l1_weight = parse_double(val, key);
    } else if (key == "methods") {
      methods_seen = true;
      cfg.methods.clear();
      std::stringstream ms(val);
      std::string name;
      while (std::getline(ms, name, ',')) {
        name = trim(name);
        if (!name.empty()) cfg.methods.push_back(name);
      }
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(val, key));
    } else if (key == "max_iter") {
      cfg.stop.max_iter = static_cast<int>(parse_long(val, key));
    } else if (key == "gap_tol") {
      cfg.stop.gap_tol = parse_double(val, key);
    } else if (key == "grad_tol") {
      cfg.stop.grad_tol = parse_double(val, key);
    } else if (key == "fstar") {
      if (val == "exact") cfg.f_star_policy = ExperimentConfig::FStarPolicy::Exact;
      else if (val == "presolve") cfg.f_star_policy = ExperimentConfig::FStarPolicy::Presolve;
      else {
        cfg.f_star_policy = ExperimentConfig::FStarPolicy::Literal;
        cfg.f_star_literal = parse_double(val, key);
      }
    } else if (key == "presolve_budget") {
      cfg.presolve_budget = parse_long(val, key);
    } else if (key == "presolve_tol") {
      cfg.presolve_tol = parse_double(val, key);
    } else if (key == "allow_untrusted_fstar") {
      cfg.allow_untrusted_f_star = parse_bool(val, key);
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                        "'");
    }
  }
  if (!methods_seen)
    throw ConfigError("config: missing 'methods' key (an explicit empty list is allowed)");
  if (cfg.dataset_path.empty() && cfg.synthetic_rows <= 0 &&
      cfg.problem != ExperimentConfig::Problem::Quadratic)
    throw ConfigError("config: logistic/lasso problems need a dataset");
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

MethodSpec method_from_name(const std::string& name) {
  if (name == "gd") return MethodSpec::gd(StepRule::fixed());
  if (name == "polyak") return MethodSpec::gd(StepRule::regular_polyak());
  if (name == "variant-i") return MethodSpec::gd(StepRule::variant_i());
  if (name == "variant-ii") return MethodSpec::gd(StepRule::variant_ii());
  if (name == "agm-const") return MethodSpec::agm(MomentumRule::const_mom());
  if (name == "acc-variant-i") return MethodSpec::agm(MomentumRule::acc_variant_i());
  if (name == "acc-variant-ii") return MethodSpec::agm(MomentumRule::acc_variant_ii());
  if (name == "agm-smooth") return MethodSpec::agm_smooth();
  throw ConfigError("unknown method '" + name + "'");
}

Eigen::VectorXd gaussian_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  return v;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> synthetic_least_squares(int rows, int cols,
                                                                    double kappa,
                                                                    std::uint64_t seed) {
  if (rows < cols || cols < 2)
    throw ConfigError("synthetic_least_squares: need rows >= cols >= 2");
  if (!(kappa > 0.0) || kappa >= 1.0)
    throw ConfigError("synthetic_least_squares: kappa must lie in (0, 1)");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto gaussian_matrix = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
    return m;
  };

  const Eigen::MatrixXd qu = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian_matrix(rows, cols))
                                 .householderQ() *
                             Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd qv = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian_matrix(cols, cols))
                                 .householderQ() *
                             Eigen::MatrixXd::Identity(cols, cols);
  Eigen::VectorXd sing(cols);
  for (int j = 0; j < cols; ++j) {
    const double eig = kappa + (1.0 - kappa) * j / (cols - 1);
    sing[j] = std::sqrt(eig);
  }
  Eigen::MatrixXd a = qu * sing.asDiagonal() * qv.transpose();
  Eigen::VectorXd b(rows);
  for (int i = 0; i < rows; ++i) b[i] = gauss(rng);
  return {std::move(a), std::move(b)};
}

namespace {

struct BuiltProblem {
  std::variant<std::monostate, SmoothOracle, CompositeOracle> oracle;
  int dim = 0;
};

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
  if (!cfg.dataset_path.empty()) {
    const bool libsvm = cfg.dataset_path.size() > 7 &&
                        cfg.dataset_path.substr(cfg.dataset_path.size() - 7) == ".libsvm";
    const bool binary = cfg.problem == ExperimentConfig::Problem::Logistic;
    Dataset ds = libsvm ? load_libsvm(cfg.dataset_path)
                        : load_csv(cfg.dataset_path, cfg.label_column, cfg.has_header, binary);
    if (cfg.standardize_data) ds = standardize(ds, cfg.target_L);
    features = std::move(ds.features);
    labels = std::move(ds.labels);
  } else {
    auto [a, b] = synthetic_least_squares(cfg.synthetic_rows, cfg.synthetic_cols, cfg.kappa,
                                          cfg.seed);
    features = std::move(a);
    labels = std::move(b);
  }

  BuiltProblem out;
  out.dim = static_cast<int>(features.cols());
  switch (cfg.problem) {
    case ExperimentConfig::Problem::Quadratic:
      out.oracle = make_least_squares(features, labels);
      break;
    case ExperimentConfig::Problem::Logistic:
      out.oracle = make_logistic(features, labels, cfg.reg);
      break;
    case ExperimentConfig::Problem::Lasso:
      out.oracle = make_lasso(features, labels, cfg.l1_weight);
      break;
  }
  return out;
}

FStar resolve_f_star(const ExperimentConfig& cfg, const std::optional<FStar>& existing,
                     const std::function<FStar()>& presolve) {
  switch (cfg.f_star_policy) {
    case ExperimentConfig::FStarPolicy::Literal:
      return {cfg.f_star_literal, true};
    case ExperimentConfig::FStarPolicy::Exact:
      if (!existing || !existing->trusted)
        throw ConfigError(
            "fstar = exact requested but the problem has no closed-form optimum; "
            "use fstar = presolve or a literal value");
      return *existing;
    case ExperimentConfig::FStarPolicy::Presolve: {
      const FStar est = presolve();
      if (!est.trusted && !cfg.allow_untrusted_f_star)
        throw ConfigError(
            "f* presolve exhausted its budget before the tolerance; "
            "set allow_untrusted_fstar = true to proceed with the flagged value");
      return est;
    }
  }
  throw ConfigError("unknown f* policy");
}

int iterations_to_tolerance(const RunTrace& trace, double tol) {
  if (!(tol > 0.0)) return -1;
  for (const TraceRow& row : trace.rows)
    if (row.best_gap <= tol) return row.k;
  return -1;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  BuiltProblem problem = build_problem(cfg);

  ExperimentSummary summary;
  if (std::holds_alternative<SmoothOracle>(problem.oracle)) {
    SmoothOracle& oracle = std::get<SmoothOracle>(problem.oracle);
    const FStar fs_val = resolve_f_star(cfg, oracle.f_star(), [&] {
      return estimate_f_star(oracle, cfg.presolve_budget, cfg.presolve_tol);
    });
    oracle.set_f_star(fs_val);
    summary.f_star = fs_val.value;
    summary.f_star_trusted = fs_val.trusted;
  } else {
    CompositeOracle& oracle = std::get<CompositeOracle>(problem.oracle);
    const FStar fs_val = resolve_f_star(cfg, oracle.F_star(), [&] {
      return estimate_f_star(oracle, cfg.presolve_budget, cfg.presolve_tol);
    });
    oracle.set_F_star(fs_val);
    summary.f_star = fs_val.value;
    summary.f_star_trusted = fs_val.trusted;
  }

  fs::create_directories(cfg.out_dir);
  const Eigen::VectorXd x0 = gaussian_vector(problem.dim, cfg.seed);
  RunOptions opts;
  opts.stop = cfg.stop;

  for (const std::string& name : cfg.methods) {
    const MethodSpec method = method_from_name(name);
    const RunTrace trace =
        std::holds_alternative<SmoothOracle>(problem.oracle)
            ? run(std::get<SmoothOracle>(problem.oracle), method, x0, opts)
            : run(std::get<CompositeOracle>(problem.oracle), method, x0, opts);

    const std::string csv_path = (fs::path(cfg.out_dir) / (method.label + ".csv")).string();
    write_trace_csv(trace, csv_path);

    ExperimentSummary::Row row;
    row.method = method.label;
    row.iters_to_tol = iterations_to_tolerance(trace, cfg.stop.gap_tol);
    row.final_gap = trace.rows.empty() ? 0.0 : trace.rows.back().f_gap;
    row.best_gap = trace.rows.empty() ? 0.0 : trace.rows.back().best_gap;
    row.reason = trace.reason;
    row.csv_path = csv_path;
    row.f_star_trusted = summary.f_star_trusted;
    summary.rows.push_back(std::move(row));
  }

  std::ofstream out(fs::path(cfg.out_dir) / "summary.csv");
  if (!out) throw DataError("cannot write summary.csv in '" + cfg.out_dir + "'");
  out << "method,iters_to_tol,final_gap,best_gap,reason,f_star_trusted\n";
  for (const auto& row : summary.rows) {
    out << row.method << ',' << row.iters_to_tol << ',' << format_double(row.final_gap) << ','
        << format_double(row.best_gap) << ',' << to_string(row.reason) << ','
        << (row.f_star_trusted ? "true" : "false") << '\n';
  }
  return summary;
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "iter,f_gap,best_gap,grad_sq,step_or_mu,beta\n";
  for (const TraceRow& row : trace.rows) {
    out << row.k << ',' << format_double(row.f_gap) << ',' << format_double(row.best_gap)
        << ',' << format_double(row.grad_sq) << ',' << format_optional(row.step_or_mu) << ','
        << format_optional(row.beta) << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<TraceRow> load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty trace file");
  if (trim(line) != "iter,f_gap,best_gap,grad_sq,step_or_mu,beta")
    throw DataError(path + ": unexpected trace header '" + line + "'");

  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 6)
      throw DataError(path + ": line " + std::to_string(lineno) + " has " +
                      std::to_string(fields.size()) + " fields, expected 6");
    TraceRow row;
    row.k = static_cast<int>(std::stol(fields[0]));
    row.f_gap = std::stod(fields[1]);
    row.best_gap = std::stod(fields[2]);
    row.grad_sq = std::stod(fields[3]);
    const double step = std::stod(fields[4]);
    if (std::isfinite(step)) row.step_or_mu = step;
    const double beta = std::stod(fields[5]);
    if (std::isfinite(beta)) row.beta = beta;
    rows.push_back(row);
  }
  return rows;
}

void emit_rate_curves(const RegularityClass& cls, PepRule rule, int grid,
                      const std::string& path) {
  const GammaSweep sweep = sweep_gamma(cls, rule, grid);
  const double polyak_level =
      (cls.L * cls.L - cls.L * cls.mu + cls.mu * cls.mu) / ((cls.L + cls.mu) * (cls.L + cls.mu));

  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "gamma,rho,rho_analytic\n";
  for (const SweepPoint& pt : sweep.curve) {
    const double analytic = rule == PepRule::VariantI
                                ? rate_value(RateFormula::Prop1, cls, pt.gamma)
                                : polyak_level;
    out << format_double(pt.gamma) << ',' << format_double(pt.rho) << ','
        << format_double(analytic) << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

Histogram step_histogram(const std::vector<TraceRow>& rows, int bins,
                         std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw DataError("step_histogram: need at least one bin");
  std::vector<double> values;
  for (const TraceRow& row : rows)
    if (row.step_or_mu) values.push_back(*row.step_or_mu);
  if (values.empty()) throw DataError("step_histogram: trace holds no step values");

  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
  } else {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  }
  if (!(hi > lo)) hi = lo + 1.0;

  Histogram h;
  h.centers.resize(bins);
  h.proportions.assign(bins, 0.0);
  const double width = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) h.centers[b] = lo + (b + 0.5) * width;
  for (const double v : values) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    h.proportions[b] += 1.0;
  }
  for (double& p : h.proportions) p /= static_cast<double>(values.size());
  return h;
}

void write_histogram_csv(const Histogram& histogram, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "bin_center,proportion\n";
  for (std::size_t i = 0; i < histogram.centers.size(); ++i)
    out << format_double(histogram.centers[i]) << ',' << format_double(histogram.proportions[i])
        << '\n';
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace polyak
