#include "polyak/data.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "polyak/errors.hpp"
#include "polyak/spectral.hpp"

namespace polyak {
namespace {

std::string location(const std::string& path, std::size_t row, std::size_t col) {
  return path + ": row " + std::to_string(row) + ", column " + std::to_string(col);
}

double parse_number(const std::string& token, const std::string& path, std::size_t row,
                    std::size_t col) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError("unparseable number '" + token + "' at " + location(path, row, col));
  if (!std::isfinite(v))
    throw DataError("non-finite entry '" + token + "' at " + location(path, row, col));
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

int count_distinct_labels(const Eigen::VectorXd& labels) {
  std::set<double> values(labels.begin(), labels.end());
  return static_cast<int>(values.size());
}

}  // namespace

Dataset load_csv(const std::string& path, int label_column, bool has_header,
                 bool coerce_binary_labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (has_header && lineno == 1) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (ncols == 0) {
      ncols = fields.size();
      if (ncols < 2) throw DataError(path + ": need at least one feature and a label column");
    } else if (fields.size() != ncols) {
      throw DataError(path + ": row " + std::to_string(lineno) + " has " +
                      std::to_string(fields.size()) + " columns, expected " +
                      std::to_string(ncols));
    }
    std::vector<double> row(ncols);
    for (std::size_t j = 0; j < ncols; ++j)
      row[j] = parse_number(fields[j], path, lineno, j + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path + ": no data rows");

  const int lab = label_column < 0 ? static_cast<int>(ncols) - 1 : label_column;
  if (lab < 0 || lab >= static_cast<int>(ncols))
    throw DataError(path + ": label column out of range");

  Dataset ds;
  ds.name = path;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(ncols) - 1);
  ds.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Eigen::Index jj = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (static_cast<int>(j) == lab)
        ds.labels[static_cast<Eigen::Index>(i)] = rows[i][j];
      else
        ds.features(static_cast<Eigen::Index>(i), jj++) = rows[i][j];
    }
  }
  ds.label_cardinality = count_distinct_labels(ds.labels);

  if (coerce_binary_labels) {
    std::set<double> values(ds.labels.begin(), ds.labels.end());
    if (values.size() > 2)
      throw DataError(path + ": binary label coercion requested but found " +
                      std::to_string(values.size()) + " classes");
    if (values.size() == 2) {
      const double low = *values.begin();
      for (Eigen::Index i = 0; i < ds.labels.size(); ++i)
        ds.labels[i] = ds.labels[i] == low ? -1.0 : 1.0;
    }
  }
  return ds;
}

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::vector<double> labels;
  std::vector<std::vector<std::pair<int, double>>> sparse_rows;
  std::string line;
  std::size_t lineno = 0;
  int max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    labels.push_back(parse_number(token, path, lineno, 1));
    std::vector<std::pair<int, double>> entries;
    int prev_index = 0;
    std::size_t col = 1;
    while (ss >> token) {
      ++col;
      const auto sep = token.find(':');
      if (sep == std::string::npos)
        throw DataError("missing ':' in '" + token + "' at " + location(path, lineno, col));
      const double idx_val = parse_number(token.substr(0, sep), path, lineno, col);
      const int idx = static_cast<int>(idx_val);
      if (idx_val != idx || idx < 1)
        throw DataError("indices are 1-based integers; got '" + token.substr(0, sep) +
                        "' at " + location(path, lineno, col));
      if (idx <= prev_index)
        throw DataError("non-increasing feature index at " + location(path, lineno, col));
      prev_index = idx;
      max_index = std::max(max_index, idx);
      entries.emplace_back(idx, parse_number(token.substr(sep + 1), path, lineno, col));
    }
    sparse_rows.push_back(std::move(entries));
  }
  if (labels.empty()) throw DataError(path + ": no data rows");

  Dataset ds;
  ds.name = path;
  ds.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), max_index);
  ds.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ds.labels[static_cast<Eigen::Index>(i)] = labels[i];
    for (const auto& [idx, val] : sparse_rows[i])
      ds.features(static_cast<Eigen::Index>(i), idx - 1) = val;
  }
  ds.label_cardinality = count_distinct_labels(ds.labels);
  return ds;
}

void save_libsvm(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  char buf[64];
  for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", dataset.labels[i]);
    out << buf;
    for (Eigen::Index j = 0; j < dataset.cols(); ++j) {
      const double v = dataset.features(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ' ' << (j + 1) << ':' << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

Dataset standardize(const Dataset& dataset, std::optional<double> target_quadratic_L) {
  const Eigen::Index m = dataset.rows();
  if (m < 2) throw DataError("standardize: need at least 2 rows");

  Dataset out = dataset;
  out.standardized = true;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double mean = out.features.col(j).mean();
    out.features.col(j).array() -= mean;
    const double var = out.features.col(j).squaredNorm() / static_cast<double>(m);
    if (var > 0.0)
      out.features.col(j) /= std::sqrt(var);
    else
      out.features.col(j).setZero();
  }
  if (target_quadratic_L) {
    const double top = operator_norm_sq(out.features);
    if (top > 0.0) out.features *= std::sqrt(*target_quadratic_L / top);
  }
  return out;
}

}  // namespace polyak
