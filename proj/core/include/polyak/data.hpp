#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

namespace polyak {

/// Dense dataset with a label vector. Immutable after loading.
struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
  std::string name;
  bool standardized = false;
  int label_cardinality = 0;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }
};

/// Loads a dense comma-separated file. `label_column` indexes the column
/// holding labels (-1 = last). With `coerce_binary_labels`, two distinct
/// label values are mapped to {-1, +1} by sorted order. Throws DataError
/// with the row/column location on malformed or non-finite entries.
Dataset load_csv(const std::string& path, int label_column = -1, bool has_header = false,
                 bool coerce_binary_labels = false);

/// Loads sparse "label idx:value ..." lines with 1-based, strictly
/// increasing indices, densified; the max index defines the column count.
Dataset load_libsvm(const std::string& path);

/// Writes a dataset in the sparse format above (zeros skipped, full
/// round-trip precision).
void save_libsvm(const Dataset& dataset, const std::string& path);

/// Columns shifted and scaled to zero mean / unit variance (constant columns
/// become zeros). When `target_quadratic_L` is set, the whole matrix is
/// rescaled so the least-squares objective on it has that smoothness
/// constant, i.e. the top eigenvalue of A^T A equals the target.
Dataset standardize(const Dataset& dataset, std::optional<double> target_quadratic_L = {});

}  // namespace polyak
