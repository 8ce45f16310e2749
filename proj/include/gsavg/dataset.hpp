#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsavg/matrix.hpp"

namespace gsavg {

/// Thrown for malformed input files. The message names the offending
/// row/column when one exists.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Labeled two-class data. Labels are always 1 or 2; `label_names[k]` is the
/// original tag that was mapped onto class k+1.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  std::size_t size() const { return features.rows(); }
  std::size_t dim() const { return features.cols(); }

  std::size_t count(int label) const;
  std::vector<std::size_t> indices_of(int label) const;
  /// Feature rows of one class, in dataset order.
  Matrix class_rows(int label) const;

  /// Checks the structural invariants; throws std::invalid_argument.
  void validate(bool require_both_classes = true) const;

  Dataset subset(std::span<const std::size_t> rows) const;

  /// Builds a dataset from class-wise row blocks (class 1 rows first).
  static Dataset from_classes(const Matrix& class1, const Matrix& class2);
};

/// Label column given by header name or 0-based index. Empty = last column.
using LabelColumn = std::variant<std::monostate, std::string, std::size_t>;

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column = {});
Dataset parse_csv(const std::string& text, const LabelColumn& label_column = {});

/// Feature rows for prediction. When the file has dim + 1 columns the label
/// column is split off and kept as raw tags; with dim columns every column is
/// a feature and `tags` stays empty.
struct FeatureTable {
  Matrix features;
  std::vector<std::string> tags;
};
FeatureTable parse_feature_table(const std::string& text, std::size_t dim,
                                 const LabelColumn& label_column = {});
FeatureTable load_feature_table(const std::filesystem::path& path, std::size_t dim,
                                const LabelColumn& label_column = {});

/// Writes features followed by a trailing "label" column holding the original
/// tags (or 1/2 when no tags are recorded). Values use shortest round-trip form.
void write_csv(const Dataset& data, const std::filesystem::path& path);
std::string to_csv(const Dataset& data);

/// Per-class stratified split: ceil(fraction * n_j) rows of class j go to
/// the training part. Row order inside each part follows the original order.
std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double train_fraction,
                                             std::uint64_t seed);

/// Index form of the split, useful when the caller keeps its own storage.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
SplitIndices stratified_split_indices(const Dataset& data, double train_fraction,
                                      std::uint64_t seed);

/// Column z-scoring. Statistics come from `reference` and are applied to `target`.
struct ColumnScaling {
  std::vector<double> mean;
  std::vector<double> scale;
  static ColumnScaling fit(const Matrix& reference);
  void apply(Matrix& target) const;
};

/// 64-bit FNV-1a over the shape, feature bytes and labels.
std::uint64_t fingerprint(const Dataset& data);

}  // namespace gsavg
