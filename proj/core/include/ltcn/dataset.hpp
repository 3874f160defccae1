#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ltcn/transfer.hpp"
#include "ltcn/types.hpp"

namespace ltcn {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
};

/// Raw tabular data: numeric features plus one categorical label per row.
struct RawTable {
  Matrix features; // K x M, unnormalized
  std::vector<std::string> labels;
  std::vector<std::string> feature_names;
  std::string label_name;

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }
};

/// Load a CSV whose last column is the label and all other columns are
/// numeric features. Reports the offending row/column on parse errors.
RawTable load_csv(const std::string& path, const CsvOptions& options = {});

/// Validate and assemble a table built in memory (synthetic data, tests).
RawTable make_raw_table(Matrix features, std::vector<std::string> labels,
                        std::vector<std::string> feature_names = {},
                        std::string label_name = "label");

/// Per-feature min-max scaling into [0,1]. Constant features map to 0.5;
/// out-of-range values of unseen data are clipped into [0,1].
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  explicit MinMaxScaler(std::vector<std::pair<double, double>> bounds)
      : bounds_(std::move(bounds)) {}

  static MinMaxScaler fit(const Matrix& X);

  Matrix transform(const Matrix& X) const;

  const std::vector<std::pair<double, double>>& bounds() const { return bounds_; }
  Index feature_count() const { return static_cast<Index>(bounds_.size()); }

 private:
  std::vector<std::pair<double, double>> bounds_; // (min, max) per feature
};

/// Distinct labels in first-appearance order.
std::vector<std::string> class_order(const std::vector<std::string>& labels);

/// Inverse-friendly one-hot encoding: hi = tf.clip_high() at the label's
/// class position, lo = tf.clip_low() elsewhere.
Matrix encode_targets(const std::vector<std::string>& labels,
                      const std::vector<std::string>& classes,
                      const TransferFunction& tf);

/// Stratified, seeded k-fold assignment.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignments; // fold index per instance
  std::uint64_t seed = 0;

  std::vector<Index> test_indices(int fold) const;
  std::vector<Index> train_indices(int fold) const;
};

FoldPlan make_folds(const std::vector<std::string>& labels, int k, std::uint64_t seed);

/// Normalized + encoded view of a RawTable, ready for fitting.
struct Dataset {
  Matrix X; // K x M in [0,1]
  Matrix Y; // K x N encoded targets
  std::vector<std::string> classes;
  MinMaxScaler scaler;
  std::vector<std::string> feature_names;

  Index rows() const { return X.rows(); }
  Index feature_count() const { return X.cols(); }
  Index class_count() const { return static_cast<Index>(classes.size()); }
};

Dataset build_dataset(const RawTable& raw, const TransferFunction& tf);

/// Same, restricted to a row subset (scaler, class order and encoding are
/// derived from the subset only).
Dataset build_dataset(const RawTable& raw, const TransferFunction& tf,
                      const std::vector<Index>& rows);

} // namespace ltcn
