#include "ltcn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace ltcn {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

void validate_table(const RawTable& table) {
  if (table.rows() < 2) throw std::invalid_argument("table needs at least 2 rows");
  if (table.cols() < 1) throw std::invalid_argument("table needs at least 1 feature");
  if (!table.features.allFinite())
    throw std::invalid_argument("table contains non-finite feature values");
  if (static_cast<Index>(table.labels.size()) != table.rows())
    throw std::invalid_argument("label count does not match row count");
  if (class_order(table.labels).size() < 2)
    throw std::invalid_argument("fewer than 2 classes in label column");
}

} // namespace

RawTable load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  RawTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  std::size_t data_row = 0;
  bool header_pending = options.has_header;

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_line(line, options.delimiter);
    if (header_pending) {
      header_pending = false;
      width = cells.size();
      if (width < 2)
        throw std::runtime_error("'" + path + "': need at least one feature column and a label column");
      table.feature_names.assign(cells.begin(), cells.end() - 1);
      table.label_name = cells.back();
      continue;
    }
    ++data_row;
    if (width == 0) {
      width = cells.size();
      if (width < 2)
        throw std::runtime_error("'" + path + "': need at least one feature column and a label column");
    }
    if (cells.size() != width)
      throw std::runtime_error("'" + path + "': ragged row " + std::to_string(data_row) +
                               " has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(width));
    std::vector<double> values(width - 1);
    for (std::size_t c = 0; c + 1 < width; ++c) {
      if (!parse_number(cells[c], values[c])) {
        std::string name = c < table.feature_names.size() ? " (" + table.feature_names[c] + ")" : "";
        throw std::runtime_error("'" + path + "': non-numeric feature value '" + cells[c] +
                                 "' at row " + std::to_string(data_row) + ", column " +
                                 std::to_string(c + 1) + name);
      }
    }
    rows.push_back(std::move(values));
    table.labels.push_back(cells.back());
  }

  if (table.feature_names.empty() && width >= 2) {
    for (std::size_t c = 0; c + 1 < width; ++c)
      table.feature_names.push_back("f" + std::to_string(c + 1));
    table.label_name = "label";
  }

  table.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(width - 1));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c + 1 < width; ++c)
      table.features(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];

  validate_table(table);
  return table;
}

RawTable make_raw_table(Matrix features, std::vector<std::string> labels,
                        std::vector<std::string> feature_names, std::string label_name) {
  RawTable table;
  table.features = std::move(features);
  table.labels = std::move(labels);
  if (feature_names.empty()) {
    for (Index c = 0; c < table.cols(); ++c)
      feature_names.push_back("f" + std::to_string(c + 1));
  }
  if (static_cast<Index>(feature_names.size()) != table.cols())
    throw std::invalid_argument("feature name count does not match feature count");
  table.feature_names = std::move(feature_names);
  table.label_name = std::move(label_name);
  validate_table(table);
  return table;
}

MinMaxScaler MinMaxScaler::fit(const Matrix& X) {
  if (X.rows() < 1) throw std::invalid_argument("cannot fit scaler on empty matrix");
  std::vector<std::pair<double, double>> bounds(static_cast<std::size_t>(X.cols()));
  for (Index c = 0; c < X.cols(); ++c)
    bounds[static_cast<std::size_t>(c)] = {X.col(c).minCoeff(), X.col(c).maxCoeff()};
  return MinMaxScaler(std::move(bounds));
}

Matrix MinMaxScaler::transform(const Matrix& X) const {
  if (X.cols() != feature_count())
    throw std::invalid_argument("scaler expects " + std::to_string(feature_count()) +
                                " features, got " + std::to_string(X.cols()));
  Matrix out(X.rows(), X.cols());
  for (Index c = 0; c < X.cols(); ++c) {
    const auto [lo, hi] = bounds_[static_cast<std::size_t>(c)];
    if (lo == hi) {
      out.col(c).setConstant(0.5);
    } else {
      const double range = hi - lo;
      out.col(c) = X.col(c).unaryExpr(
          [lo, range](double v) { return std::clamp((v - lo) / range, 0.0, 1.0); });
    }
  }
  return out;
}

std::vector<std::string> class_order(const std::vector<std::string>& labels) {
  std::vector<std::string> order;
  std::unordered_map<std::string, bool> seen;
  for (const auto& label : labels) {
    if (!seen[label]) {
      seen[label] = true;
      order.push_back(label);
    }
  }
  return order;
}

Matrix encode_targets(const std::vector<std::string>& labels,
                      const std::vector<std::string>& classes,
                      const TransferFunction& tf) {
  const Index n = static_cast<Index>(classes.size());
  Matrix Y(static_cast<Index>(labels.size()), n);
  Y.setConstant(tf.clip_low());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::find(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end())
      throw std::invalid_argument("unknown label '" + labels[i] + "'");
    Y(static_cast<Index>(i), static_cast<Index>(it - classes.begin())) = tf.clip_high();
  }
  return Y;
}

std::vector<Index> FoldPlan::test_indices(int fold) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(static_cast<Index>(i));
  return out;
}

std::vector<Index> FoldPlan::train_indices(int fold) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(static_cast<Index>(i));
  return out;
}

FoldPlan make_folds(const std::vector<std::string>& labels, int k, std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  if (k < 2 || k > n)
    throw std::invalid_argument("fold count " + std::to_string(k) + " out of range [2, " +
                                std::to_string(n) + "]");

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);

  std::mt19937_64 rng(seed);
  // Deal class by class, continuing the round-robin across classes so both
  // the per-class and the overall fold sizes differ by at most one.
  int offset = 0;
  for (const auto& cls : class_order(labels)) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == cls) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j)
      plan.assignments[static_cast<std::size_t>(members[j])] =
          (offset + static_cast<int>(j)) % k;
    offset = (offset + static_cast<int>(members.size())) % k;
  }
  return plan;
}

Dataset build_dataset(const RawTable& raw, const TransferFunction& tf) {
  Dataset ds;
  ds.scaler = MinMaxScaler::fit(raw.features);
  ds.X = ds.scaler.transform(raw.features);
  ds.classes = class_order(raw.labels);
  if (ds.classes.size() < 2)
    throw std::invalid_argument("fewer than 2 classes in label column");
  ds.Y = encode_targets(raw.labels, ds.classes, tf);
  ds.feature_names = raw.feature_names;
  return ds;
}

Dataset build_dataset(const RawTable& raw, const TransferFunction& tf,
                      const std::vector<Index>& rows) {
  RawTable subset;
  subset.features.resize(static_cast<Index>(rows.size()), raw.cols());
  subset.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    subset.features.row(static_cast<Index>(i)) = raw.features.row(rows[i]);
    subset.labels.push_back(raw.labels[static_cast<std::size_t>(rows[i])]);
  }
  subset.feature_names = raw.feature_names;
  subset.label_name = raw.label_name;
  return build_dataset(subset, tf);
}

} // namespace ltcn
