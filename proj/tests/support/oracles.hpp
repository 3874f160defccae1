#pragma once

// Independent reference computations the implementation is checked against.
// These deliberately avoid the code paths under test: scalar math instead of
// the Eigen expressions, CompleteOrthogonalDecomposition instead of the
// SVD-based pseudoinverse, map-based counting for the agreement metrics.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ltcn/model.hpp"
#include "ltcn/types.hpp"

namespace ltcn::testing {

inline double scalar_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double scalar_logit(double y) { return std::log(y / (1.0 - y)); }

/// Minimum-norm least squares via a rank-revealing decomposition.
inline Matrix cod_least_squares(const Matrix& A, const Matrix& B) {
  return Eigen::CompleteOrthogonalDecomposition<Matrix>(A).solve(B);
}

/// Direct regression of f^-1(Y) on [X | 1]; returns the score matrix for
/// X_new. This is the phi = 0 oracle.
inline Matrix regression_scores(const Matrix& X, const Matrix& Y_inverse,
                                const Matrix& X_new) {
  Matrix augmented(X.rows(), X.cols() + 1);
  augmented << X, Matrix::Ones(X.rows(), 1);
  const Matrix theta = cod_least_squares(augmented, Y_inverse);
  Matrix scores = X_new * theta.topRows(X.cols());
  scores.rowwise() += theta.row(X.cols());
  return scores;
}

/// Brute-force Cohen's kappa from marginal counts.
inline double brute_force_kappa(const std::vector<std::string>& y_true,
                                const std::vector<std::string>& y_pred) {
  const double n = static_cast<double>(y_true.size());
  std::map<std::string, long> true_counts, pred_counts;
  std::vector<std::string> order;
  for (const auto& y : y_true) {
    if (true_counts.find(y) == true_counts.end() && pred_counts.find(y) == pred_counts.end() &&
        std::find(order.begin(), order.end(), y) == order.end())
      order.push_back(y);
  }
  for (const auto& y : y_pred)
    if (std::find(order.begin(), order.end(), y) == order.end()) order.push_back(y);
  for (const auto& y : y_true) ++true_counts[y];
  for (const auto& y : y_pred) ++pred_counts[y];

  long matches = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++matches;
  const double p_observed = static_cast<double>(matches) / n;

  if (true_counts.size() == 1 && pred_counts.size() == 1)
    return p_observed == 1.0 ? 1.0 : 0.0;

  double p_expected = 0.0;
  for (const auto& label : order)
    p_expected += (static_cast<double>(true_counts[label]) / n) *
                  (static_cast<double>(pred_counts[label]) / n);
  return (p_observed - p_expected) / (1.0 - p_expected);
}

/// Relevance recomputed from the raw weight blocks: per-feature left-to-right
/// absolute sums of the outgoing inner row and of every temporal block,
/// combined as inner + outer.
inline std::map<std::string, double> relevance_oracle(const LtcnModel& model) {
  const Index features = model.feature_count();
  const Index blocks = model.outer.iterations + 1;
  std::map<std::string, double> scores;
  for (Index i = 0; i < features; ++i) {
    double inner = 0.0;
    for (Index j = 0; j < features; ++j) inner += std::abs(model.inner.W(i, j));
    double outer = 0.0;
    for (Index t = 0; t < blocks; ++t) {
      const Matrix block = model.outer.R.middleRows(t * features, features);
      for (Index j = 0; j < block.cols(); ++j) outer += std::abs(block(i, j));
    }
    scores[model.feature_names[static_cast<std::size_t>(i)]] = inner + outer;
  }
  return scores;
}

/// Scalar simulation of a two-neuron tanh system, independent of the matrix
/// step path. Returns the state sequence including the start.
inline std::vector<std::array<double, 2>> simulate_two_neuron_tanh(
    std::array<double, 2> state, const double w[2][2], const double bias[2], double phi,
    int steps) {
  std::vector<std::array<double, 2>> states{state};
  const std::array<double, 2> initial = state;
  for (int t = 0; t < steps; ++t) {
    const double z0 = state[0] * w[0][0] + state[1] * w[1][0] + bias[0];
    const double z1 = state[0] * w[0][1] + state[1] * w[1][1] + bias[1];
    state = {phi * std::tanh(z0) + (1.0 - phi) * initial[0],
             phi * std::tanh(z1) + (1.0 - phi) * initial[1]};
    states.push_back(state);
  }
  return states;
}

} // namespace ltcn::testing
