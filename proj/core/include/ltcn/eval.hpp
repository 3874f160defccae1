#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltcn/dataset.hpp"
#include "ltcn/model.hpp"

namespace ltcn {

/// Chance-corrected agreement in [-1, 1]. When chance agreement is exactly 1
/// (both sides constant) the value is 1 for identical vectors and 0 otherwise.
double cohen_kappa(const std::vector<std::string>& y_true,
                   const std::vector<std::string>& y_pred);

double accuracy(const std::vector<std::string>& y_true,
                const std::vector<std::string>& y_pred);

/// Rows are true classes, columns predicted.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<long>> counts;

  static ConfusionMatrix build(const std::vector<std::string>& y_true,
                               const std::vector<std::string>& y_pred);
  static ConfusionMatrix build(const std::vector<std::string>& y_true,
                               const std::vector<std::string>& y_pred,
                               const std::vector<std::string>& classes);
  long total() const;
};

struct FoldResult {
  int fold = 0;
  double kappa = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  double fit_seconds = 0.0;
  Attractor attractor;
  Index iterations = 0; // s actually performed at fit time
};

struct EvalReport {
  std::vector<FoldResult> folds;
  double mean_kappa = 0.0;
  double std_kappa = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_fit_seconds = 0.0;
  double fixed_point_fraction = 0.0;
  double mean_t_alpha = 0.0; // over folds that reached a fixed point

  // Configuration echo.
  double phi = 0.0;
  TransferKind transfer = TransferKind::Sigmoid;
  int max_iterations = 0;
  DecisionHead head = DecisionHead::RecurrenceAware;
  int k = 0;
  std::uint64_t seed = 0;
};

/// Stratified k-fold cross-validation. Scaler, class order and encoding are
/// derived from each training split only. Deterministic for a fixed seed and
/// independent of the job count.
EvalReport cross_validate(const RawTable& raw, const ReasoningConfig& config,
                          DecisionHead head, int k, std::uint64_t seed, int jobs = 1);

struct GridCell {
  double phi = 0.0;
  TransferKind transfer = TransferKind::Sigmoid;
  double mean_kappa = 0.0; // inner-CV kappa averaged across outer folds
  double std_kappa = 0.0;
  double mean_accuracy = 0.0;
};

struct GridSearchResult {
  double best_phi = 0.0;
  TransferKind best_transfer = TransferKind::Sigmoid;
  std::vector<GridCell> cells;
  EvalReport outer; // generalization report; each fold uses its selected cell
  std::vector<std::pair<double, TransferKind>> per_fold_choice;
};

/// Nested cross-validation over the (phi, transfer) grid. Inner CV on each
/// outer-training split selects by mean kappa; ties prefer smaller phi, then
/// sigmoid. The reported best cell aggregates the inner scores across folds.
GridSearchResult grid_search(const RawTable& raw, const std::vector<double>& phi_grid,
                             const std::vector<TransferKind>& tf_grid, int max_iterations,
                             int k, std::uint64_t seed, int jobs = 1);

struct HeadComparison {
  EvalReport recurrence;
  EvalReport last_state;
};

/// Both decision heads on identical folds with identical inner weights.
HeadComparison compare_decision_heads(const RawTable& raw, const ReasoningConfig& config,
                                      int k, std::uint64_t seed, int jobs = 1);

struct SweepCell {
  double phi = 0.0;
  int max_iterations = 0;
  EvalReport report;
};

/// Plain cross-validation over a phi x iterations grid (no tuning).
std::vector<SweepCell> sweep(const RawTable& raw, const std::vector<double>& phi_grid,
                             const std::vector<int>& iters_grid, TransferKind transfer,
                             DecisionHead head, double tolerance, int k,
                             std::uint64_t seed, int jobs = 1);

} // namespace ltcn
