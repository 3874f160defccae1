#include "ltcn/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ltcn/parallel.hpp"

namespace ltcn {

namespace {

using Clock = std::chrono::steady_clock;

void check_label_vectors(const std::vector<std::string>& y_true,
                         const std::vector<std::string>& y_pred) {
  if (y_true.empty()) throw std::invalid_argument("empty label vectors");
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("label vectors differ in length: " +
                                std::to_string(y_true.size()) + " vs " +
                                std::to_string(y_pred.size()));
}

std::vector<std::string> union_order(const std::vector<std::string>& y_true,
                                     const std::vector<std::string>& y_pred) {
  std::vector<std::string> merged = y_true;
  merged.insert(merged.end(), y_pred.begin(), y_pred.end());
  return class_order(merged);
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += (x - mean) * (x - mean);
  return std::sqrt(sum / static_cast<double>(v.size()));
}

void aggregate(EvalReport& report) {
  std::vector<double> kappas, accs, fits;
  int fixed = 0;
  double t_alpha_sum = 0.0;
  for (const auto& fold : report.folds) {
    kappas.push_back(fold.kappa);
    accs.push_back(fold.accuracy);
    fits.push_back(fold.fit_seconds);
    if (fold.attractor.kind == AttractorKind::FixedPoint) {
      ++fixed;
      t_alpha_sum += fold.attractor.t_alpha;
    }
  }
  report.mean_kappa = mean_of(kappas);
  report.std_kappa = std_of(kappas, report.mean_kappa);
  report.mean_accuracy = mean_of(accs);
  report.std_accuracy = std_of(accs, report.mean_accuracy);
  report.mean_fit_seconds = mean_of(fits);
  const auto n = static_cast<double>(report.folds.size());
  report.fixed_point_fraction = n > 0 ? fixed / n : 0.0;
  report.mean_t_alpha = fixed > 0 ? t_alpha_sum / fixed : 0.0;
}

std::vector<std::string> labels_at(const RawTable& raw, const std::vector<Index>& rows) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (Index r : rows) out.push_back(raw.labels[static_cast<std::size_t>(r)]);
  return out;
}

Matrix features_at(const RawTable& raw, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), raw.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Index>(i)) = raw.features.row(rows[i]);
  return out;
}

FoldResult evaluate_fold(const RawTable& raw, const FoldPlan& plan, int fold,
                         const ReasoningConfig& config, DecisionHead head) {
  const auto train_rows = plan.train_indices(fold);
  const auto test_rows = plan.test_indices(fold);
  const Dataset train = build_dataset(raw, config.tf, train_rows);

  const auto t0 = Clock::now();
  const LtcnModel model = fit(train, config, head);
  const auto t1 = Clock::now();

  const Matrix X_test = scale_features(model, features_at(raw, test_rows));
  const auto y_pred = predict_class(model, X_test);
  const auto y_true = labels_at(raw, test_rows);

  FoldResult result;
  result.fold = fold;
  result.kappa = cohen_kappa(y_true, y_pred);
  result.accuracy = accuracy(y_true, y_pred);
  result.confusion = ConfusionMatrix::build(y_true, y_pred, union_order(y_true, y_pred));
  result.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
  result.attractor = model.attractor;
  result.iterations = model.outer.iterations;
  return result;
}

// Canonical cell ordering for tie-breaking: smaller phi first, sigmoid
// before tanh at equal phi.
bool cell_precedes(double phi_a, TransferKind tf_a, double phi_b, TransferKind tf_b) {
  if (phi_a != phi_b) return phi_a < phi_b;
  return tf_a == TransferKind::Sigmoid && tf_b == TransferKind::Tanh;
}

} // namespace

double cohen_kappa(const std::vector<std::string>& y_true,
                   const std::vector<std::string>& y_pred) {
  check_label_vectors(y_true, y_pred);
  const auto labels = union_order(y_true, y_pred);
  const double n = static_cast<double>(y_true.size());

  long matches = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++matches;
  const double p_observed = static_cast<double>(matches) / n;

  std::vector<long> true_counts(labels.size(), 0), pred_counts(labels.size(), 0);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    for (const auto& y : y_true)
      if (y == labels[l]) ++true_counts[l];
    for (const auto& y : y_pred)
      if (y == labels[l]) ++pred_counts[l];
  }

  // Chance agreement is exactly 1 only when both sides are constant.
  const bool true_constant =
      std::count(true_counts.begin(), true_counts.end(), 0) ==
      static_cast<long>(labels.size()) - 1;
  const bool pred_constant =
      std::count(pred_counts.begin(), pred_counts.end(), 0) ==
      static_cast<long>(labels.size()) - 1;
  if (true_constant && pred_constant) return p_observed == 1.0 ? 1.0 : 0.0;

  double p_expected = 0.0;
  for (std::size_t l = 0; l < labels.size(); ++l)
    p_expected += (static_cast<double>(true_counts[l]) / n) *
                  (static_cast<double>(pred_counts[l]) / n);
  return (p_observed - p_expected) / (1.0 - p_expected);
}

double accuracy(const std::vector<std::string>& y_true,
                const std::vector<std::string>& y_pred) {
  check_label_vectors(y_true, y_pred);
  long matches = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(y_true.size());
}

ConfusionMatrix ConfusionMatrix::build(const std::vector<std::string>& y_true,
                                       const std::vector<std::string>& y_pred) {
  return build(y_true, y_pred, union_order(y_true, y_pred));
}

ConfusionMatrix ConfusionMatrix::build(const std::vector<std::string>& y_true,
                                       const std::vector<std::string>& y_pred,
                                       const std::vector<std::string>& classes) {
  check_label_vectors(y_true, y_pred);
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));
  const auto index_of = [&classes](const std::string& label) {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw std::invalid_argument("label '" + label + "' not in class list");
    return static_cast<std::size_t>(it - classes.begin());
  };
  for (std::size_t i = 0; i < y_true.size(); ++i)
    ++cm.counts[index_of(y_true[i])][index_of(y_pred[i])];
  return cm;
}

long ConfusionMatrix::total() const {
  long sum = 0;
  for (const auto& row : counts)
    for (long c : row) sum += c;
  return sum;
}

EvalReport cross_validate(const RawTable& raw, const ReasoningConfig& config,
                          DecisionHead head, int k, std::uint64_t seed, int jobs) {
  config.validate();
  const FoldPlan plan = make_folds(raw.labels, k, seed);

  EvalReport report;
  report.folds.resize(static_cast<std::size_t>(k));
  parallel_for(jobs, k, [&](int fold) {
    report.folds[static_cast<std::size_t>(fold)] = evaluate_fold(raw, plan, fold, config, head);
  });
  aggregate(report);
  report.phi = config.phi;
  report.transfer = config.tf.kind();
  report.max_iterations = config.max_iterations;
  report.head = head;
  report.k = k;
  report.seed = seed;
  return report;
}

GridSearchResult grid_search(const RawTable& raw, const std::vector<double>& phi_grid,
                             const std::vector<TransferKind>& tf_grid, int max_iterations,
                             int k, std::uint64_t seed, int jobs) {
  if (phi_grid.empty() || tf_grid.empty())
    throw std::invalid_argument("grid_search needs non-empty grids");

  struct Cell {
    double phi;
    TransferKind transfer;
  };
  std::vector<Cell> cells;
  for (double phi : phi_grid)
    for (TransferKind tf : tf_grid) cells.push_back({phi, tf});

  const FoldPlan outer_plan = make_folds(raw.labels, k, seed);
  const auto cell_config = [max_iterations](const Cell& cell) {
    ReasoningConfig config;
    config.phi = cell.phi;
    config.max_iterations = max_iterations;
    config.tf = TransferFunction(cell.transfer);
    return config;
  };

  struct OuterFold {
    std::vector<double> cell_kappa;  // mean inner kappa per cell
    std::vector<double> cell_accuracy;
    std::size_t choice = 0;
    FoldResult result;
  };
  std::vector<OuterFold> outer_folds(static_cast<std::size_t>(k));

  parallel_for(jobs, k, [&](int fold) {
    OuterFold& out = outer_folds[static_cast<std::size_t>(fold)];
    const auto train_rows = outer_plan.train_indices(fold);

    RawTable inner_table;
    inner_table.features = features_at(raw, train_rows);
    inner_table.labels = labels_at(raw, train_rows);
    inner_table.feature_names = raw.feature_names;
    inner_table.label_name = raw.label_name;

    // Deterministic derived seed per outer fold.
    const std::uint64_t inner_seed = seed * 1000003ULL + static_cast<std::uint64_t>(fold) + 1;
    out.cell_kappa.resize(cells.size());
    out.cell_accuracy.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const EvalReport inner = cross_validate(inner_table, cell_config(cells[c]),
                                              DecisionHead::RecurrenceAware, k, inner_seed, 1);
      out.cell_kappa[c] = inner.mean_kappa;
      out.cell_accuracy[c] = inner.mean_accuracy;
    }

    out.choice = 0;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const bool better = out.cell_kappa[c] > out.cell_kappa[out.choice];
      const bool tie = out.cell_kappa[c] == out.cell_kappa[out.choice] &&
                       cell_precedes(cells[c].phi, cells[c].transfer,
                                     cells[out.choice].phi, cells[out.choice].transfer);
      if (better || tie) out.choice = c;
    }
    out.result =
        evaluate_fold(raw, outer_plan, fold, cell_config(cells[out.choice]),
                      DecisionHead::RecurrenceAware);
  });

  GridSearchResult result;
  result.cells.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> ks, accs;
    for (const auto& of : outer_folds) {
      ks.push_back(of.cell_kappa[c]);
      accs.push_back(of.cell_accuracy[c]);
    }
    GridCell cell;
    cell.phi = cells[c].phi;
    cell.transfer = cells[c].transfer;
    cell.mean_kappa = mean_of(ks);
    cell.std_kappa = std_of(ks, cell.mean_kappa);
    cell.mean_accuracy = mean_of(accs);
    result.cells.push_back(cell);
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < result.cells.size(); ++c) {
    const bool better = result.cells[c].mean_kappa > result.cells[best].mean_kappa;
    const bool tie = result.cells[c].mean_kappa == result.cells[best].mean_kappa &&
                     cell_precedes(result.cells[c].phi, result.cells[c].transfer,
                                   result.cells[best].phi, result.cells[best].transfer);
    if (better || tie) best = c;
  }
  result.best_phi = result.cells[best].phi;
  result.best_transfer = result.cells[best].transfer;

  for (int fold = 0; fold < k; ++fold) {
    const auto& of = outer_folds[static_cast<std::size_t>(fold)];
    result.outer.folds.push_back(of.result);
    result.per_fold_choice.emplace_back(cells[of.choice].phi, cells[of.choice].transfer);
  }
  aggregate(result.outer);
  result.outer.phi = result.best_phi;
  result.outer.transfer = result.best_transfer;
  result.outer.max_iterations = max_iterations;
  result.outer.head = DecisionHead::RecurrenceAware;
  result.outer.k = k;
  result.outer.seed = seed;
  return result;
}

HeadComparison compare_decision_heads(const RawTable& raw, const ReasoningConfig& config,
                                      int k, std::uint64_t seed, int jobs) {
  config.validate();
  const FoldPlan plan = make_folds(raw.labels, k, seed);

  HeadComparison cmp;
  cmp.recurrence.folds.resize(static_cast<std::size_t>(k));
  cmp.last_state.folds.resize(static_cast<std::size_t>(k));

  parallel_for(jobs, k, [&](int fold) {
    const auto train_rows = plan.train_indices(fold);
    const auto test_rows = plan.test_indices(fold);
    const Dataset train = build_dataset(raw, config.tf, train_rows);
    const Matrix X_test_raw = features_at(raw, test_rows);
    const auto y_true = labels_at(raw, test_rows);

    // Shared unsupervised step so both heads see identical dynamics.
    InnerWeights inner = fit_inner(train.X, config.tf);

    for (DecisionHead head : {DecisionHead::RecurrenceAware, DecisionHead::LastStateOnly}) {
      const auto t0 = Clock::now();
      const LtcnModel model = fit_with_inner(train, config, head, inner);
      const auto t1 = Clock::now();
      const auto y_pred = predict_class(model, scale_features(model, X_test_raw));

      FoldResult result;
      result.fold = fold;
      result.kappa = cohen_kappa(y_true, y_pred);
      result.accuracy = accuracy(y_true, y_pred);
      result.confusion = ConfusionMatrix::build(y_true, y_pred, union_order(y_true, y_pred));
      result.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
      result.attractor = model.attractor;
      result.iterations = model.outer.iterations;
      auto& report = head == DecisionHead::RecurrenceAware ? cmp.recurrence : cmp.last_state;
      report.folds[static_cast<std::size_t>(fold)] = std::move(result);
    }
  });

  for (auto* report : {&cmp.recurrence, &cmp.last_state}) {
    aggregate(*report);
    report->phi = config.phi;
    report->transfer = config.tf.kind();
    report->max_iterations = config.max_iterations;
    report->k = k;
    report->seed = seed;
  }
  cmp.recurrence.head = DecisionHead::RecurrenceAware;
  cmp.last_state.head = DecisionHead::LastStateOnly;
  return cmp;
}

std::vector<SweepCell> sweep(const RawTable& raw, const std::vector<double>& phi_grid,
                             const std::vector<int>& iters_grid, TransferKind transfer,
                             DecisionHead head, double tolerance, int k,
                             std::uint64_t seed, int jobs) {
  if (phi_grid.empty() || iters_grid.empty())
    throw std::invalid_argument("sweep needs non-empty grids");
  std::vector<SweepCell> cells;
  for (double phi : phi_grid) {
    for (int iters : iters_grid) {
      ReasoningConfig config;
      config.phi = phi;
      config.max_iterations = iters;
      config.tolerance = tolerance;
      config.tf = TransferFunction(transfer);
      SweepCell cell;
      cell.phi = phi;
      cell.max_iterations = iters;
      cell.report = cross_validate(raw, config, head, k, seed, jobs);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

} // namespace ltcn
