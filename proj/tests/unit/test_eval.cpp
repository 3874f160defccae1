#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "ltcn/eval.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace ltcn;
using ltcn::testing::brute_force_kappa;

namespace {

ReasoningConfig config_with(double phi, int iterations = 20) {
  ReasoningConfig config;
  config.phi = phi;
  config.max_iterations = iterations;
  return config;
}

std::vector<std::string> random_labels(std::mt19937& rng, int n, int alphabet) {
  std::uniform_int_distribution<int> pick(0, alphabet - 1);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + pick(rng))));
  return out;
}

} // namespace

TEST_CASE("cohen_kappa example values") {
  SUBCASE("perfect agreement") {
    CHECK(cohen_kappa({"x", "y", "z", "x"}, {"x", "y", "z", "x"}) == 1.0);
  }
  SUBCASE("hand-computed marginals") {
    // p_o = 0.75, p_e = 0.5, kappa = 0.5.
    CHECK(cohen_kappa({"0", "0", "1", "1"}, {"0", "1", "1", "1"}) ==
          doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("constant prediction on balanced labels means no learning") {
    CHECK(cohen_kappa({"a", "b", "a", "b"}, {"a", "a", "a", "a"}) == 0.0);
  }
  SUBCASE("degenerate chance agreement") {
    CHECK(cohen_kappa({"a", "a"}, {"a", "a"}) == 1.0);
    CHECK(cohen_kappa({"a", "a"}, {"b", "b"}) == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(cohen_kappa({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(cohen_kappa({"a"}, {"a", "b"}), std::invalid_argument);
  }
}

TEST_CASE("cohen_kappa matches the brute-force computation on random vectors") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 60);
    const int alphabet = 2 + static_cast<int>(rng() % 4);
    const auto y_true = random_labels(rng, n, alphabet);
    const auto y_pred = random_labels(rng, n, alphabet);
    CHECK(cohen_kappa(y_true, y_pred) == brute_force_kappa(y_true, y_pred));
  }
}

TEST_CASE("kappa is invariant under simultaneous relabeling") {
  std::mt19937 rng(11);
  const auto y_true = random_labels(rng, 80, 3);
  const auto y_pred = random_labels(rng, 80, 3);
  const std::map<std::string, std::string> mapping{{"a", "zebra"}, {"b", "yak"}, {"c", "x"}};
  auto remap = [&mapping](std::vector<std::string> labels) {
    for (auto& l : labels) l = mapping.at(l);
    return labels;
  };
  CHECK(cohen_kappa(y_true, y_pred) ==
        doctest::Approx(cohen_kappa(remap(y_true), remap(y_pred))).epsilon(1e-15));
}

TEST_CASE("kappa equals 1 exactly when accuracy is 1 (nondegenerate)") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto y_true = random_labels(rng, 40, 3);
    auto y_pred = random_labels(rng, 40, 3);
    const double acc = accuracy(y_true, y_pred);
    const double k = cohen_kappa(y_true, y_pred);
    if (acc == 1.0) CHECK(k == 1.0);
    if (k == 1.0) CHECK(acc == 1.0);
    CHECK(k >= -1.0);
    CHECK(k <= 1.0);
  }
}

TEST_CASE("accuracy") {
  CHECK(accuracy({"a", "b"}, {"a", "b"}) == 1.0);
  CHECK(accuracy({"a", "b"}, {"b", "a"}) == 0.0);
  CHECK(accuracy({"a", "b", "c", "d"}, {"a", "b", "c", "x"}) == 0.75);
}

TEST_CASE("confusion matrix marginals reproduce label counts") {
  std::mt19937 rng(17);
  const auto y_true = random_labels(rng, 60, 3);
  const auto y_pred = random_labels(rng, 60, 3);
  const ConfusionMatrix cm = ConfusionMatrix::build(y_true, y_pred);
  CHECK(cm.total() == 60);
  for (std::size_t c = 0; c < cm.classes.size(); ++c) {
    long row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < cm.classes.size(); ++j) {
      row_sum += cm.counts[c][j];
      col_sum += cm.counts[j][c];
    }
    CHECK(row_sum == static_cast<long>(std::count(y_true.begin(), y_true.end(), cm.classes[c])));
    CHECK(col_sum == static_cast<long>(std::count(y_pred.begin(), y_pred.end(), cm.classes[c])));
  }
}

TEST_CASE("cross_validate on separable blobs") {
  const RawTable raw = ltcn::testing::separable_blobs(19, 100, 2);
  const EvalReport report =
      cross_validate(raw, config_with(0.8), DecisionHead::RecurrenceAware, 5, 19, 2);
  CHECK(report.folds.size() == 5);
  CHECK(report.mean_kappa >= 0.9);
  for (const auto& fold : report.folds) {
    CHECK(fold.fit_seconds >= 0.0);
    CHECK(fold.confusion.total() == 40);
  }
}

TEST_CASE("cross_validate on shuffled labels stays near chance") {
  const RawTable raw = ltcn::testing::shuffled_labels(23, 200, 3);
  const EvalReport report =
      cross_validate(raw, config_with(0.8), DecisionHead::RecurrenceAware, 5, 23);
  CHECK(report.mean_kappa >= -0.2);
  CHECK(report.mean_kappa <= 0.2);
}

TEST_CASE("cross_validate is deterministic and job-count independent") {
  const RawTable raw = ltcn::testing::separable_blobs(29, 60, 2);
  const EvalReport a =
      cross_validate(raw, config_with(0.6), DecisionHead::RecurrenceAware, 5, 29, 1);
  const EvalReport b =
      cross_validate(raw, config_with(0.6), DecisionHead::RecurrenceAware, 5, 29, 4);
  REQUIRE(a.folds.size() == b.folds.size());
  for (std::size_t f = 0; f < a.folds.size(); ++f) {
    CHECK(a.folds[f].kappa == b.folds[f].kappa);
    CHECK(a.folds[f].accuracy == b.folds[f].accuracy);
    CHECK(a.folds[f].iterations == b.folds[f].iterations);
  }
}

TEST_CASE("test statistics are unchanged by training-row order") {
  const RawTable raw = ltcn::testing::separable_blobs(31, 80, 2);
  const FoldPlan plan = make_folds(raw.labels, 4, 31);
  const auto train_rows = plan.train_indices(0);
  const auto test_rows = plan.test_indices(0);

  auto predictions_with = [&](const std::vector<Index>& rows) {
    const TransferFunction tf(TransferKind::Sigmoid);
    const Dataset train = build_dataset(raw, tf, rows);
    const LtcnModel model = fit(train, config_with(0.7), DecisionHead::RecurrenceAware);
    Matrix X_test(static_cast<Index>(test_rows.size()), raw.cols());
    for (std::size_t i = 0; i < test_rows.size(); ++i)
      X_test.row(static_cast<Index>(i)) = raw.features.row(test_rows[i]);
    return predict_class(model, scale_features(model, X_test));
  };

  std::vector<Index> permuted = train_rows;
  std::mt19937 rng(33);
  std::shuffle(permuted.begin(), permuted.end(), rng);
  REQUIRE(permuted != train_rows);
  CHECK(predictions_with(train_rows) == predictions_with(permuted));
}

TEST_CASE("grid_search") {
  SUBCASE("single cell reduces to cross_validate") {
    const RawTable raw = ltcn::testing::separable_blobs(37, 50, 2);
    const GridSearchResult grid =
        grid_search(raw, {0.5}, {TransferKind::Sigmoid}, 10, 3, 37);
    const EvalReport direct =
        cross_validate(raw, config_with(0.5, 10), DecisionHead::RecurrenceAware, 3, 37);
    REQUIRE(grid.outer.folds.size() == direct.folds.size());
    for (std::size_t f = 0; f < direct.folds.size(); ++f) {
      CHECK(grid.outer.folds[f].kappa == direct.folds[f].kappa);
      CHECK(grid.outer.folds[f].accuracy == direct.folds[f].accuracy);
    }
    CHECK(grid.best_phi == 0.5);
  }
  SUBCASE("ties prefer the smaller phi: linear problem selects phi=0") {
    const RawTable raw = ltcn::testing::separable_blobs(41, 60, 2);
    const GridSearchResult grid =
        grid_search(raw, {0.0, 0.5}, {TransferKind::Sigmoid}, 10, 3, 41);
    // Both cells separate perfectly; the tie goes to the linear model.
    CHECK(grid.best_phi == 0.0);
    for (const auto& cell : grid.cells) CHECK(cell.mean_kappa == 1.0);
  }
  SUBCASE("XOR-like problem selects phi > 0 with a clear margin") {
    const RawTable raw = ltcn::testing::xor_blobs(43, 40);
    const GridSearchResult grid =
        grid_search(raw, {0.0, 0.5}, {TransferKind::Sigmoid}, 20, 3, 43, 2);
    CHECK(grid.best_phi > 0.0);
    double phi0 = -2.0, best = -2.0;
    for (const auto& cell : grid.cells) {
      if (cell.phi == 0.0) phi0 = std::max(phi0, cell.mean_kappa);
      if (cell.phi == grid.best_phi) best = cell.mean_kappa;
    }
    CHECK(best >= phi0 + 0.1);
  }
  SUBCASE("empty grids are rejected") {
    const RawTable raw = ltcn::testing::separable_blobs(47, 20, 2);
    CHECK_THROWS_AS(grid_search(raw, {}, {TransferKind::Sigmoid}, 10, 3, 47),
                    std::invalid_argument);
  }
}

TEST_CASE("compare_decision_heads") {
  SUBCASE("collapsing synthetic shows the head gap") {
    const RawTable raw = ltcn::testing::collapsing_set(53, 100);
    const HeadComparison cmp = compare_decision_heads(raw, config_with(1.0), 5, 53, 2);
    CHECK(cmp.last_state.mean_kappa <= 0.05);
    CHECK(cmp.recurrence.mean_kappa >= 0.8);
    for (const auto& fold : cmp.recurrence.folds)
      CHECK(fold.attractor.kind == AttractorKind::FixedPoint);
  }
  SUBCASE("phi=0 makes both heads identical") {
    const RawTable raw = ltcn::testing::separable_blobs(59, 60, 2);
    const HeadComparison cmp = compare_decision_heads(raw, config_with(0.0), 4, 59);
    REQUIRE(cmp.recurrence.folds.size() == cmp.last_state.folds.size());
    for (std::size_t f = 0; f < cmp.recurrence.folds.size(); ++f) {
      CHECK(cmp.recurrence.folds[f].kappa == cmp.last_state.folds[f].kappa);
      CHECK(cmp.recurrence.folds[f].confusion.counts ==
            cmp.last_state.folds[f].confusion.counts);
    }
  }
  SUBCASE("easy non-collapsing data is fine for both heads") {
    const RawTable raw = ltcn::testing::separable_blobs(61, 80, 2);
    const HeadComparison cmp = compare_decision_heads(raw, config_with(0.5), 5, 61);
    CHECK(cmp.recurrence.mean_kappa >= 0.8);
    CHECK(cmp.last_state.mean_kappa >= 0.8);
  }
}

TEST_CASE("sweep covers the phi x iterations grid") {
  const RawTable raw = ltcn::testing::separable_blobs(67, 40, 2);
  const auto cells = sweep(raw, {0.0, 0.8}, {5, 20}, TransferKind::Sigmoid,
                           DecisionHead::RecurrenceAware, 1e-5, 3, 67, 2);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].phi == 0.0);
  CHECK(cells[0].max_iterations == 5);
  CHECK(cells[3].phi == 0.8);
  CHECK(cells[3].max_iterations == 20);
  for (const auto& cell : cells) CHECK(cell.report.folds.size() == 3);
}
