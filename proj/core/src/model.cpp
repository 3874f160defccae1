#include "ltcn/model.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ltcn/version.hpp"

namespace ltcn {

using nlohmann::json;

DecisionHead decision_head_from_string(std::string_view name) {
  if (name == "recurrence") return DecisionHead::RecurrenceAware;
  if (name == "laststate") return DecisionHead::LastStateOnly;
  throw std::invalid_argument("unknown decision head '" + std::string(name) +
                              "' (expected recurrence or laststate)");
}

std::string to_string(DecisionHead head) {
  return head == DecisionHead::RecurrenceAware ? "recurrence" : "laststate";
}

LtcnModel fit(const Dataset& train, const ReasoningConfig& config, DecisionHead head) {
  return fit_with_inner(train, config, head, fit_inner(train.X, config.tf));
}

LtcnModel fit_with_inner(const Dataset& train, const ReasoningConfig& config,
                         DecisionHead head, InnerWeights inner) {
  config.validate();
  if (train.rows() < 2) throw std::invalid_argument("fit needs at least 2 rows");
  if (inner.W.rows() != train.feature_count())
    throw std::invalid_argument("inner weights do not match the feature count");

  StateHistory history = run(train.X, inner.W, inner.B, config);
  const Matrix H = head == DecisionHead::RecurrenceAware ? concat_history(history)
                                                         : history.states.back();
  OuterWeights outer = fit_outer(H, train.Y, config.tf);
  outer.iterations = history.iterations();

  LtcnModel model;
  model.inner = std::move(inner);
  model.outer = std::move(outer);
  model.config = config;
  model.classes = train.classes;
  model.scaler = train.scaler;
  model.feature_names = train.feature_names;
  model.head = head;
  model.attractor = history.attractor;
  return model;
}

Matrix predict_scores(const LtcnModel& model, const Matrix& X_scaled) {
  if (X_scaled.cols() != model.feature_count())
    throw std::invalid_argument("expected " + std::to_string(model.feature_count()) +
                                " features, got " + std::to_string(X_scaled.cols()));
  const auto states =
      run_fixed_iterations(X_scaled, model.inner.W, model.inner.B, model.config.phi,
                           model.config.tf, model.outer.iterations);
  const Matrix H = model.head == DecisionHead::RecurrenceAware ? concat_states(states)
                                                               : states.back();
  Matrix scores = H * model.outer.R;
  scores.rowwise() += model.outer.Q;
  return scores;
}

std::vector<std::string> argmax_classes(const Matrix& scores,
                                        const std::vector<std::string>& classes) {
  if (scores.cols() != static_cast<Index>(classes.size()))
    throw std::invalid_argument("score column count does not match class count");
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(scores.rows()));
  for (Index r = 0; r < scores.rows(); ++r) {
    Index best = 0;
    for (Index c = 1; c < scores.cols(); ++c)
      if (scores(r, c) > scores(r, best)) best = c;
    out.push_back(classes[static_cast<std::size_t>(best)]);
  }
  return out;
}

std::vector<std::string> predict_class(const LtcnModel& model, const Matrix& X_scaled) {
  return argmax_classes(predict_scores(model, X_scaled), model.classes);
}

Matrix scale_features(const LtcnModel& model, const Matrix& X_raw) {
  return model.scaler.transform(X_raw);
}

RelevanceReport relevance(const LtcnModel& model) {
  if (model.head != DecisionHead::RecurrenceAware)
    throw std::logic_error("relevance requires the recurrence-aware head");

  const Index features = model.feature_count();
  const Index blocks = model.outer.iterations + 1;
  RelevanceReport report;
  report.scores.reserve(static_cast<std::size_t>(features));
  for (Index i = 0; i < features; ++i) {
    RelevanceEntry entry;
    entry.feature = model.feature_names[static_cast<std::size_t>(i)];
    // Left-to-right scalar sums keep the result reproducible bit for bit.
    for (Index j = 0; j < features; ++j)
      entry.inner_component += std::abs(model.inner.W(i, j));
    for (Index t = 0; t < blocks; ++t)
      for (Index j = 0; j < model.outer.R.cols(); ++j)
        entry.outer_component += std::abs(model.outer.R(t * features + i, j));
    entry.score = entry.inner_component + entry.outer_component;
    report.scores.push_back(std::move(entry));
  }
  std::stable_sort(report.scores.begin(), report.scores.end(),
                   [](const RelevanceEntry& a, const RelevanceEntry& b) {
                     return a.score > b.score;
                   });
  return report;
}

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json row_vector_to_json(const RowVector& v) {
  json out = json::array();
  for (Index c = 0; c < v.cols(); ++c) out.push_back(v(c));
  return out;
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw std::runtime_error(std::string("model file field '") + field +
                             "' is not a numeric matrix");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (static_cast<Index>(row.size()) != cols)
      throw std::runtime_error(std::string("model file field '") + field + "' is ragged");
    for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

RowVector row_vector_from_json(const json& j, const char* field) {
  if (!j.is_array())
    throw std::runtime_error(std::string("model file field '") + field + "' is not an array");
  RowVector v(static_cast<Index>(j.size()));
  for (Index c = 0; c < v.cols(); ++c) v(c) = j[static_cast<std::size_t>(c)].get<double>();
  return v;
}

const json& require_field(const json& j, const char* field) {
  const auto it = j.find(field);
  if (it == j.end())
    throw std::runtime_error(std::string("model file missing field '") + field + "'");
  return *it;
}

} // namespace

void save(const LtcnModel& model, const std::string& path) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["model"] = "ltcn";
  doc["transfer"] = to_string(model.config.tf.kind());
  doc["epsilon"] = model.config.tf.epsilon();
  doc["phi"] = model.config.phi;
  doc["tolerance"] = model.config.tolerance;
  doc["cycle_window"] = model.config.cycle_window;
  doc["max_iterations"] = model.config.max_iterations;
  doc["iterations_used"] = model.outer.iterations;
  doc["head"] = to_string(model.head);
  doc["classes"] = model.classes;
  doc["feature_names"] = model.feature_names;
  json scaler_min = json::array(), scaler_max = json::array();
  for (const auto& [lo, hi] : model.scaler.bounds()) {
    scaler_min.push_back(lo);
    scaler_max.push_back(hi);
  }
  doc["scaler"] = {{"min", scaler_min}, {"max", scaler_max}};
  doc["inner"] = {{"W", matrix_to_json(model.inner.W)}, {"B", row_vector_to_json(model.inner.B)}};
  doc["outer"] = {{"R", matrix_to_json(model.outer.R)}, {"Q", row_vector_to_json(model.outer.Q)}};
  doc["attractor"] = {{"kind", to_string(model.attractor.kind)},
                      {"t_alpha", model.attractor.t_alpha},
                      {"period", model.attractor.period}};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

LtcnModel load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not a valid model file: " + e.what());
  }

  const int version = require_field(doc, "format_version").get<int>();
  if (version > kModelFormatVersion)
    throw std::runtime_error("model format version " + std::to_string(version) +
                             " is newer than supported version " +
                             std::to_string(kModelFormatVersion));

  LtcnModel model;
  const TransferFunction tf(
      transfer_kind_from_string(require_field(doc, "transfer").get<std::string>()),
      require_field(doc, "epsilon").get<double>());
  model.config.tf = tf;
  model.config.phi = require_field(doc, "phi").get<double>();
  model.config.tolerance = require_field(doc, "tolerance").get<double>();
  model.config.cycle_window = require_field(doc, "cycle_window").get<int>();
  model.config.max_iterations = require_field(doc, "max_iterations").get<int>();
  model.config.validate();
  model.head = decision_head_from_string(require_field(doc, "head").get<std::string>());
  model.classes = require_field(doc, "classes").get<std::vector<std::string>>();
  model.feature_names = require_field(doc, "feature_names").get<std::vector<std::string>>();

  const json& scaler = require_field(doc, "scaler");
  const auto mins = require_field(scaler, "min").get<std::vector<double>>();
  const auto maxs = require_field(scaler, "max").get<std::vector<double>>();
  if (mins.size() != maxs.size())
    throw std::runtime_error("model file scaler min/max lengths differ");
  std::vector<std::pair<double, double>> bounds;
  bounds.reserve(mins.size());
  for (std::size_t i = 0; i < mins.size(); ++i) bounds.emplace_back(mins[i], maxs[i]);
  model.scaler = MinMaxScaler(std::move(bounds));

  const json& inner = require_field(doc, "inner");
  model.inner.W = matrix_from_json(require_field(inner, "W"), "inner.W");
  model.inner.B = row_vector_from_json(require_field(inner, "B"), "inner.B");
  const json& outer = require_field(doc, "outer");
  model.outer.R = matrix_from_json(require_field(outer, "R"), "outer.R");
  model.outer.Q = row_vector_from_json(require_field(outer, "Q"), "outer.Q");
  model.outer.iterations = require_field(doc, "iterations_used").get<Index>();

  if (doc.contains("attractor")) {
    const json& a = doc["attractor"];
    const std::string kind = require_field(a, "kind").get<std::string>();
    model.attractor.kind = kind == "fixed_point"    ? AttractorKind::FixedPoint
                           : kind == "limit_cycle" ? AttractorKind::LimitCycle
                                                   : AttractorKind::NonConvergent;
    model.attractor.t_alpha = require_field(a, "t_alpha").get<int>();
    model.attractor.period = require_field(a, "period").get<int>();
  }

  // Shape consistency before anyone predicts with it.
  const Index features = model.inner.W.rows();
  if (model.inner.W.cols() != features || model.inner.B.cols() != features)
    throw std::runtime_error("model file inner weight shapes are inconsistent");
  const Index expected_rows = model.head == DecisionHead::RecurrenceAware
                                  ? features * (model.outer.iterations + 1)
                                  : features;
  if (model.outer.R.rows() != expected_rows)
    throw std::runtime_error("model file outer weight shape does not match iterations_used");
  if (model.outer.Q.cols() != model.outer.R.cols() ||
      model.outer.R.cols() != model.class_count())
    throw std::runtime_error("model file class count does not match outer weights");
  if (static_cast<Index>(model.feature_names.size()) != features ||
      model.scaler.feature_count() != features)
    throw std::runtime_error("model file feature metadata does not match weights");
  return model;
}

} // namespace ltcn
