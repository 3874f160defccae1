#pragma once

#include <string>
#include <vector>

#include "ltcn/dataset.hpp"
#include "ltcn/dynamics.hpp"
#include "ltcn/learning.hpp"

namespace ltcn {

enum class DecisionHead { RecurrenceAware, LastStateOnly };

DecisionHead decision_head_from_string(std::string_view name);
std::string to_string(DecisionHead head);

/// Fitted classifier. Immutable after fitting; safe to share across threads.
struct LtcnModel {
  InnerWeights inner;
  OuterWeights outer;
  ReasoningConfig config;
  std::vector<std::string> classes;
  MinMaxScaler scaler;
  std::vector<std::string> feature_names;
  DecisionHead head = DecisionHead::RecurrenceAware;
  Attractor attractor; // fit-time dynamics classification

  Index feature_count() const { return inner.W.rows(); }
  Index class_count() const { return static_cast<Index>(classes.size()); }
};

/// Two-step fit: unsupervised inner weights, recurrent reasoning over the
/// training batch, then the pseudoinverse fit of the decision weights on the
/// concatenated states (or on the last state only).
LtcnModel fit(const Dataset& train, const ReasoningConfig& config, DecisionHead head);

/// Same, with caller-provided inner weights (the unsupervised step skipped).
LtcnModel fit_with_inner(const Dataset& train, const ReasoningConfig& config,
                         DecisionHead head, InnerWeights inner);

/// Raw decision scores for already-scaled inputs. The recurrence runs for
/// exactly the fit-time iteration count so the design matrix matches R.
/// Scores are returned before the transfer function; argmax is unaffected
/// because the transfer is strictly monotone.
Matrix predict_scores(const LtcnModel& model, const Matrix& X_scaled);

std::vector<std::string> predict_class(const LtcnModel& model, const Matrix& X_scaled);

/// Apply the stored scaler to raw (unnormalized) inputs.
Matrix scale_features(const LtcnModel& model, const Matrix& X_raw);

/// Row-wise argmax mapped to class names; ties go to the lowest class index.
std::vector<std::string> argmax_classes(const Matrix& scores,
                                        const std::vector<std::string>& classes);

struct RelevanceEntry {
  std::string feature;
  double score = 0.0;
  double inner_component = 0.0;
  double outer_component = 0.0;
};

/// Feature relevance scores, sorted descending.
struct RelevanceReport {
  std::vector<RelevanceEntry> scores;
};

/// Sum of absolute outgoing inner weights (row i of W) plus absolute outer
/// weights of feature i across all temporal blocks. Biases excluded.
/// Requires the recurrence-aware head.
RelevanceReport relevance(const LtcnModel& model);

/// Versioned JSON model file; round-trips weights exactly.
void save(const LtcnModel& model, const std::string& path);
LtcnModel load(const std::string& path);

} // namespace ltcn
