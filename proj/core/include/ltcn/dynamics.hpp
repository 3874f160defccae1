#pragma once

#include <string>
#include <vector>

#include "ltcn/transfer.hpp"
#include "ltcn/types.hpp"

namespace ltcn {

/// Parameters of the recurrent reasoning process.
struct ReasoningConfig {
  double phi = 0.8;          // nonlinearity coefficient in [0,1]
  int max_iterations = 20;   // T
  double tolerance = 1e-5;   // max-abs convergence threshold
  int cycle_window = 10;     // how far back to look for cycles
  TransferFunction tf{TransferKind::Sigmoid};

  void validate() const;
};

enum class AttractorKind { FixedPoint, LimitCycle, NonConvergent };

struct Attractor {
  AttractorKind kind = AttractorKind::NonConvergent;
  int t_alpha = 0; // iteration at which the attractor was detected
  int period = 0;  // limit cycles only
};

std::string to_string(AttractorKind kind);
std::string to_string(const Attractor& a);

/// Batch of temporal states A(0)..A(s) plus the attractor classification.
struct StateHistory {
  std::vector<Matrix> states;
  Attractor attractor;

  Index iterations() const { return static_cast<Index>(states.size()) - 1; } // s
};

/// One application of the quasi-nonlinear rule:
/// phi * f(prev * W + B) + (1 - phi) * initial.
Matrix step(const Matrix& prev, const Matrix& initial, const Matrix& W,
            const RowVector& B, double phi, const TransferFunction& tf);

/// Iterate from A(0)=X, stopping early on a fixed point or limit cycle.
/// The state that triggers detection is the last one appended.
StateHistory run(const Matrix& X, const Matrix& W, const RowVector& B,
                 const ReasoningConfig& config);

/// Iterate exactly `iterations` steps with no early stopping (used at
/// predict time so the design matrix width matches the fit).
std::vector<Matrix> run_fixed_iterations(const Matrix& X, const Matrix& W,
                                         const RowVector& B, double phi,
                                         const TransferFunction& tf, Index iterations);

/// Classify a recorded trajectory: fixed point if the last two states match
/// within the tolerance, else the smallest cycle period within the window,
/// else non-convergent.
Attractor classify_attractor(const std::vector<Matrix>& states, double tolerance,
                             int cycle_window);

/// Column-wise concatenation [A(0) | A(1) | ... | A(s)].
Matrix concat_states(const std::vector<Matrix>& states);
Matrix concat_history(const StateHistory& history);

} // namespace ltcn
