#include "ltcn/dynamics.hpp"

#include <stdexcept>

namespace ltcn {

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

void check_shapes(const Matrix& prev, const Matrix& initial, const Matrix& W,
                  const RowVector& B) {
  if (W.rows() != W.cols()) throw std::invalid_argument("weight matrix W must be square");
  if (prev.cols() != W.rows())
    throw std::invalid_argument("state has " + std::to_string(prev.cols()) +
                                " columns but W is " + std::to_string(W.rows()) + "x" +
                                std::to_string(W.cols()));
  if (B.cols() != W.cols()) throw std::invalid_argument("bias B must have one entry per neuron");
  if (initial.rows() != prev.rows() || initial.cols() != prev.cols())
    throw std::invalid_argument("initial state shape does not match current state");
}

void check_activation_range(const Matrix& X, const TransferFunction& tf) {
  if (X.size() == 0) return;
  if (!X.allFinite() || X.minCoeff() < tf.range_low() || X.maxCoeff() > tf.range_high())
    throw std::invalid_argument("initial activations outside the transfer range [" +
                                std::to_string(tf.range_low()) + ", " +
                                std::to_string(tf.range_high()) + "]");
}

} // namespace

void ReasoningConfig::validate() const {
  if (!(phi >= 0.0 && phi <= 1.0))
    throw std::invalid_argument("phi must be in [0,1], got " + std::to_string(phi));
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cycle_window < 1) throw std::invalid_argument("cycle_window must be >= 1");
}

std::string to_string(AttractorKind kind) {
  switch (kind) {
    case AttractorKind::FixedPoint: return "fixed_point";
    case AttractorKind::LimitCycle: return "limit_cycle";
    default: return "non_convergent";
  }
}

std::string to_string(const Attractor& a) {
  switch (a.kind) {
    case AttractorKind::FixedPoint:
      return "fixed_point(t=" + std::to_string(a.t_alpha) + ")";
    case AttractorKind::LimitCycle:
      return "limit_cycle(t=" + std::to_string(a.t_alpha) + ", P=" + std::to_string(a.period) + ")";
    default: return "non_convergent";
  }
}

Matrix step(const Matrix& prev, const Matrix& initial, const Matrix& W,
            const RowVector& B, double phi, const TransferFunction& tf) {
  check_shapes(prev, initial, W, B);
  Matrix z = prev * W;
  z.rowwise() += B;
  return phi * tf.forward(z) + (1.0 - phi) * initial;
}

StateHistory run(const Matrix& X, const Matrix& W, const RowVector& B,
                 const ReasoningConfig& config) {
  config.validate();
  check_activation_range(X, config.tf);

  StateHistory history;
  history.states.push_back(X);

  for (int t = 1; t <= config.max_iterations; ++t) {
    Matrix next = step(history.states.back(), X, W, B, config.phi, config.tf);
    if (!next.allFinite())
      throw std::runtime_error("non-finite state at iteration " + std::to_string(t) +
                               " (divergent weights)");
    history.states.push_back(std::move(next));

    const Matrix& current = history.states.back();
    if (max_abs_diff(current, history.states[static_cast<std::size_t>(t) - 1]) <=
        config.tolerance) {
      history.attractor = {AttractorKind::FixedPoint, t, 0};
      return history;
    }
    const int max_period = std::min(config.cycle_window, t);
    for (int period = 2; period <= max_period; ++period) {
      if (max_abs_diff(current, history.states[static_cast<std::size_t>(t - period)]) <=
          config.tolerance) {
        history.attractor = {AttractorKind::LimitCycle, t, period};
        return history;
      }
    }
  }
  history.attractor = {AttractorKind::NonConvergent, 0, 0};
  return history;
}

std::vector<Matrix> run_fixed_iterations(const Matrix& X, const Matrix& W,
                                         const RowVector& B, double phi,
                                         const TransferFunction& tf, Index iterations) {
  check_activation_range(X, tf);
  std::vector<Matrix> states;
  states.push_back(X);
  for (Index t = 0; t < iterations; ++t) {
    Matrix next = step(states.back(), X, W, B, phi, tf);
    if (!next.allFinite())
      throw std::runtime_error("non-finite state at iteration " + std::to_string(t + 1) +
                               " (divergent weights)");
    states.push_back(std::move(next));
  }
  return states;
}

Attractor classify_attractor(const std::vector<Matrix>& states, double tolerance,
                             int cycle_window) {
  if (states.size() < 2)
    throw std::invalid_argument("attractor classification needs at least 2 states");
  const int last = static_cast<int>(states.size()) - 1;
  if (max_abs_diff(states[static_cast<std::size_t>(last)],
                   states[static_cast<std::size_t>(last) - 1]) <= tolerance)
    return {AttractorKind::FixedPoint, last, 0};
  const int max_period = std::min(cycle_window, last);
  for (int period = 2; period <= max_period; ++period) {
    if (max_abs_diff(states[static_cast<std::size_t>(last)],
                     states[static_cast<std::size_t>(last - period)]) <= tolerance)
      return {AttractorKind::LimitCycle, last, period};
  }
  return {AttractorKind::NonConvergent, 0, 0};
}

Matrix concat_states(const std::vector<Matrix>& states) {
  if (states.empty()) throw std::invalid_argument("cannot concatenate an empty history");
  const Index rows = states.front().rows();
  const Index width = states.front().cols();
  Matrix H(rows, width * static_cast<Index>(states.size()));
  for (std::size_t t = 0; t < states.size(); ++t)
    H.middleCols(static_cast<Index>(t) * width, width) = states[t];
  return H;
}

Matrix concat_history(const StateHistory& history) { return concat_states(history.states); }

} // namespace ltcn
