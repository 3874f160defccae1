#pragma once

#include "ltcn/transfer.hpp"
#include "ltcn/types.hpp"

namespace ltcn {

/// Feature-to-feature weights learned without supervision. The diagonal of W
/// is exactly zero: the regression for neuron i never sees column i.
struct InnerWeights {
  Matrix W;    // M x M
  RowVector B; // 1 x M
};

/// Weights connecting temporal state blocks to the decision neurons.
/// R stacks one M-row block per recorded state A(0)..A(s).
struct OuterWeights {
  Matrix R;            // (M*(s+1)) x N, or M x N for the last-state head
  RowVector Q;         // 1 x N
  Index iterations = 0; // s actually performed at fit time
};

/// Per-feature least squares: regress f^-1(clip(X_i)) on [1 | X without
/// column i]. Solved by normal equations while the Gram matrix is well
/// conditioned, by pseudoinverse otherwise.
InnerWeights fit_inner(const Matrix& X, const TransferFunction& tf);

/// Moore-Penrose pseudoinverse via SVD, with singular values at or below
/// max(rows,cols) * machine-epsilon * sigma_max treated as zero. Tall inputs
/// are first reduced by a QR factorization (the triangular factor has the
/// same singular values, and pinv(Q*Rt) = pinv(Rt)*Q^T); wide inputs go
/// through the transpose.
class PseudoInverse {
 public:
  explicit PseudoInverse(const Matrix& H);

  /// Materialize the cols(H) x rows(H) pseudoinverse.
  Matrix matrix() const;

  /// pinv(H) * Z without materializing the pseudoinverse.
  Matrix solve(const Matrix& Z) const;

  Index rank() const { return inv_singular_.size(); }
  double max_singular_value() const { return sigma_max_; }
  double cutoff() const { return cutoff_; }

 private:
  Matrix left_;          // rows(H) x rank
  Matrix right_;         // cols(H) x rank
  Vector inv_singular_;  // rank
  double sigma_max_ = 0.0;
  double cutoff_ = 0.0;
};

Matrix pinv(const Matrix& H);

/// Supervised step: augment H with a ones column and solve
/// [R; Q] = pinv([H | 1]) * f^-1(Y). The caller records s in `iterations`.
OuterWeights fit_outer(const Matrix& H, const Matrix& Y, const TransferFunction& tf);

} // namespace ltcn
