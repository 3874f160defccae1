#include "ltcn/learning.hpp"

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

namespace ltcn {

namespace {

constexpr double kGramConditionLimit = 1e12;

struct ThinSvd {
  Matrix U;
  Matrix V;
  Vector singular;
};

// Thin SVD with a QR reduction for tall matrices. For H = Q * Rt with Q of
// orthonormal columns, H = (Q*Ur) * S * V^T is an SVD of H, so the singular
// values and the cutoff semantics are those of H itself.
ThinSvd thin_svd_tall(const Matrix& H) {
  const Index rows = H.rows(), cols = H.cols();
  if (rows > cols) {
    Eigen::HouseholderQR<Matrix> qr(H);
    Matrix rt = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Matrix> svd(rt, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix padded = Matrix::Zero(rows, cols);
    padded.topRows(cols) = svd.matrixU();
    return {qr.householderQ() * padded, svd.matrixV(), svd.singularValues()};
  }
  Eigen::BDCSVD<Matrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

// Least squares for one inner regression. Normal equations when the Gram
// matrix is well conditioned, pseudoinverse fallback otherwise.
Vector solve_least_squares(const Matrix& A, const Vector& b) {
  const Matrix gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> eigen(gram);
  const double lo = eigen.eigenvalues().minCoeff();
  const double hi = eigen.eigenvalues().maxCoeff();
  if (lo > 0.0 && hi / lo < kGramConditionLimit)
    return gram.ldlt().solve(A.transpose() * b);
  return PseudoInverse(A).solve(b);
}

} // namespace

InnerWeights fit_inner(const Matrix& X, const TransferFunction& tf) {
  const Index rows = X.rows(), features = X.cols();
  if (rows < 2) throw std::invalid_argument("fit_inner needs at least 2 rows");
  if (features < 1) throw std::invalid_argument("fit_inner needs at least 1 feature");
  if (!X.allFinite()) throw std::invalid_argument("fit_inner input has non-finite entries");

  const Matrix targets = tf.inverse(tf.clip(X));
  if (!targets.allFinite())
    throw std::logic_error("non-finite regression target after inverse transfer");

  InnerWeights inner;
  inner.W = Matrix::Zero(features, features);
  inner.B = RowVector::Zero(features);

  if (features == 1) {
    inner.B(0) = targets.col(0).mean();
    return inner;
  }

  Matrix regressors(rows, features); // [1 | X without column i]
  regressors.col(0).setOnes();
  for (Index i = 0; i < features; ++i) {
    Index out = 1;
    for (Index j = 0; j < features; ++j) {
      if (j == i) continue;
      regressors.col(out++) = X.col(j);
    }
    const Vector beta = solve_least_squares(regressors, targets.col(i));
    inner.B(i) = beta(0);
    Index in = 1;
    for (Index j = 0; j < features; ++j) {
      if (j == i) continue;
      inner.W(j, i) = beta(in++);
    }
  }
  return inner;
}

PseudoInverse::PseudoInverse(const Matrix& H) {
  if (H.size() == 0) throw std::invalid_argument("pseudoinverse of an empty matrix");
  if (!H.allFinite()) throw std::invalid_argument("pseudoinverse input has non-finite entries");

  const bool wide = H.rows() < H.cols();
  const ThinSvd svd = wide ? thin_svd_tall(H.transpose()) : thin_svd_tall(H);

  sigma_max_ = svd.singular.size() > 0 ? svd.singular(0) : 0.0;
  const double rcond =
      static_cast<double>(std::max(H.rows(), H.cols())) * std::numeric_limits<double>::epsilon();
  cutoff_ = rcond * sigma_max_;

  Index rank = 0;
  while (rank < svd.singular.size() && svd.singular(rank) > cutoff_) ++rank;

  inv_singular_ = svd.singular.head(rank).cwiseInverse();
  if (wide) {
    left_ = svd.V.leftCols(rank);  // U of H
    right_ = svd.U.leftCols(rank); // V of H
  } else {
    left_ = svd.U.leftCols(rank);
    right_ = svd.V.leftCols(rank);
  }
}

Matrix PseudoInverse::matrix() const {
  return right_ * inv_singular_.asDiagonal() * left_.transpose();
}

Matrix PseudoInverse::solve(const Matrix& Z) const {
  if (Z.rows() != left_.rows())
    throw std::invalid_argument("pseudoinverse solve: row count mismatch");
  return right_ * (inv_singular_.asDiagonal() * (left_.transpose() * Z));
}

Matrix pinv(const Matrix& H) { return PseudoInverse(H).matrix(); }

OuterWeights fit_outer(const Matrix& H, const Matrix& Y, const TransferFunction& tf) {
  if (H.rows() != Y.rows())
    throw std::invalid_argument("fit_outer: H has " + std::to_string(H.rows()) +
                                " rows but Y has " + std::to_string(Y.rows()));
  if (!H.allFinite()) throw std::invalid_argument("fit_outer: H has non-finite entries");

  Matrix augmented(H.rows(), H.cols() + 1);
  augmented << H, Matrix::Ones(H.rows(), 1);

  const Matrix theta = PseudoInverse(augmented).solve(tf.inverse(Y));

  OuterWeights outer;
  outer.R = theta.topRows(H.cols());
  outer.Q = theta.row(H.cols());
  return outer;
}

} // namespace ltcn
