#include "ds2cf/label_predictor.hpp"

#include <cmath>

namespace ds2cf::predictor {

namespace {

Matrix solve_spd(const Matrix& lhs, const Matrix& rhs) {
  require(lhs.allFinite() && rhs.allFinite(), Error::Kind::numeric,
          "non-finite entries in the predictor system");
  Eigen::LDLT<Matrix> ldlt(lhs);
  require(ldlt.info() == Eigen::Success, Error::Kind::numeric,
          "predictor normal equations are not positive definite");
  return ldlt.solve(rhs);
}

}  // namespace

LabelPredictor init_predictor(const Matrix& x_labeled, const Matrix& a_labeled) {
  const int d = static_cast<int>(x_labeled.rows());
  Matrix lhs = x_labeled * x_labeled.transpose() + Matrix::Identity(d, d);
  LabelPredictor out;
  out.p = solve_spd(lhs, x_labeled * a_labeled);
  out.b_diag = Vector::Ones(d);
  return out;
}

Vector update_row_sparsity_weights(const Matrix& p) {
  Vector b(p.rows());
  for (int i = 0; i < p.rows(); ++i) b(i) = 1.0 / (2.0 * std::max(p.row(i).norm(), kEpsilonRow));
  return b;
}

Matrix update_predictor(const Matrix& x, const Matrix& x_labeled, const Matrix& a_labeled,
                        const Matrix& r_coef, const Vector& b_diag) {
  const int n = static_cast<int>(x.cols());
  require(r_coef.rows() == n && r_coef.cols() == n, Error::Kind::invalid_argument,
          "coefficient matrix must be N x N");
  Matrix residual = Matrix::Identity(n, n) - r_coef;
  Matrix h = residual * residual.transpose();
  Matrix lhs = x_labeled * x_labeled.transpose() + x * h * x.transpose();
  lhs.diagonal() += b_diag;
  return solve_spd(lhs, x_labeled * a_labeled);
}

Matrix predict_soft_labels(const Matrix& x_unlabeled, const Matrix& p) {
  return x_unlabeled.transpose() * p;
}

double predictor_objective(const Matrix& p, const Matrix& x, const Matrix& x_labeled,
                           const Matrix& a_labeled, const Matrix& r_coef, const Vector& b_diag) {
  const int n = static_cast<int>(x.cols());
  const Matrix residual = Matrix::Identity(n, n) - r_coef;
  const double fit = (a_labeled - x_labeled.transpose() * p).squaredNorm();
  const double smooth = (p.transpose() * x * residual).squaredNorm();
  double penalty = 0.0;
  for (int i = 0; i < p.rows(); ++i) penalty += b_diag(i) * p.row(i).squaredNorm();
  return fit + smooth + penalty;
}

double l21_norm(const Matrix& p) {
  double total = 0.0;
  for (int i = 0; i < p.rows(); ++i) total += p.row(i).norm();
  return total;
}

double l21_norm_smoothed(const Matrix& p) {
  double total = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    const double r = p.row(i).norm();
    total += r >= kEpsilonRow ? r : r * r / (2.0 * kEpsilonRow) + kEpsilonRow / 2.0;
  }
  return total;
}

}  // namespace ds2cf::predictor
