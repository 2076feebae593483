#ifndef DS2CF_LABEL_PREDICTOR_HPP
#define DS2CF_LABEL_PREDICTOR_HPP

#include "ds2cf/types.hpp"

namespace ds2cf::predictor {

// Guard for vanishing rows in the L2,1 reweighting.
inline constexpr double kEpsilonRow = 1e-8;

// Robust linear label predictor P (D x c) with the row-sparsity diagonal B.
struct LabelPredictor {
  Matrix p;       // D x c
  Vector b_diag;  // length D, strictly positive
};

// P = (X_L X_L^T + I)^{-1} X_L A_L, B = identity diagonal.
LabelPredictor init_predictor(const Matrix& x_labeled, const Matrix& a_labeled);

// b_i = 1 / (2 max(|p^i|, epsilon)).
Vector update_row_sparsity_weights(const Matrix& p);

// Solves (X_L X_L^T + X H X^T + B) P = X_L A_L with H = (I - R)(I - R)^T.
Matrix update_predictor(const Matrix& x, const Matrix& x_labeled, const Matrix& a_labeled,
                        const Matrix& r_coef, const Vector& b_diag);

// Raw soft scores X_U^T P; normalization lives in the constraints module.
Matrix predict_soft_labels(const Matrix& x_unlabeled, const Matrix& p);

// Fixed-B quadratic the predictor update minimizes:
// |A_L - X_L^T P|_F^2 + |P^T X (I - R)|_F^2 + tr(P^T B P).
double predictor_objective(const Matrix& p, const Matrix& x, const Matrix& x_labeled,
                           const Matrix& a_labeled, const Matrix& r_coef, const Vector& b_diag);

// Sum of row norms.
double l21_norm(const Matrix& p);

// Huber-smoothed variant matching the epsilon-guarded reweighting; equals
// l21_norm whenever every row norm exceeds the guard.
double l21_norm_smoothed(const Matrix& p);

}  // namespace ds2cf::predictor

#endif
