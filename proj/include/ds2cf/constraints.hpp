#ifndef DS2CF_CONSTRAINTS_HPP
#define DS2CF_CONSTRAINTS_HPP

#include "ds2cf/data_model.hpp"
#include "ds2cf/types.hpp"

namespace ds2cf::constraints {

// Block-diagonal label constraint A = [A_L 0; 0 A_U] of fixed width 2c.
// A_L rows are one-hot; A_U rows are nonnegative and sum to one.
struct LabelConstraint {
  Matrix a_labeled;    // l x c
  Matrix a_unlabeled;  // u x c
  Matrix assembled;    // (l+u) x 2c
};

// Block-diagonal structure constraint Q = [Q_L 0; 0 Q_U].
// Q_L is fixed by the labels; Q_U tracks the representation.
struct StructureConstraint {
  Matrix q_labeled;    // l x l all-ones class blocks
  Matrix q_unlabeled;  // u x u clipped cosine similarities, unit diagonal
  Matrix assembled;    // (l+u) x (l+u)
};

// a.b / (|a||b|); 0 when either vector is zero.
double cosine_similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

// Symmetric matrix of pairwise cosines of the rows of m, clipped to [0,1],
// with unit diagonal. A zero row is similar only to itself.
Matrix clipped_cosine_rows(const Matrix& m);

// One-hot l x c indicator, rows ordered as the split's labeled indices.
Matrix build_label_indicator(const data::SemiSupervisedSplit& split);

struct SoftLabels {
  Matrix values;          // u x c, row-stochastic
  int fallback_rows = 0;  // rows whose clipped sum was zero
};

// Clips raw scores at zero and scales each row to sum to one; an all-zero
// row falls back to the uniform distribution.
SoftLabels normalize_soft_labels(const Matrix& raw_scores);

LabelConstraint assemble_label_constraint(const Matrix& a_labeled, const Matrix& a_unlabeled);

// Q_L: all-ones blocks, one per class, sizes given by the per-class labeled counts.
Matrix build_structure_constraint_labeled(const data::SemiSupervisedSplit& split);

// Q_U from the unlabeled rows of the current representation.
Matrix update_structure_constraint_unlabeled(const Matrix& v_unlabeled);

StructureConstraint assemble_structure_constraint(const Matrix& q_labeled,
                                                  const Matrix& q_unlabeled);

}  // namespace ds2cf::constraints

#endif
