#include "ds2cf/constraints.hpp"

#include <algorithm>

namespace ds2cf::constraints {

double cosine_similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

Matrix clipped_cosine_rows(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Vector norms(n);
  for (int i = 0; i < n; ++i) norms(i) = m.row(i).norm();
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      if (norms(i) > 0.0 && norms(j) > 0.0)
        s = std::clamp(m.row(i).dot(m.row(j)) / (norms(i) * norms(j)), 0.0, 1.0);
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

Matrix build_label_indicator(const data::SemiSupervisedSplit& split) {
  const int l = split.labeled_count();
  const int c = split.num_classes;
  Matrix a = Matrix::Zero(l, c);
  for (int i = 0; i < l; ++i) {
    const int cls = split.labels[i];
    require(cls >= 1 && cls <= c, Error::Kind::invalid_argument,
            "label out of range in split at row " + std::to_string(i + 1));
    a(i, cls - 1) = 1.0;
  }
  return a;
}

SoftLabels normalize_soft_labels(const Matrix& raw_scores) {
  const int u = static_cast<int>(raw_scores.rows());
  const int c = static_cast<int>(raw_scores.cols());
  SoftLabels out;
  out.values = raw_scores.cwiseMax(0.0);
  for (int i = 0; i < u; ++i) {
    const double sum = out.values.row(i).sum();
    if (sum > 0.0) {
      out.values.row(i) /= sum;
    } else {
      out.values.row(i).setConstant(1.0 / c);
      ++out.fallback_rows;
    }
  }
  return out;
}

LabelConstraint assemble_label_constraint(const Matrix& a_labeled, const Matrix& a_unlabeled) {
  require(a_unlabeled.rows() == 0 || a_labeled.cols() == a_unlabeled.cols(),
          Error::Kind::invalid_argument, "label blocks disagree on the class count");
  const int l = static_cast<int>(a_labeled.rows());
  const int u = static_cast<int>(a_unlabeled.rows());
  const int c = static_cast<int>(a_labeled.cols());
  LabelConstraint out;
  out.a_labeled = a_labeled;
  out.a_unlabeled = a_unlabeled;
  out.assembled = Matrix::Zero(l + u, 2 * c);
  out.assembled.topLeftCorner(l, c) = a_labeled;
  if (u > 0) out.assembled.bottomRightCorner(u, c) = a_unlabeled;
  return out;
}

Matrix build_structure_constraint_labeled(const data::SemiSupervisedSplit& split) {
  const int l = split.labeled_count();
  Matrix q = Matrix::Zero(l, l);
  int start = 0;
  while (start < l) {
    int end = start;
    while (end < l && split.labels[end] == split.labels[start]) ++end;
    q.block(start, start, end - start, end - start).setOnes();
    start = end;
  }
  return q;
}

Matrix update_structure_constraint_unlabeled(const Matrix& v_unlabeled) {
  return clipped_cosine_rows(v_unlabeled);
}

StructureConstraint assemble_structure_constraint(const Matrix& q_labeled,
                                                  const Matrix& q_unlabeled) {
  const int l = static_cast<int>(q_labeled.rows());
  const int u = static_cast<int>(q_unlabeled.rows());
  StructureConstraint out;
  out.q_labeled = q_labeled;
  out.q_unlabeled = q_unlabeled;
  out.assembled = Matrix::Zero(l + u, l + u);
  out.assembled.topLeftCorner(l, l) = q_labeled;
  if (u > 0) out.assembled.bottomRightCorner(u, u) = q_unlabeled;
  return out;
}

}  // namespace ds2cf::constraints
