#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ds2cf/constraints.hpp"

using namespace ds2cf;
using namespace ds2cf::constraints;

namespace {

data::SemiSupervisedSplit split_with_labels(const std::vector<int>& labels, int c) {
  data::SemiSupervisedSplit split;
  split.num_classes = c;
  split.labels = labels;
  for (std::size_t i = 0; i < labels.size(); ++i)
    split.labeled_indices.push_back(static_cast<int>(i));
  return split;
}

}  // namespace

TEST_CASE("label indicator writes one-hot rows") {
  const auto split = split_with_labels({1, 2, 1}, 2);
  const Matrix a = build_label_indicator(split);
  Matrix expected(3, 2);
  expected << 1, 0, 0, 1, 1, 0;
  CHECK((a - expected).norm() == 0.0);
}

TEST_CASE("label indicator handles a single sample of the last class") {
  const auto split = split_with_labels({3}, 3);
  const Matrix a = build_label_indicator(split);
  CHECK(a.rows() == 1);
  CHECK(a(0, 0) == 0.0);
  CHECK(a(0, 1) == 0.0);
  CHECK(a(0, 2) == 1.0);
}

TEST_CASE("the nine-sample example has column sums 2,4,3") {
  const auto split = split_with_labels({1, 1, 2, 2, 2, 2, 3, 3, 3}, 3);
  const Matrix a = build_label_indicator(split);
  CHECK(a.colwise().sum()(0) == 2.0);
  CHECK(a.colwise().sum()(1) == 4.0);
  CHECK(a.colwise().sum()(2) == 3.0);
}

TEST_CASE("soft label normalization is proportional") {
  Matrix raw(1, 2);
  raw << 1.0, 3.0;
  const auto soft = normalize_soft_labels(raw);
  CHECK(soft.values(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(soft.values(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(soft.fallback_rows == 0);
}

TEST_CASE("soft label normalization clips negatives before scaling") {
  Matrix raw(1, 2);
  raw << -1.0, 2.0;
  const auto soft = normalize_soft_labels(raw);
  CHECK(soft.values(0, 0) == 0.0);
  CHECK(soft.values(0, 1) == 1.0);
}

TEST_CASE("an all-clipped row falls back to uniform with a warning") {
  Matrix raw(1, 2);
  raw << 0.0, 0.0;
  const auto soft = normalize_soft_labels(raw);
  CHECK(soft.values(0, 0) == 0.5);
  CHECK(soft.values(0, 1) == 0.5);
  CHECK(soft.fallback_rows == 1);
}

TEST_CASE("label constraint assembles block-diagonally") {
  Matrix a_l(2, 2);
  a_l << 1, 0, 0, 1;
  Matrix a_u(1, 2);
  a_u << 0.3, 0.7;
  const auto lc = assemble_label_constraint(a_l, a_u);
  REQUIRE(lc.assembled.rows() == 3);
  REQUIRE(lc.assembled.cols() == 4);
  CHECK(lc.assembled.topRightCorner(2, 2).norm() == 0.0);
  CHECK(lc.assembled.bottomLeftCorner(1, 2).norm() == 0.0);
  CHECK(lc.assembled(2, 2) == 0.3);
  CHECK(lc.assembled(2, 3) == 0.7);

  // every row of the assembly sums to one
  const Vector row_sums = lc.assembled * Vector::Ones(4);
  for (int i = 0; i < 3; ++i) CHECK(row_sums(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("label constraint keeps width 2c when there are no unlabeled samples") {
  Matrix a_l(2, 3);
  a_l << 1, 0, 0, 0, 0, 1;
  const auto lc = assemble_label_constraint(a_l, Matrix(0, 3));
  CHECK(lc.assembled.rows() == 2);
  CHECK(lc.assembled.cols() == 6);
  CHECK(lc.assembled.rightCols(3).norm() == 0.0);
}

TEST_CASE("label constraint rejects mismatched class counts") {
  CHECK_THROWS_AS(assemble_label_constraint(Matrix::Ones(2, 2), Matrix::Ones(1, 3)), Error);
}

TEST_CASE("labeled structure constraint reproduces the printed 2/4/3 blocks") {
  const auto split = split_with_labels({1, 1, 2, 2, 2, 2, 3, 3, 3}, 3);
  const Matrix q = build_structure_constraint_labeled(split);
  REQUIRE(q.rows() == 9);
  Matrix expected = Matrix::Zero(9, 9);
  expected.block(0, 0, 2, 2).setOnes();
  expected.block(2, 2, 4, 4).setOnes();
  expected.block(6, 6, 3, 3).setOnes();
  CHECK((q - expected).norm() == 0.0);
  CHECK(q.trace() == 9.0);
}

TEST_CASE("one class gives an all-ones labeled structure") {
  const auto split = split_with_labels({1, 1, 1, 1}, 1);
  const Matrix q = build_structure_constraint_labeled(split);
  CHECK(q.minCoeff() == 1.0);
  CHECK(q.maxCoeff() == 1.0);
  CHECK(q.trace() == 4.0);
}

TEST_CASE("unlabeled structure updates follow row cosines") {
  Matrix v(3, 2);
  v << 1, 1, 1, 0, 0, 2;
  const Matrix q = update_structure_constraint_unlabeled(v);
  CHECK(q(0, 0) == 1.0);
  CHECK(q(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(q(1, 2) == 0.0);  // orthogonal rows
  CHECK((q - q.transpose()).norm() == 0.0);
}

TEST_CASE("identical rows have unit similarity") {
  Matrix v(2, 3);
  v << 2, 1, 0, 4, 2, 0;
  const Matrix q = update_structure_constraint_unlabeled(v);
  CHECK(q(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cosine similarity hand values") {
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(cosine_similarity(a, b) == 0.0);
  a << 2, 2;
  b << 1, 1;
  CHECK(cosine_similarity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  Vector c(3), d(3);
  c << 1, 2, 3;
  d << 3, 2, 1;
  CHECK(cosine_similarity(c, d) == doctest::Approx(10.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("structure constraint assembly is symmetric block-diagonal in [0,1]") {
  const auto split = split_with_labels({1, 2, 2}, 2);
  const Matrix q_l = build_structure_constraint_labeled(split);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Matrix v(4, 3);
  for (int i = 0; i < v.size(); ++i) v.data()[i] = uni(gen);
  const Matrix q_u = update_structure_constraint_unlabeled(v);
  const auto sc = assemble_structure_constraint(q_l, q_u);
  CHECK((sc.assembled - sc.assembled.transpose()).norm() == 0.0);
  CHECK(sc.assembled.topRightCorner(3, 4).norm() == 0.0);
  CHECK(sc.assembled.minCoeff() >= 0.0);
  CHECK(sc.assembled.maxCoeff() <= 1.0);
}

TEST_CASE("a_u rows stay stochastic under repeated renormalization") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix raw(6, 4);
  for (int i = 0; i < raw.size(); ++i) raw.data()[i] = gauss(gen);
  const auto soft = normalize_soft_labels(raw);
  for (int i = 0; i < soft.values.rows(); ++i)
    CHECK(std::abs(soft.values.row(i).sum() - 1.0) <= 1e-10);
  CHECK(soft.values.minCoeff() >= 0.0);
}
