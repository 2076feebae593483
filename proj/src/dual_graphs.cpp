#include "ds2cf/dual_graphs.hpp"

#include "ds2cf/constraints.hpp"

namespace ds2cf::graphs {

namespace {

constexpr double kDenominatorGuard = 1e-12;

Matrix multiplicative_graph_update(const Matrix& m, const Matrix& s, const char* name) {
  const Matrix gram = m * m.transpose();
  const Matrix denom = gram * s;
  Matrix out(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i) {
    for (int k = 0; k < s.cols(); ++k) {
      out(i, k) = s(i, k) * gram(i, k) / (denom(i, k) + kDenominatorGuard);
      if (!std::isfinite(out(i, k)))
        throw Error(Error::Kind::numeric, std::string(name) + " update produced a non-finite "
                                              "entry at (" +
                                              std::to_string(i + 1) + ", " +
                                              std::to_string(k + 1) + ")");
    }
  }
  return out;
}

}  // namespace

Matrix init_feature_graph(const Matrix& x) { return constraints::clipped_cosine_rows(x); }

Matrix init_data_graph(const Matrix& x, const data::SemiSupervisedSplit& split) {
  const int n = static_cast<int>(x.cols());
  require(n == split.total_count(), Error::Kind::invalid_argument,
          "split does not match the matrix");
  const int l = split.labeled_count();
  Matrix s = constraints::clipped_cosine_rows(x.transpose());
  // Labeled block carries the supervision instead of cosines.
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) s(i, j) = split.labels[i] == split.labels[j] ? 1.0 : 0.0;
  return s;
}

Matrix update_feature_graph(const Matrix& u_m, const Matrix& s_u) {
  return multiplicative_graph_update(u_m, s_u, "feature graph");
}

Matrix update_data_graph(const Matrix& v_m, const Matrix& s_v) {
  return multiplicative_graph_update(v_m, s_v, "data graph");
}

double reconstruction_loss(const Matrix& m, const Matrix& s) {
  return (m.transpose() - m.transpose() * s).squaredNorm();
}

}  // namespace ds2cf::graphs
