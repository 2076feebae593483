#ifndef DS2CF_DUAL_GRAPHS_HPP
#define DS2CF_DUAL_GRAPHS_HPP

#include "ds2cf/data_model.hpp"
#include "ds2cf/types.hpp"

namespace ds2cf::graphs {

// Adaptive reconstruction graphs: s_u over features (D x D), s_v over
// samples (N x N). Entries stay nonnegative under the multiplicative updates.
struct DualGraphs {
  Matrix s_u;
  Matrix s_v;
};

// Clipped cosine similarities of the feature rows of X.
Matrix init_feature_graph(const Matrix& x);

// Semi-supervised weights on the working-order matrix: labeled pairs are
// binary (same class or not), pairs touching an unlabeled sample use
// clipped column cosines, diagonal is one.
Matrix init_data_graph(const Matrix& x, const data::SemiSupervisedSplit& split);

// S <- S .* (M M^T) ./ (M M^T S), M = current deep basis U_M.
Matrix update_feature_graph(const Matrix& u_m, const Matrix& s_u);

// Same rule with the deep representation V_M.
Matrix update_data_graph(const Matrix& v_m, const Matrix& s_v);

// |M^T - M^T S|_F^2, the reconstruction loss each update descends.
double reconstruction_loss(const Matrix& m, const Matrix& s);

}  // namespace ds2cf::graphs

#endif
