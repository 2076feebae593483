#ifndef DS2CF_DEEP_FACTORIZATION_HPP
#define DS2CF_DEEP_FACTORIZATION_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ds2cf/types.hpp"

namespace ds2cf::deep {

struct Hyperparams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Layered factor pairs. w[m] has shape (N x r_1) for the first layer and
// (r_m x r_{m+1}) after; z[m] likewise starts from the label-constraint
// width. The implicit W_0, Z_0 identities are never materialized.
struct LayerStack {
  std::vector<int> ranks;
  std::vector<Matrix> w;
  std::vector<Matrix> z;

  int depth() const { return static_cast<int>(ranks.size()); }
};

// Prefix products for layer m: pi = W_1...W_{m-1}, lambda = Z_1...Z_{m-1}.
// Empty optionals stand for the layer-1 identities, so X*pi reads as X and
// A*lambda reads as A.
struct PrefixPair {
  std::optional<Matrix> pi;
  std::optional<Matrix> lambda;
};

PrefixPair compute_prefix_products(const LayerStack& stack, int m);

// Quantities every update reads, derived from the factor state.
Matrix deep_basis(const Matrix& x, const PrefixPair& prefix, const Matrix& w);      // U_M
Matrix deep_representation(const Matrix& a, const PrefixPair& prefix, const Matrix& z);  // V_M
Matrix coefficient_matrix(const PrefixPair& prefix, const Matrix& w, const Matrix& v);   // R_M

// Multiplicative update for W_m, all other variables fixed. Mixed-sign
// couplings (the graph and predictor quadratics) are routed by sign so the
// iterate stays in the nonnegative cone.
Matrix updated_w(const Matrix& w, const Matrix& z, const PrefixPair& prefix, const Matrix& x,
                 const Matrix& a, const Matrix& q, const Matrix& s_u, const Matrix& p,
                 const Hyperparams& hyper);

// Multiplicative update for Z_m; w must already hold this sweep's value.
Matrix updated_z(const Matrix& z, const Matrix& w, const PrefixPair& prefix, const Matrix& x,
                 const Matrix& a, const Matrix& q, const Matrix& s_v, const Matrix& p,
                 const Hyperparams& hyper);

struct ObjectiveBreakdown {
  double recon = 0.0;          // |X - X R|^2
  double q_approx = 0.0;       // |Q - R|^2
  double r_norm = 0.0;         // |R|^2
  double graph_u = 0.0;        // |U^T - U^T S^U|^2
  double graph_v = 0.0;        // |V^T - V^T S^V|^2
  double label_fit = 0.0;      // |A_L - X_L^T P|^2
  double self_express = 0.0;   // |P^T X - P^T X R|^2
  double p_l21 = 0.0;          // sum of row norms of P
  double p_l21_smoothed = 0.0; // guard-smoothed row norms

  Hyperparams hyper;

  double structure() const { return hyper.alpha * (q_approx + r_norm); }
  double dual_graph() const { return hyper.beta * (graph_u + graph_v); }
  double predictor() const { return hyper.gamma * (label_fit + self_express + p_l21); }
  double total() const { return recon + structure() + dual_graph() + predictor(); }
  double total_smoothed() const {
    return recon + structure() + dual_graph() +
           hyper.gamma * (label_fit + self_express + p_l21_smoothed);
  }
};

ObjectiveBreakdown evaluate_objective(const Matrix& x, const Matrix& a, const Matrix& q,
                                      const Matrix& s_u, const Matrix& s_v, const Matrix& p,
                                      const Matrix& x_labeled, const Matrix& a_labeled,
                                      const PrefixPair& prefix, const Matrix& w, const Matrix& z,
                                      const Hyperparams& hyper);

// Deterministic stream derivation for per-factor seeding.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Uniform entries on (0.01, 1.01), filled row by row so a factor that is a
// row-extension of another consumes the same leading draws.
Matrix random_factor(int rows, int cols, std::uint64_t seed);

// Seeded (W_m, Z_m) pair for layer m (1-based).
std::pair<Matrix, Matrix> init_factors(int m, int w_rows, int z_rows, int rank,
                                       std::uint64_t master_seed);

}  // namespace ds2cf::deep

#endif
