#include "ds2cf/deep_factorization.hpp"

#include <random>

#include "ds2cf/label_predictor.hpp"

namespace ds2cf::deep {

namespace {

constexpr double kDenominatorGuard = 1e-12;

void check_nonnegative(const Matrix& m, const char* name) {
  require(m.size() == 0 || m.minCoeff() >= 0.0, Error::Kind::invalid_argument,
          std::string(name) + " has negative entries");
}

void check_shape(bool ok, const std::string& detail) {
  require(ok, Error::Kind::invalid_argument, "shape mismatch: " + detail);
}

Matrix positive_part(const Matrix& m) { return m.cwiseMax(0.0); }
Matrix negative_part(const Matrix& m) { return (-m).cwiseMax(0.0); }

Matrix apply_ratio(const Matrix& current, const Matrix& numer, const Matrix& denom,
                   const char* name) {
  Matrix out =
      current.cwiseProduct(numer.cwiseQuotient((denom.array() + kDenominatorGuard).matrix()));
  require(out.allFinite(), Error::Kind::numeric,
          std::string(name) + " update produced non-finite entries");
  require(out.size() == 0 || out.minCoeff() >= 0.0, Error::Kind::internal,
          std::string(name) + " update produced a negative entry");
  return out;
}

}  // namespace

PrefixPair compute_prefix_products(const LayerStack& stack, int m) {
  require(m >= 1 && m <= stack.depth(), Error::Kind::invalid_argument,
          "layer index out of range");
  require(int(stack.w.size()) == stack.depth() && int(stack.z.size()) == stack.depth(),
          Error::Kind::invalid_argument, "factor lists disagree with the rank schedule");
  for (int i = 0; i + 1 < stack.depth(); ++i) {
    check_shape(stack.w[i].cols() == stack.w[i + 1].rows(),
                "W chain between layers " + std::to_string(i + 1) + " and " +
                    std::to_string(i + 2));
    check_shape(stack.z[i].cols() == stack.z[i + 1].rows(),
                "Z chain between layers " + std::to_string(i + 1) + " and " +
                    std::to_string(i + 2));
  }
  PrefixPair prefix;
  for (int i = 0; i + 1 < m; ++i) {
    const Matrix& w_i = stack.w[i];
    const Matrix& z_i = stack.z[i];
    if (prefix.pi) {
      check_shape(prefix.pi->cols() == w_i.rows(), "factor chain W at layer " + std::to_string(i + 1));
      prefix.pi = *prefix.pi * w_i;
    } else {
      prefix.pi = w_i;
    }
    if (prefix.lambda) {
      check_shape(prefix.lambda->cols() == z_i.rows(),
                  "factor chain Z at layer " + std::to_string(i + 1));
      prefix.lambda = *prefix.lambda * z_i;
    } else {
      prefix.lambda = z_i;
    }
  }
  return prefix;
}

Matrix deep_basis(const Matrix& x, const PrefixPair& prefix, const Matrix& w) {
  if (prefix.pi) {
    check_shape(x.cols() == prefix.pi->rows() && prefix.pi->cols() == w.rows(), "X Pi W");
    return x * (*prefix.pi * w);
  }
  check_shape(x.cols() == w.rows(), "X W");
  return x * w;
}

Matrix deep_representation(const Matrix& a, const PrefixPair& prefix, const Matrix& z) {
  if (prefix.lambda) {
    check_shape(a.cols() == prefix.lambda->rows() && prefix.lambda->cols() == z.rows(),
                "A Lambda Z");
    return a * (*prefix.lambda * z);
  }
  check_shape(a.cols() == z.rows(), "A Z");
  return a * z;
}

Matrix coefficient_matrix(const PrefixPair& prefix, const Matrix& w, const Matrix& v) {
  const Matrix pi_m = prefix.pi ? Matrix(*prefix.pi * w) : w;
  return pi_m * v.transpose();
}

Matrix updated_w(const Matrix& w, const Matrix& z, const PrefixPair& prefix, const Matrix& x,
                 const Matrix& a, const Matrix& q, const Matrix& s_u, const Matrix& p,
                 const Hyperparams& hyper) {
  check_nonnegative(w, "W");
  check_nonnegative(q, "Q");
  check_nonnegative(s_u, "S^U");
  check_nonnegative(a, "A");

  const Matrix x_pi = prefix.pi ? Matrix(x * *prefix.pi) : x;  // X Pi_{m-1}, D x p
  check_shape(x_pi.cols() == w.rows(), "W against X Pi");
  const Matrix v = deep_representation(a, prefix, z);  // N x r
  check_shape(v.cols() == w.cols(), "W against V");
  const Matrix gram_v = v.transpose() * v;             // r x r
  const Matrix xv = x * v;                             // D x r

  Matrix numer = 2.0 * (x_pi.transpose() * xv);
  Matrix denom = 2.0 * (x_pi.transpose() * (x_pi * (w * gram_v)));

  if (hyper.alpha > 0.0) {
    const Matrix qv = q * v;
    numer += 2.0 * hyper.alpha * (prefix.pi ? Matrix(prefix.pi->transpose() * qv) : qv);
    const Matrix w_gram = w * gram_v;
    denom += 4.0 * hyper.alpha *
             (prefix.pi ? Matrix(prefix.pi->transpose() * (*prefix.pi * w_gram)) : w_gram);
  }

  if (hyper.beta > 0.0) {
    const Matrix residual = Matrix::Identity(s_u.rows(), s_u.cols()) - s_u;
    const Matrix h_u = residual * residual.transpose();
    const Matrix m_u = x_pi.transpose() * (h_u + h_u.transpose()) * x_pi;  // p x p, mixed sign
    denom += hyper.beta * (positive_part(m_u) * w);
    numer += hyper.beta * (negative_part(m_u) * w);
  }

  if (hyper.gamma > 0.0) {
    const Matrix pt_x_pi = p.transpose() * x_pi;             // c x p
    const Matrix b_p = pt_x_pi.transpose() * pt_x_pi;        // Pi^T K_P Pi, mixed sign
    denom += 2.0 * hyper.gamma * (positive_part(b_p) * (w * gram_v));
    numer += 2.0 * hyper.gamma * (negative_part(b_p) * (w * gram_v));
    const Matrix l_w = pt_x_pi.transpose() * (p.transpose() * xv);  // Pi^T K_P V
    numer += 2.0 * hyper.gamma * positive_part(l_w);
    denom += 2.0 * hyper.gamma * negative_part(l_w);
  }

  return apply_ratio(w, numer, denom, "W");
}

Matrix updated_z(const Matrix& z, const Matrix& w, const PrefixPair& prefix, const Matrix& x,
                 const Matrix& a, const Matrix& q, const Matrix& s_v, const Matrix& p,
                 const Hyperparams& hyper) {
  check_nonnegative(z, "Z");
  check_nonnegative(q, "Q");
  check_nonnegative(s_v, "S^V");
  check_nonnegative(a, "A");

  const Matrix a_lambda = prefix.lambda ? Matrix(a * *prefix.lambda) : a;  // N x p
  check_shape(a_lambda.cols() == z.rows(), "Z against A Lambda");
  const Matrix pi_m = prefix.pi ? Matrix(*prefix.pi * w) : w;  // N x r
  check_shape(pi_m.cols() == z.cols(), "Z against Pi_m");
  const Matrix u = x * pi_m;                                   // D x r
  const Matrix gram_a = a_lambda.transpose() * a_lambda;       // p x p
  const Matrix x_a_lambda = x * a_lambda;                      // D x p

  Matrix numer = 2.0 * (x_a_lambda.transpose() * u);
  Matrix denom = 2.0 * (gram_a * (z * (u.transpose() * u)));

  if (hyper.alpha > 0.0) {
    numer += 2.0 * hyper.alpha * (a_lambda.transpose() * (q.transpose() * pi_m));
    denom += 4.0 * hyper.alpha * (gram_a * (z * (pi_m.transpose() * pi_m)));
  }

  if (hyper.beta > 0.0) {
    const Matrix residual = Matrix::Identity(s_v.rows(), s_v.cols()) - s_v;
    const Matrix h_v = residual * residual.transpose();
    const Matrix m_v = a_lambda.transpose() * (h_v + h_v.transpose()) * a_lambda;  // p x p
    denom += hyper.beta * (positive_part(m_v) * z);
    numer += hyper.beta * (negative_part(m_v) * z);
  }

  if (hyper.gamma > 0.0) {
    const Matrix pt_u = p.transpose() * u;             // c x r
    const Matrix t_p = pt_u.transpose() * pt_u;        // U^T P P^T U, mixed sign
    denom += 2.0 * hyper.gamma * (gram_a * (z * positive_part(t_p)));
    numer += 2.0 * hyper.gamma * (gram_a * (z * negative_part(t_p)));
    const Matrix l_z = (p.transpose() * x_a_lambda).transpose() * pt_u;  // Lambda^T A^T K_P Pi_m
    numer += 2.0 * hyper.gamma * positive_part(l_z);
    denom += 2.0 * hyper.gamma * negative_part(l_z);
  }

  return apply_ratio(z, numer, denom, "Z");
}

ObjectiveBreakdown evaluate_objective(const Matrix& x, const Matrix& a, const Matrix& q,
                                      const Matrix& s_u, const Matrix& s_v, const Matrix& p,
                                      const Matrix& x_labeled, const Matrix& a_labeled,
                                      const PrefixPair& prefix, const Matrix& w, const Matrix& z,
                                      const Hyperparams& hyper) {
  const Matrix u = deep_basis(x, prefix, w);
  const Matrix v = deep_representation(a, prefix, z);
  const Matrix r = coefficient_matrix(prefix, w, v);

  ObjectiveBreakdown out;
  out.hyper = hyper;
  out.recon = (x - x * r).squaredNorm();
  out.q_approx = (q - r).squaredNorm();
  out.r_norm = r.squaredNorm();
  out.graph_u = (u.transpose() - u.transpose() * s_u).squaredNorm();
  out.graph_v = (v.transpose() - v.transpose() * s_v).squaredNorm();
  out.label_fit = (a_labeled - x_labeled.transpose() * p).squaredNorm();
  const Matrix px = p.transpose() * x;
  out.self_express = (px - px * r).squaredNorm();
  out.p_l21 = predictor::l21_norm(p);
  out.p_l21_smoothed = predictor::l21_norm_smoothed(p);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 over the combined value
  std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

Matrix random_factor(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uniform(0.01, 1.01);
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = uniform(gen);
  return out;
}

std::pair<Matrix, Matrix> init_factors(int m, int w_rows, int z_rows, int rank,
                                       std::uint64_t master_seed) {
  require(m >= 1, Error::Kind::invalid_argument, "layer index must be positive");
  return {random_factor(w_rows, rank, derive_seed(master_seed, 2 * std::uint64_t(m))),
          random_factor(z_rows, rank, derive_seed(master_seed, 2 * std::uint64_t(m) + 1))};
}

}  // namespace ds2cf::deep
