#include "ds2cf/baselines.hpp"

#include <cmath>

#include "ds2cf/constraints.hpp"
#include "ds2cf/deep_factorization.hpp"

namespace ds2cf::baselines {

namespace {

constexpr double kDenominatorGuard = 1e-12;

Matrix mur_step(const Matrix& current, const Matrix& numer, const Matrix& denom) {
  return current.cwiseProduct(numer.cwiseQuotient((denom.array() + kDenominatorGuard).matrix()));
}

void abort_if_not_finite(double objective, int iter) {
  require(std::isfinite(objective), Error::Kind::numeric,
          "objective became non-finite at sweep " + std::to_string(iter));
}

}  // namespace

CfFactors cf_fit(const data::DataMatrix& x, int rank, int max_iters, double tol,
                 std::uint64_t seed) {
  require(rank >= 1, Error::Kind::invalid_argument, "rank must be positive");
  const Matrix& xm = x.values;
  const int n = x.sample_count();

  CfFactors out;
  out.w = deep::random_factor(n, rank, deep::derive_seed(seed, 2));
  out.v = deep::random_factor(n, rank, deep::derive_seed(seed, 3));

  for (int iter = 1; iter <= max_iters; ++iter) {
    const Matrix w_prev = out.w;
    const Matrix v_prev = out.v;

    const Matrix xv = xm * out.v;
    const Matrix gram_v = out.v.transpose() * out.v;
    out.w = mur_step(out.w, 2.0 * (xm.transpose() * xv),
                     2.0 * (xm.transpose() * (xm * (out.w * gram_v))));

    const Matrix u = xm * out.w;
    out.v = mur_step(out.v, 2.0 * (xm.transpose() * u),
                     2.0 * (out.v * (u.transpose() * u)));

    TraceRecord rec;
    rec.layer = 1;
    rec.iter = iter;
    rec.recon = (xm - (xm * out.w) * out.v.transpose()).squaredNorm();
    rec.total_objective = rec.recon;
    rec.dw_fro2 = (out.w - w_prev).squaredNorm();
    rec.dv_fro2 = (out.v - v_prev).squaredNorm();
    rec.converged = rec.dw_fro2 <= tol && rec.dv_fro2 <= tol;
    abort_if_not_finite(rec.total_objective, iter);
    out.trace.push_back(rec);
    if (rec.converged) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Matrix ccf_label_constraint(const data::SemiSupervisedSplit& split) {
  const int l = split.labeled_count();
  const int u = split.unlabeled_count();
  const int c = split.num_classes;
  Matrix a = Matrix::Zero(l + u, c + u);
  if (l > 0) a.topLeftCorner(l, c) = constraints::build_label_indicator(split);
  if (u > 0) a.bottomRightCorner(u, u).setIdentity();
  return a;
}

CcfFactors ccf_fit(const data::DataMatrix& x, const data::SemiSupervisedSplit& split, int rank,
                   int max_iters, double tol, std::uint64_t seed) {
  require(rank >= 1, Error::Kind::invalid_argument, "rank must be positive");
  require(x.sample_count() == split.total_count(), Error::Kind::invalid_argument,
          "split does not cover the data");
  const Matrix xm = data::reorder_to_split(x.values, split);
  const int n = x.sample_count();

  CcfFactors out;
  out.a_fixed = ccf_label_constraint(split);
  out.w = deep::random_factor(n, rank, deep::derive_seed(seed, 2));
  out.z = deep::random_factor(static_cast<int>(out.a_fixed.cols()), rank,
                              deep::derive_seed(seed, 3));

  const Matrix xa = xm * out.a_fixed;
  const Matrix gram_a = out.a_fixed.transpose() * out.a_fixed;

  Matrix v_prev = out.a_fixed * out.z;
  for (int iter = 1; iter <= max_iters; ++iter) {
    const Matrix w_prev = out.w;

    const Matrix v = out.a_fixed * out.z;
    const Matrix xv = xm * v;
    const Matrix gram_v = v.transpose() * v;
    out.w = mur_step(out.w, 2.0 * (xm.transpose() * xv),
                     2.0 * (xm.transpose() * (xm * (out.w * gram_v))));

    const Matrix u = xm * out.w;
    out.z = mur_step(out.z, 2.0 * (xa.transpose() * u),
                     2.0 * (gram_a * (out.z * (u.transpose() * u))));

    const Matrix v_next = out.a_fixed * out.z;
    TraceRecord rec;
    rec.layer = 1;
    rec.iter = iter;
    rec.recon = (xm - (xm * out.w) * v_next.transpose()).squaredNorm();
    rec.total_objective = rec.recon;
    rec.dw_fro2 = (out.w - w_prev).squaredNorm();
    rec.dv_fro2 = (v_next - v_prev).squaredNorm();
    rec.converged = rec.dw_fro2 <= tol && rec.dv_fro2 <= tol;
    abort_if_not_finite(rec.total_objective, iter);
    out.trace.push_back(rec);
    v_prev = v_next;
    if (rec.converged) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace ds2cf::baselines
