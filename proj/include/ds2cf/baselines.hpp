#ifndef DS2CF_BASELINES_HPP
#define DS2CF_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "ds2cf/data_model.hpp"
#include "ds2cf/trace.hpp"
#include "ds2cf/types.hpp"

namespace ds2cf::baselines {

// Single-layer concept factorization X ~ X W V^T.
struct CfFactors {
  Matrix w;  // N x r
  Matrix v;  // N x r
  std::vector<TraceRecord> trace;
  bool converged = false;
};

CfFactors cf_fit(const data::DataMatrix& x, int rank, int max_iters, double tol,
                 std::uint64_t seed);

// Constrained concept factorization with the fixed label constraint
// A = [A_L 0; 0 I_u]; the representation is V = A Z. Operates on the
// reordered [X_L, X_U] column layout.
struct CcfFactors {
  Matrix w;        // N x r
  Matrix z;        // (c+u) x r
  Matrix a_fixed;  // (l+u) x (c+u)
  std::vector<TraceRecord> trace;
  bool converged = false;

  Matrix representation_working() const { return a_fixed * z; }
};

CcfFactors ccf_fit(const data::DataMatrix& x, const data::SemiSupervisedSplit& split, int rank,
                   int max_iters, double tol, std::uint64_t seed);

// The fixed block constraint used by ccf_fit, exposed for tests.
Matrix ccf_label_constraint(const data::SemiSupervisedSplit& split);

}  // namespace ds2cf::baselines

#endif
