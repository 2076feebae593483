#ifndef DS2CF_SOLVER_HPP
#define DS2CF_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "ds2cf/constraints.hpp"
#include "ds2cf/data_model.hpp"
#include "ds2cf/deep_factorization.hpp"
#include "ds2cf/dual_graphs.hpp"
#include "ds2cf/label_predictor.hpp"
#include "ds2cf/trace.hpp"
#include "ds2cf/types.hpp"

namespace ds2cf::solver {

struct SolverConfig {
  deep::Hyperparams hyper;
  std::vector<int> rank_schedule;  // one rank per layer
  double epsilon = 1e-3;
  int max_iters_per_layer = 200;
  std::uint64_t seed = 0;
  bool trace = true;

  // The factor pair carries a free scale: W*s, Z/s leaves every coefficient-
  // matrix term unchanged. The convention below pins it by fixing |V|_F^2 to
  // the sample count once per iteration, which keeps the absolute epsilon
  // threshold meaningful in deep layers.
  bool normalize_scale = true;

  // Layers after the first start from a perturbed identity, so each new layer
  // refines the settled representation instead of remixing it at random.
  // Zero disables the warm start and draws every layer fully at random.
  double warm_start_perturbation = 0.1;

  // Diagnostics. Substep recording stores the objective after each update of
  // the multiplicative block; freezing constraints keeps A and Q at their
  // initial values, which reduces the model to its fixed-constraint core.
  bool record_substep_objectives = false;
  bool update_constraints = true;

  int depth() const { return static_cast<int>(rank_schedule.size()); }
};

struct LayerSummary {
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  deep::LayerStack stack;
  Matrix representation_working;  // V_M rows in [X_L, X_U] order
  constraints::LabelConstraint label_constraint;
  constraints::StructureConstraint structure_constraint;
  graphs::DualGraphs dual_graphs;
  predictor::LabelPredictor label_predictor;
  data::SemiSupervisedSplit split;
  std::vector<TraceRecord> trace;
  std::vector<std::vector<double>> substep_objectives;  // aligned with trace rows
  std::vector<LayerSummary> layers;
  int soft_label_fallbacks = 0;

  bool all_layers_converged() const {
    for (const auto& s : layers)
      if (!s.converged) return false;
    return !layers.empty();
  }
};

// Runs the per-layer alternating optimization on the reordered [X_L, X_U]
// matrix: factors, dual graphs and predictor first, then the constraint
// refresh, until the factor/representation drift falls under epsilon.
FitResult fit(const data::DataMatrix& x, const data::SemiSupervisedSplit& split,
              const SolverConfig& config);

// True iff both squared Frobenius differences are at most epsilon.
bool convergence_check(const Matrix& w_prev, const Matrix& w_next, const Matrix& v_prev,
                       const Matrix& v_next, double epsilon);

// Final representation with rows restored to the original sample order.
Matrix transform(const FitResult& result);

}  // namespace ds2cf::solver

#endif
