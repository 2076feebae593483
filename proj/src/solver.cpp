#include "ds2cf/solver.hpp"

#include <cmath>

namespace ds2cf::solver {

namespace {

void check_finite_breakdown(const deep::ObjectiveBreakdown& b, int layer, int iter) {
  struct Term {
    const char* name;
    double value;
  };
  const Term terms[] = {{"recon", b.recon},
                        {"q_approx", b.q_approx},
                        {"r_norm", b.r_norm},
                        {"graph_u", b.graph_u},
                        {"graph_v", b.graph_v},
                        {"label_fit", b.label_fit},
                        {"self_express", b.self_express},
                        {"p_l21", b.p_l21}};
  for (const auto& t : terms)
    require(std::isfinite(t.value), Error::Kind::numeric,
            std::string("objective term ") + t.name + " became non-finite at layer " +
                std::to_string(layer) + ", iteration " + std::to_string(iter));
}

double max_rowsum_deviation(const Matrix& a_unlabeled) {
  double dev = 0.0;
  for (int i = 0; i < a_unlabeled.rows(); ++i)
    dev = std::max(dev, std::abs(a_unlabeled.row(i).sum() - 1.0));
  return dev;
}

double max_asymmetry(const Matrix& q) {
  return (q - q.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

bool convergence_check(const Matrix& w_prev, const Matrix& w_next, const Matrix& v_prev,
                       const Matrix& v_next, double epsilon) {
  require(w_prev.rows() == w_next.rows() && w_prev.cols() == w_next.cols(),
          Error::Kind::invalid_argument, "convergence check: W shapes differ");
  require(v_prev.rows() == v_next.rows() && v_prev.cols() == v_next.cols(),
          Error::Kind::invalid_argument, "convergence check: V shapes differ");
  return (w_next - w_prev).squaredNorm() <= epsilon && (v_next - v_prev).squaredNorm() <= epsilon;
}

FitResult fit(const data::DataMatrix& x, const data::SemiSupervisedSplit& split,
              const SolverConfig& config) {
  require(config.depth() >= 1, Error::Kind::invalid_argument, "rank schedule is empty");
  for (int r : config.rank_schedule)
    require(r >= 1, Error::Kind::invalid_argument, "ranks must be positive");
  require(config.epsilon > 0.0, Error::Kind::invalid_argument, "epsilon must be positive");
  require(config.max_iters_per_layer >= 1, Error::Kind::invalid_argument,
          "max_iters_per_layer must be positive");
  require(x.sample_count() == split.total_count(), Error::Kind::invalid_argument,
          "split does not cover the data");
  for (int j = 0; j < x.sample_count(); ++j)
    require(std::abs(x.values.col(j).norm() - 1.0) <= 1e-6, Error::Kind::invalid_argument,
            "fit expects unit-norm columns; column " + std::to_string(j + 1) + " is not");

  const int n = x.sample_count();
  const int l = split.labeled_count();
  const int u = split.unlabeled_count();
  const int c = split.num_classes;

  FitResult result;
  result.split = split;

  const Matrix xw = data::reorder_to_split(x.values, split);
  const Matrix x_labeled = xw.leftCols(l);
  const Matrix x_unlabeled = xw.rightCols(u);
  const Matrix a_labeled = constraints::build_label_indicator(split);
  const Matrix q_labeled = constraints::build_structure_constraint_labeled(split);

  // Initialization: ridge-started predictor with unit B, soft labels for
  // A_U, cosine blocks for Q_U, cosine feature graph, semi-supervised data
  // graph.
  predictor::LabelPredictor pred = predictor::init_predictor(x_labeled, a_labeled);
  constraints::SoftLabels soft =
      constraints::normalize_soft_labels(predictor::predict_soft_labels(x_unlabeled, pred.p));
  result.soft_label_fallbacks += soft.fallback_rows;
  constraints::LabelConstraint label_c =
      constraints::assemble_label_constraint(a_labeled, soft.values);
  constraints::StructureConstraint structure_c = constraints::assemble_structure_constraint(
      q_labeled, constraints::clipped_cosine_rows(x_unlabeled.transpose()));
  Matrix s_u = graphs::init_feature_graph(xw);
  Matrix s_v = graphs::init_data_graph(xw, split);

  deep::LayerStack stack;
  for (int m = 1; m <= config.depth(); ++m) {
    const int rank = config.rank_schedule[m - 1];
    const int w_rows = m == 1 ? n : config.rank_schedule[m - 2];
    const int z_rows = m == 1 ? static_cast<int>(label_c.assembled.cols())
                              : config.rank_schedule[m - 2];
    auto [w, z] = deep::init_factors(m, w_rows, z_rows, rank, config.seed);
    if (m > 1 && config.warm_start_perturbation > 0.0) {
      w = Matrix::Identity(w_rows, rank) + config.warm_start_perturbation * w;
      z = Matrix::Identity(z_rows, rank) + config.warm_start_perturbation * z;
    }
    stack.ranks.push_back(rank);
    stack.w.push_back(w);
    stack.z.push_back(z);

    const deep::PrefixPair prefix = deep::compute_prefix_products(stack, m);

    // pins the free W*s, Z/s scale at |V|_F^2 = N, the natural scale of the
    // first-layer initialization; R and all its objective terms are exact
    // invariants of this rescale
    const auto balance_scale = [&]() {
      const double v_norm = deep::deep_representation(label_c.assembled, prefix, z).norm();
      if (v_norm > 0.0) {
        const double s = std::sqrt(double(n)) / v_norm;
        z *= s;
        w /= s;
      }
    };
    if (config.normalize_scale) balance_scale();

    Matrix v_prev = deep::deep_representation(label_c.assembled, prefix, z);
    Matrix w_prev = w;

    LayerSummary summary;
    for (int iter = 1; iter <= config.max_iters_per_layer; ++iter) {
      summary.iterations = iter;
      std::vector<double> substeps;
      const auto eval = [&](const Matrix& wq, const Matrix& zq) {
        return deep::evaluate_objective(xw, label_c.assembled, structure_c.assembled, s_u, s_v,
                                        pred.p, x_labeled, a_labeled, prefix, wq, zq,
                                        config.hyper);
      };

      double objective_entry = 0.0;
      if (config.trace) objective_entry = eval(w, z).total();

      // factor block, graphs, then the predictor; A and Q stay fixed here
      w = deep::updated_w(w, z, prefix, xw, label_c.assembled, structure_c.assembled, s_u,
                          pred.p, config.hyper);
      if (config.record_substep_objectives) substeps.push_back(eval(w, z).total());
      z = deep::updated_z(z, w, prefix, xw, label_c.assembled, structure_c.assembled, s_v,
                          pred.p, config.hyper);
      if (config.record_substep_objectives) substeps.push_back(eval(w, z).total());

      const Matrix v = deep::deep_representation(label_c.assembled, prefix, z);
      const Matrix basis = deep::deep_basis(xw, prefix, w);
      s_u = graphs::update_feature_graph(basis, s_u);
      if (config.record_substep_objectives) substeps.push_back(eval(w, z).total());
      s_v = graphs::update_data_graph(v, s_v);
      if (config.record_substep_objectives) substeps.push_back(eval(w, z).total());

      const Matrix r_coef = deep::coefficient_matrix(prefix, w, v);
      pred.p = predictor::update_predictor(xw, x_labeled, a_labeled, r_coef, pred.b_diag);
      pred.b_diag = predictor::update_row_sparsity_weights(pred.p);
      if (config.record_substep_objectives) substeps.push_back(eval(w, z).total());

      deep::ObjectiveBreakdown block = eval(w, z);
      check_finite_breakdown(block, m, iter);

      // constraint refresh: soft labels into A_U, cosine blocks into Q_U
      double da_fro2 = 0.0;
      if (config.update_constraints) {
        soft = constraints::normalize_soft_labels(
            predictor::predict_soft_labels(x_unlabeled, pred.p));
        result.soft_label_fallbacks += soft.fallback_rows;
        da_fro2 = (soft.values - label_c.a_unlabeled).squaredNorm();
        label_c = constraints::assemble_label_constraint(a_labeled, soft.values);
        structure_c = constraints::assemble_structure_constraint(
            q_labeled, constraints::update_structure_constraint_unlabeled(v.bottomRows(u)));
      }

      TraceRecord rec;
      rec.layer = m;
      rec.iter = iter;
      rec.total_objective = block.total();
      rec.recon = block.recon;
      rec.structure = block.structure();
      rec.dual_graph = block.dual_graph();
      rec.predictor = block.predictor();
      rec.dw_fro2 = (w - w_prev).squaredNorm();
      rec.dv_fro2 = (v - v_prev).squaredNorm();
      rec.converged = rec.dw_fro2 <= config.epsilon && rec.dv_fro2 <= config.epsilon;
      rec.objective_entry = objective_entry;
      rec.objective_post = config.trace ? eval(w, z).total() : 0.0;
      rec.a_rowsum_dev = max_rowsum_deviation(label_c.a_unlabeled);
      rec.q_asymmetry = max_asymmetry(structure_c.assembled);
      rec.v_norm2 = v.squaredNorm();
      rec.da_fro2 = da_fro2;
      if (config.trace) {
        result.trace.push_back(rec);
        if (config.record_substep_objectives) result.substep_objectives.push_back(substeps);
      }

      w_prev = w;
      v_prev = v;
      if (rec.converged) {
        summary.converged = true;
        break;
      }
      if (config.normalize_scale) {
        const double before = z.norm();
        balance_scale();
        // the drift snapshots move with the convention
        w_prev = w;
        if (before > 0.0) v_prev *= z.norm() / before;
      }
    }

    stack.w[m - 1] = w;
    stack.z[m - 1] = z;
    result.layers.push_back(summary);
  }

  result.stack = stack;
  const deep::PrefixPair final_prefix = deep::compute_prefix_products(stack, config.depth());
  result.representation_working = deep::deep_representation(
      label_c.assembled, final_prefix, stack.z[config.depth() - 1]);
  result.label_constraint = label_c;
  result.structure_constraint = structure_c;
  result.dual_graphs = graphs::DualGraphs{s_u, s_v};
  result.label_predictor = pred;
  return result;
}

Matrix transform(const FitResult& result) {
  return data::restore_row_order(result.representation_working, result.split);
}

}  // namespace ds2cf::solver
