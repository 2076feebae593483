#include "ds2cf.h"

#include <cstring>
#include <optional>
#include <string>

#include "ds2cf/baselines.hpp"
#include "ds2cf/csv.hpp"
#include "ds2cf/data_model.hpp"
#include "ds2cf/evaluation.hpp"
#include "ds2cf/solver.hpp"
#include "ds2cf/trace.hpp"

using ds2cf::Error;
using ds2cf::Matrix;

struct ds2cf_dataset {
  ds2cf::data::DataMatrix matrix;
  std::optional<ds2cf::data::GroundTruth> truth;
};

struct ds2cf_split {
  ds2cf::data::SemiSupervisedSplit split;
};

// One fitted model of any of the three methods; representation rows are kept
// in the original sample order.
struct ds2cf_model {
  Matrix representation;
  std::vector<ds2cf::TraceRecord> trace;
  bool converged = false;
  std::vector<int> layer_iterations;
  std::optional<Matrix> s_v;
  std::optional<Matrix> s_u;
  std::optional<Matrix> q;
};

namespace {

thread_local std::string g_last_error;

ds2cf_status to_status(Error::Kind kind) {
  switch (kind) {
    case Error::Kind::invalid_argument:
      return DS2CF_ERR_INVALID_ARGUMENT;
    case Error::Kind::parse:
      return DS2CF_ERR_PARSE;
    case Error::Kind::domain:
      return DS2CF_ERR_DOMAIN;
    case Error::Kind::format:
      return DS2CF_ERR_FORMAT;
    case Error::Kind::io:
      return DS2CF_ERR_IO;
    case Error::Kind::numeric:
      return DS2CF_ERR_NUMERIC;
    case Error::Kind::not_found:
      return DS2CF_ERR_NOT_FOUND;
    case Error::Kind::internal:
      return DS2CF_ERR_INTERNAL;
  }
  return DS2CF_ERR_INTERNAL;
}

template <typename Fn>
ds2cf_status guarded(Fn&& fn) {
  try {
    fn();
    return DS2CF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DS2CF_ERR_INTERNAL;
  }
}

void require_arg(bool ok, const char* message) {
  if (!ok) throw Error(Error::Kind::invalid_argument, message);
}

std::vector<std::string> split_header_lines(const char* header_or_null) {
  std::vector<std::string> lines;
  if (!header_or_null) return lines;
  std::string text(header_or_null);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

extern "C" {

const char* ds2cf_last_error(void) { return g_last_error.c_str(); }

const char* ds2cf_status_name(ds2cf_status status) {
  switch (status) {
    case DS2CF_OK:
      return "ok";
    case DS2CF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DS2CF_ERR_PARSE:
      return "parse error";
    case DS2CF_ERR_DOMAIN:
      return "domain error";
    case DS2CF_ERR_FORMAT:
      return "format error";
    case DS2CF_ERR_IO:
      return "io error";
    case DS2CF_ERR_NUMERIC:
      return "numeric error";
    case DS2CF_ERR_NOT_FOUND:
      return "not found";
    case DS2CF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

ds2cf_status ds2cf_dataset_from_csv(const char* path, int rows_are_samples, int has_labels,
                                    ds2cf_dataset** out) {
  return guarded([&] {
    require_arg(path && out, "null argument");
    auto loaded = ds2cf::data::load_dense_csv(
        path,
        rows_are_samples ? ds2cf::data::Orientation::rows_are_samples
                         : ds2cf::data::Orientation::columns_are_samples,
        has_labels != 0);
    *out = new ds2cf_dataset{std::move(loaded.matrix), std::move(loaded.truth)};
  });
}

ds2cf_status ds2cf_dataset_from_idx(const char* images_path, const char* labels_path,
                                    ds2cf_dataset** out) {
  return guarded([&] {
    require_arg(images_path && labels_path && out, "null argument");
    auto loaded = ds2cf::data::load_idx(images_path, labels_path);
    *out = new ds2cf_dataset{std::move(loaded.matrix), std::move(loaded.truth)};
  });
}

ds2cf_status ds2cf_dataset_synthetic_blobs(int classes, int per_class, int dim, double separation,
                                           double noise, uint64_t seed, ds2cf_dataset** out) {
  return guarded([&] {
    require_arg(out != nullptr, "null argument");
    auto loaded =
        ds2cf::data::generate_synthetic_blobs(classes, per_class, dim, separation, noise, seed);
    *out = new ds2cf_dataset{std::move(loaded.matrix), std::move(loaded.truth)};
  });
}

ds2cf_status ds2cf_dataset_from_dense(int rows, int cols, const double* column_major,
                                      const int* labels_or_null, ds2cf_dataset** out) {
  return guarded([&] {
    require_arg(column_major && out, "null argument");
    require_arg(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
    Matrix values(rows, cols);
    std::memcpy(values.data(), column_major, sizeof(double) * std::size_t(rows) * cols);
    if (values.minCoeff() < 0.0)
      throw Error(Error::Kind::domain, "dense buffer contains negative entries");
    auto* ds = new ds2cf_dataset{ds2cf::data::DataMatrix{std::move(values)}, std::nullopt};
    if (labels_or_null) {
      ds2cf::data::GroundTruth truth;
      truth.labels.assign(labels_or_null, labels_or_null + cols);
      for (int lbl : truth.labels) {
        if (lbl < 1) {
          delete ds;
          throw Error(Error::Kind::invalid_argument, "labels must be >= 1");
        }
        truth.num_classes = std::max(truth.num_classes, lbl);
      }
      ds->truth = std::move(truth);
    }
    *out = ds;
  });
}

ds2cf_status ds2cf_dataset_select_classes(const ds2cf_dataset* dataset, const int* class_ids,
                                          int count, ds2cf_dataset** out) {
  return guarded([&] {
    require_arg(dataset && class_ids && out, "null argument");
    require_arg(count >= 1, "need at least one class");
    require_arg(dataset->truth.has_value(), "dataset has no labels");
    const auto& truth = *dataset->truth;
    std::vector<int> keep;
    std::vector<int> new_label(truth.num_classes + 1, 0);
    for (int i = 0; i < count; ++i) {
      require_arg(class_ids[i] >= 1 && class_ids[i] <= truth.num_classes,
                  "class id out of range");
      require_arg(new_label[class_ids[i]] == 0, "duplicate class id");
      new_label[class_ids[i]] = i + 1;
    }
    for (std::size_t j = 0; j < truth.labels.size(); ++j)
      if (new_label[truth.labels[j]] != 0) keep.push_back(static_cast<int>(j));
    require_arg(!keep.empty(), "selected classes have no samples");

    Matrix values(dataset->matrix.values.rows(), keep.size());
    ds2cf::data::GroundTruth sub;
    sub.num_classes = count;
    sub.labels.resize(keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
      values.col(j) = dataset->matrix.values.col(keep[j]);
      sub.labels[j] = new_label[truth.labels[keep[j]]];
    }
    *out = new ds2cf_dataset{ds2cf::data::DataMatrix{std::move(values)}, std::move(sub)};
  });
}

ds2cf_status ds2cf_dataset_normalized(const ds2cf_dataset* dataset, ds2cf_dataset** out) {
  return guarded([&] {
    require_arg(dataset && out, "null argument");
    *out = new ds2cf_dataset{ds2cf::data::normalize_columns(dataset->matrix), dataset->truth};
  });
}

int ds2cf_dataset_rows(const ds2cf_dataset* dataset) {
  return dataset ? dataset->matrix.feature_count() : 0;
}

int ds2cf_dataset_cols(const ds2cf_dataset* dataset) {
  return dataset ? dataset->matrix.sample_count() : 0;
}

int ds2cf_dataset_num_classes(const ds2cf_dataset* dataset) {
  return dataset && dataset->truth ? dataset->truth->num_classes : 0;
}

ds2cf_status ds2cf_dataset_values(const ds2cf_dataset* dataset, double* out_column_major) {
  return guarded([&] {
    require_arg(dataset && out_column_major, "null argument");
    std::memcpy(out_column_major, dataset->matrix.values.data(),
                sizeof(double) * std::size_t(dataset->matrix.values.size()));
  });
}

ds2cf_status ds2cf_dataset_labels(const ds2cf_dataset* dataset, int* out) {
  return guarded([&] {
    require_arg(dataset && out, "null argument");
    if (!dataset->truth) throw Error(Error::Kind::not_found, "dataset has no labels");
    std::memcpy(out, dataset->truth->labels.data(), sizeof(int) * dataset->truth->labels.size());
  });
}

void ds2cf_dataset_free(ds2cf_dataset* dataset) { delete dataset; }

ds2cf_status ds2cf_split_create(const ds2cf_dataset* dataset, double labeled_proportion,
                                uint64_t seed, ds2cf_split** out) {
  return guarded([&] {
    require_arg(dataset && out, "null argument");
    if (!dataset->truth) throw Error(Error::Kind::not_found, "dataset has no labels");
    *out = new ds2cf_split{
        ds2cf::data::split_semi_supervised(*dataset->truth, labeled_proportion, seed)};
  });
}

int ds2cf_split_labeled_count(const ds2cf_split* split) {
  return split ? split->split.labeled_count() : 0;
}

void ds2cf_split_free(ds2cf_split* split) { delete split; }

void ds2cf_config_defaults(ds2cf_config* config) {
  if (!config) return;
  config->alpha = 0.1;
  config->beta = 1e-4;
  config->gamma = 1e-3;
  config->layers = 3;
  config->rank = 4;
  config->rank_schedule = nullptr;
  config->epsilon = 1e-3;
  config->max_iters_per_layer = 200;
  config->seed = 0;
  config->record_trace = 1;
}

ds2cf_status ds2cf_fit(const ds2cf_dataset* dataset, const ds2cf_split* split,
                       const ds2cf_config* config, ds2cf_model** out) {
  return guarded([&] {
    require_arg(dataset && split && config && out, "null argument");
    ds2cf::solver::SolverConfig cfg;
    cfg.hyper = {config->alpha, config->beta, config->gamma};
    require_arg(config->layers >= 1, "layers must be positive");
    if (config->rank_schedule)
      cfg.rank_schedule.assign(config->rank_schedule, config->rank_schedule + config->layers);
    else
      cfg.rank_schedule.assign(config->layers, config->rank);
    cfg.epsilon = config->epsilon;
    cfg.max_iters_per_layer = config->max_iters_per_layer;
    cfg.seed = config->seed;
    cfg.trace = config->record_trace != 0;

    auto result = ds2cf::solver::fit(dataset->matrix, split->split, cfg);
    auto* model = new ds2cf_model;
    model->representation = ds2cf::solver::transform(result);
    model->trace = std::move(result.trace);
    model->converged = result.all_layers_converged();
    for (const auto& layer : result.layers) model->layer_iterations.push_back(layer.iterations);
    model->s_v = result.dual_graphs.s_v;
    model->s_u = result.dual_graphs.s_u;
    model->q = result.structure_constraint.assembled;
    *out = model;
  });
}

ds2cf_status ds2cf_cf_fit(const ds2cf_dataset* dataset, int rank, int max_iters, double epsilon,
                          uint64_t seed, ds2cf_model** out) {
  return guarded([&] {
    require_arg(dataset && out, "null argument");
    auto result = ds2cf::baselines::cf_fit(dataset->matrix, rank, max_iters, epsilon, seed);
    auto* model = new ds2cf_model;
    model->representation = result.v;
    model->trace = std::move(result.trace);
    model->converged = result.converged;
    model->layer_iterations.push_back(
        model->trace.empty() ? 0 : model->trace.back().iter);
    *out = model;
  });
}

ds2cf_status ds2cf_ccf_fit(const ds2cf_dataset* dataset, const ds2cf_split* split, int rank,
                           int max_iters, double epsilon, uint64_t seed, ds2cf_model** out) {
  return guarded([&] {
    require_arg(dataset && split && out, "null argument");
    auto result =
        ds2cf::baselines::ccf_fit(dataset->matrix, split->split, rank, max_iters, epsilon, seed);
    auto* model = new ds2cf_model;
    model->representation =
        ds2cf::data::restore_row_order(result.representation_working(), split->split);
    model->trace = std::move(result.trace);
    model->converged = result.converged;
    model->layer_iterations.push_back(model->trace.empty() ? 0 : model->trace.back().iter);
    *out = model;
  });
}

ds2cf_status ds2cf_model_representation_size(const ds2cf_model* model, int* rows, int* cols) {
  return guarded([&] {
    require_arg(model && rows && cols, "null argument");
    *rows = static_cast<int>(model->representation.rows());
    *cols = static_cast<int>(model->representation.cols());
  });
}

ds2cf_status ds2cf_model_representation(const ds2cf_model* model, double* out_column_major) {
  return guarded([&] {
    require_arg(model && out_column_major, "null argument");
    std::memcpy(out_column_major, model->representation.data(),
                sizeof(double) * std::size_t(model->representation.size()));
  });
}

int ds2cf_model_converged(const ds2cf_model* model) {
  return model && model->converged ? 1 : 0;
}

int ds2cf_model_layer_iterations(const ds2cf_model* model, int layer) {
  if (!model || layer < 1 || layer > static_cast<int>(model->layer_iterations.size())) return 0;
  return model->layer_iterations[layer - 1];
}

ds2cf_status ds2cf_model_export_csv(const ds2cf_model* model, const char* artifact,
                                    const char* path, const char* header_or_null) {
  return guarded([&] {
    require_arg(model && artifact && path, "null argument");
    const std::string name(artifact);
    const auto header = split_header_lines(header_or_null);
    const auto write_optional = [&](const std::optional<Matrix>& m) {
      if (!m) throw Error(Error::Kind::not_found, "model has no '" + name + "' artifact");
      ds2cf::csv::write_matrix(path, *m, header);
    };
    if (name == "sv") {
      write_optional(model->s_v);
    } else if (name == "su") {
      write_optional(model->s_u);
    } else if (name == "q") {
      write_optional(model->q);
    } else if (name == "representation") {
      ds2cf::csv::write_matrix(path, model->representation, header);
    } else if (name == "trace") {
      if (model->trace.empty())
        throw Error(Error::Kind::not_found, "model recorded no trace");
      ds2cf::write_trace_csv(path, model->trace, header);
    } else {
      throw Error(Error::Kind::invalid_argument, "unknown artifact '" + name + "'");
    }
  });
}

void ds2cf_model_free(ds2cf_model* model) { delete model; }

ds2cf_status ds2cf_kmeans_cosine(const double* rows, int n, int dim, int k, int restarts,
                                 int max_iters, uint64_t seed, int* assignment_out,
                                 double* inertia_out) {
  return guarded([&] {
    require_arg(rows && assignment_out, "null argument");
    require_arg(n >= 1 && dim >= 1, "matrix dimensions must be positive");
    Matrix m(n, dim);
    std::memcpy(m.data(), rows, sizeof(double) * std::size_t(n) * dim);
    auto result = ds2cf::eval::kmeans_cosine(m, k, restarts, max_iters, seed);
    std::memcpy(assignment_out, result.assignment.data(), sizeof(int) * std::size_t(n));
    if (inertia_out) *inertia_out = result.inertia;
  });
}

ds2cf_status ds2cf_clustering_accuracy(const int* predicted, const int* truth, int n,
                                       double* out) {
  return guarded([&] {
    require_arg(predicted && truth && out, "null argument");
    require_arg(n >= 1, "need at least one sample");
    *out = ds2cf::eval::clustering_accuracy(std::vector<int>(predicted, predicted + n),
                                            std::vector<int>(truth, truth + n));
  });
}

ds2cf_status ds2cf_pairwise_f_measure(const int* predicted, const int* truth, int n,
                                      double* out) {
  return guarded([&] {
    require_arg(predicted && truth && out, "null argument");
    require_arg(n >= 2, "need at least two samples");
    *out = ds2cf::eval::pairwise_f_measure(std::vector<int>(predicted, predicted + n),
                                           std::vector<int>(truth, truth + n));
  });
}

ds2cf_status ds2cf_classwise_f_measure(const int* predicted, const int* truth, int n,
                                       double* out) {
  return guarded([&] {
    require_arg(predicted && truth && out, "null argument");
    require_arg(n >= 1, "need at least one sample");
    *out = ds2cf::eval::classwise_f_measure(std::vector<int>(predicted, predicted + n),
                                            std::vector<int>(truth, truth + n));
  });
}

}  // extern "C"
