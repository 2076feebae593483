/* C interface to the ds2cf library: opaque handles, integer status codes.
 * Matrices cross the boundary as dense column-major double buffers. */

#ifndef DS2CF_H
#define DS2CF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds2cf_status {
  DS2CF_OK = 0,
  DS2CF_ERR_INVALID_ARGUMENT = 1,
  DS2CF_ERR_PARSE = 2,
  DS2CF_ERR_DOMAIN = 3,
  DS2CF_ERR_FORMAT = 4,
  DS2CF_ERR_IO = 5,
  DS2CF_ERR_NUMERIC = 6,
  DS2CF_ERR_NOT_FOUND = 7,
  DS2CF_ERR_INTERNAL = 8
} ds2cf_status;

typedef struct ds2cf_dataset ds2cf_dataset;
typedef struct ds2cf_split ds2cf_split;
typedef struct ds2cf_model ds2cf_model;

/* Message for the most recent failure on this thread. */
const char* ds2cf_last_error(void);
const char* ds2cf_status_name(ds2cf_status status);

/* ---- datasets ---- */

/* rows_are_samples: nonzero when each CSV row is one sample.
 * has_labels: nonzero when the first field of each sample is its class id. */
ds2cf_status ds2cf_dataset_from_csv(const char* path, int rows_are_samples, int has_labels,
                                    ds2cf_dataset** out);
ds2cf_status ds2cf_dataset_from_idx(const char* images_path, const char* labels_path,
                                    ds2cf_dataset** out);
ds2cf_status ds2cf_dataset_synthetic_blobs(int classes, int per_class, int dim, double separation,
                                           double noise, uint64_t seed, ds2cf_dataset** out);
ds2cf_status ds2cf_dataset_from_dense(int rows, int cols, const double* column_major,
                                      const int* labels_or_null, ds2cf_dataset** out);

/* New dataset holding the samples of the given classes, labels remapped to
 * 1..count in argument order. */
ds2cf_status ds2cf_dataset_select_classes(const ds2cf_dataset* dataset, const int* class_ids,
                                          int count, ds2cf_dataset** out);
/* New dataset with unit-norm columns. */
ds2cf_status ds2cf_dataset_normalized(const ds2cf_dataset* dataset, ds2cf_dataset** out);

int ds2cf_dataset_rows(const ds2cf_dataset* dataset);
int ds2cf_dataset_cols(const ds2cf_dataset* dataset);
/* 0 when the dataset carries no labels. */
int ds2cf_dataset_num_classes(const ds2cf_dataset* dataset);
ds2cf_status ds2cf_dataset_values(const ds2cf_dataset* dataset, double* out_column_major);
ds2cf_status ds2cf_dataset_labels(const ds2cf_dataset* dataset, int* out);
void ds2cf_dataset_free(ds2cf_dataset* dataset);

/* ---- semi-supervised splits ---- */

ds2cf_status ds2cf_split_create(const ds2cf_dataset* dataset, double labeled_proportion,
                                uint64_t seed, ds2cf_split** out);
int ds2cf_split_labeled_count(const ds2cf_split* split);
void ds2cf_split_free(ds2cf_split* split);

/* ---- solvers ---- */

typedef struct ds2cf_config {
  double alpha;
  double beta;
  double gamma;
  int layers;
  int rank;                  /* constant per-layer rank */
  const int* rank_schedule;  /* optional explicit schedule of length `layers` */
  double epsilon;
  int max_iters_per_layer;
  uint64_t seed;
  int record_trace;
} ds2cf_config;

void ds2cf_config_defaults(ds2cf_config* config);

ds2cf_status ds2cf_fit(const ds2cf_dataset* dataset, const ds2cf_split* split,
                       const ds2cf_config* config, ds2cf_model** out);
ds2cf_status ds2cf_cf_fit(const ds2cf_dataset* dataset, int rank, int max_iters, double epsilon,
                          uint64_t seed, ds2cf_model** out);
ds2cf_status ds2cf_ccf_fit(const ds2cf_dataset* dataset, const ds2cf_split* split, int rank,
                           int max_iters, double epsilon, uint64_t seed, ds2cf_model** out);

/* ---- fitted models ---- */

ds2cf_status ds2cf_model_representation_size(const ds2cf_model* model, int* rows, int* cols);
/* Rows follow the original sample order of the dataset. */
ds2cf_status ds2cf_model_representation(const ds2cf_model* model, double* out_column_major);
/* 1 when every layer met the stopping rule before the iteration cap. */
int ds2cf_model_converged(const ds2cf_model* model);
/* Iterations spent in the given 1-based layer; 0 if out of range. */
int ds2cf_model_layer_iterations(const ds2cf_model* model, int layer);

/* artifact: "sv", "su", "q", "trace" or "representation". The optional
 * header text is embedded as leading '#' comment lines. */
ds2cf_status ds2cf_model_export_csv(const ds2cf_model* model, const char* artifact,
                                    const char* path, const char* header_or_null);
void ds2cf_model_free(ds2cf_model* model);

/* ---- clustering evaluation ---- */

/* rows: n x dim column-major. assignment_out: n entries in 1..k. */
ds2cf_status ds2cf_kmeans_cosine(const double* rows, int n, int dim, int k, int restarts,
                                 int max_iters, uint64_t seed, int* assignment_out,
                                 double* inertia_out);
ds2cf_status ds2cf_clustering_accuracy(const int* predicted, const int* truth, int n,
                                       double* out);
ds2cf_status ds2cf_pairwise_f_measure(const int* predicted, const int* truth, int n, double* out);
ds2cf_status ds2cf_classwise_f_measure(const int* predicted, const int* truth, int n, double* out);

#ifdef __cplusplus
}
#endif

#endif
