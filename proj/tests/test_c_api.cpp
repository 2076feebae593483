#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ds2cf.h"

namespace {

struct DatasetHandle {
  ds2cf_dataset* ptr = nullptr;
  ~DatasetHandle() { ds2cf_dataset_free(ptr); }
};

struct SplitHandle {
  ds2cf_split* ptr = nullptr;
  ~SplitHandle() { ds2cf_split_free(ptr); }
};

struct ModelHandle {
  ds2cf_model* ptr = nullptr;
  ~ModelHandle() { ds2cf_model_free(ptr); }
};

}  // namespace

TEST_CASE("dense buffers round-trip through a dataset handle") {
  const double values[] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};  // 2x3 column-major
  const int labels[] = {1, 2, 1};
  DatasetHandle ds;
  REQUIRE(ds2cf_dataset_from_dense(2, 3, values, labels, &ds.ptr) == DS2CF_OK);
  CHECK(ds2cf_dataset_rows(ds.ptr) == 2);
  CHECK(ds2cf_dataset_cols(ds.ptr) == 3);
  CHECK(ds2cf_dataset_num_classes(ds.ptr) == 2);

  double out[6];
  REQUIRE(ds2cf_dataset_values(ds.ptr, out) == DS2CF_OK);
  for (int i = 0; i < 6; ++i) CHECK(out[i] == values[i]);
  int lab[3];
  REQUIRE(ds2cf_dataset_labels(ds.ptr, lab) == DS2CF_OK);
  CHECK(lab[0] == 1);
  CHECK(lab[1] == 2);
}

TEST_CASE("negative buffers are rejected with a domain status") {
  const double values[] = {1.0, -2.0};
  ds2cf_dataset* ds = nullptr;
  CHECK(ds2cf_dataset_from_dense(2, 1, values, nullptr, &ds) == DS2CF_ERR_DOMAIN);
  CHECK(std::string(ds2cf_last_error()).find("negative") != std::string::npos);
}

TEST_CASE("null arguments produce invalid-argument statuses") {
  CHECK(ds2cf_dataset_from_csv(nullptr, 1, 0, nullptr) == DS2CF_ERR_INVALID_ARGUMENT);
  CHECK(ds2cf_dataset_values(nullptr, nullptr) == DS2CF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("class selection remaps labels in argument order") {
  DatasetHandle ds;
  REQUIRE(ds2cf_dataset_synthetic_blobs(4, 5, 8, 3.0, 0.1, 9, &ds.ptr) == DS2CF_OK);
  const int wanted[] = {3, 1};
  DatasetHandle sub;
  REQUIRE(ds2cf_dataset_select_classes(ds.ptr, wanted, 2, &sub.ptr) == DS2CF_OK);
  CHECK(ds2cf_dataset_cols(sub.ptr) == 10);
  CHECK(ds2cf_dataset_num_classes(sub.ptr) == 2);
  std::vector<int> labels(10);
  REQUIRE(ds2cf_dataset_labels(sub.ptr, labels.data()) == DS2CF_OK);
  for (int lbl : labels) CHECK((lbl == 1 || lbl == 2));
}

TEST_CASE("the full pipeline runs through the C surface") {
  DatasetHandle ds;
  REQUIRE(ds2cf_dataset_synthetic_blobs(3, 8, 12, 3.0, 0.15, 21, &ds.ptr) == DS2CF_OK);
  SplitHandle split;
  REQUIRE(ds2cf_split_create(ds.ptr, 0.4, 22, &split.ptr) == DS2CF_OK);
  CHECK(ds2cf_split_labeled_count(split.ptr) == 12);  // ceil(0.4 * 8) = 4 per class

  ds2cf_config config;
  ds2cf_config_defaults(&config);
  config.layers = 2;
  config.rank = 4;
  config.seed = 23;

  ModelHandle model;
  REQUIRE(ds2cf_fit(ds.ptr, split.ptr, &config, &model.ptr) == DS2CF_OK);
  int rows = 0, cols = 0;
  REQUIRE(ds2cf_model_representation_size(model.ptr, &rows, &cols) == DS2CF_OK);
  CHECK(rows == 24);
  CHECK(cols == 4);
  CHECK(ds2cf_model_layer_iterations(model.ptr, 1) >= 1);
  CHECK(ds2cf_model_layer_iterations(model.ptr, 5) == 0);

  std::vector<double> rep(rows * cols);
  REQUIRE(ds2cf_model_representation(model.ptr, rep.data()) == DS2CF_OK);

  std::vector<int> assignment(rows);
  double inertia = 0.0;
  REQUIRE(ds2cf_kmeans_cosine(rep.data(), rows, cols, 3, 10, 100, 24, assignment.data(),
                              &inertia) == DS2CF_OK);

  std::vector<int> truth(rows);
  REQUIRE(ds2cf_dataset_labels(ds.ptr, truth.data()) == DS2CF_OK);
  double ac = 0.0, f = 0.0;
  REQUIRE(ds2cf_clustering_accuracy(assignment.data(), truth.data(), rows, &ac) == DS2CF_OK);
  REQUIRE(ds2cf_pairwise_f_measure(assignment.data(), truth.data(), rows, &f) == DS2CF_OK);
  CHECK(ac >= 0.5);  // separable blobs should cluster decently
  CHECK(f >= 0.0);
  CHECK(f <= 1.0);
}

TEST_CASE("baseline fits and artifact export work through the C surface") {
  DatasetHandle ds;
  REQUIRE(ds2cf_dataset_synthetic_blobs(2, 6, 6, 3.0, 0.2, 31, &ds.ptr) == DS2CF_OK);
  SplitHandle split;
  REQUIRE(ds2cf_split_create(ds.ptr, 0.5, 32, &split.ptr) == DS2CF_OK);

  ModelHandle cf;
  REQUIRE(ds2cf_cf_fit(ds.ptr, 3, 100, 1e-3, 33, &cf.ptr) == DS2CF_OK);
  ModelHandle ccf;
  REQUIRE(ds2cf_ccf_fit(ds.ptr, split.ptr, 3, 100, 1e-3, 33, &ccf.ptr) == DS2CF_OK);

  // cf carries no graphs; asking for one is a not-found error
  CHECK(ds2cf_model_export_csv(cf.ptr, "sv", "tmp_cf_sv.csv", nullptr) == DS2CF_ERR_NOT_FOUND);
  REQUIRE(ds2cf_model_export_csv(cf.ptr, "trace", "tmp_cf_trace.csv", "method=cf") == DS2CF_OK);

  std::ifstream in("tmp_cf_trace.csv");
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  CHECK(first == "# method=cf");
  CHECK(second.rfind("layer,iter,total_objective", 0) == 0);
  std::remove("tmp_cf_trace.csv");

  ds2cf_config config;
  ds2cf_config_defaults(&config);
  config.layers = 1;
  config.rank = 3;
  ModelHandle deep;
  REQUIRE(ds2cf_fit(ds.ptr, split.ptr, &config, &deep.ptr) == DS2CF_OK);
  REQUIRE(ds2cf_model_export_csv(deep.ptr, "sv", "tmp_sv.csv", nullptr) == DS2CF_OK);
  REQUIRE(ds2cf_model_export_csv(deep.ptr, "q", "tmp_q.csv", nullptr) == DS2CF_OK);
  std::remove("tmp_sv.csv");
  std::remove("tmp_q.csv");

  CHECK(ds2cf_model_export_csv(deep.ptr, "nonsense", "tmp_x.csv", nullptr) ==
        DS2CF_ERR_INVALID_ARGUMENT);
}
