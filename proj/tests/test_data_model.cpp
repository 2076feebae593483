#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "ds2cf/constraints.hpp"
#include "ds2cf/data_model.hpp"

using namespace ds2cf;
using namespace ds2cf::data;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "tmp_" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::string write_temp_bytes(const std::string& name, const std::vector<unsigned char>& bytes) {
  const std::string path = "tmp_" + name;
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  return path;
}

void push_be32(std::vector<unsigned char>& v, std::uint32_t x) {
  v.push_back((x >> 24) & 0xff);
  v.push_back((x >> 16) & 0xff);
  v.push_back((x >> 8) & 0xff);
  v.push_back(x & 0xff);
}

std::vector<unsigned char> tiny_idx_images() {
  std::vector<unsigned char> v;
  push_be32(v, 0x00000803);
  push_be32(v, 1);  // images
  push_be32(v, 2);  // rows
  push_be32(v, 2);  // cols
  v.insert(v.end(), {0, 255, 0, 255});
  return v;
}

std::vector<unsigned char> tiny_idx_labels() {
  std::vector<unsigned char> v;
  push_be32(v, 0x00000801);
  push_be32(v, 1);
  v.push_back(7);
  return v;
}

std::vector<unsigned char> gzip_bytes(const std::vector<unsigned char>& raw) {
  z_stream strm{};
  REQUIRE(deflateInit2(&strm, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                       Z_DEFAULT_STRATEGY) == Z_OK);
  std::vector<unsigned char> out(raw.size() + 128);
  strm.next_in = const_cast<unsigned char*>(raw.data());
  strm.avail_in = static_cast<uInt>(raw.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  REQUIRE(deflate(&strm, Z_FINISH) == Z_STREAM_END);
  out.resize(out.size() - strm.avail_out);
  deflateEnd(&strm);
  return out;
}

}  // namespace

TEST_CASE("csv loader transposes rows-are-samples input") {
  const auto path = write_temp("basic.csv", "1,0\n0,1\n1,1\n");
  const auto loaded = load_dense_csv(path, Orientation::rows_are_samples, false);
  REQUIRE(loaded.matrix.feature_count() == 2);
  REQUIRE(loaded.matrix.sample_count() == 3);
  CHECK(loaded.matrix.values(0, 0) == 1.0);
  CHECK(loaded.matrix.values(1, 0) == 0.0);
  CHECK(loaded.matrix.values(0, 1) == 0.0);
  CHECK(loaded.matrix.values(1, 1) == 1.0);
  CHECK(loaded.matrix.values(0, 2) == 1.0);
  CHECK(loaded.matrix.values(1, 2) == 1.0);
  CHECK_FALSE(loaded.truth.has_value());
  std::remove(path.c_str());
}

TEST_CASE("csv loader keeps columns-are-samples input") {
  const auto path = write_temp("cols.csv", "1,0,1\n0,1,1\n");
  const auto loaded = load_dense_csv(path, Orientation::columns_are_samples, false);
  REQUIRE(loaded.matrix.feature_count() == 2);
  REQUIRE(loaded.matrix.sample_count() == 3);
  CHECK(loaded.matrix.values(0, 2) == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("csv loader rejects negative values with a domain error") {
  const auto path = write_temp("neg.csv", "1,2\n-0.5,3\n");
  CHECK_THROWS_WITH_AS(load_dense_csv(path, Orientation::rows_are_samples, false),
                       doctest::Contains("negative"), Error);
  std::remove(path.c_str());
}

TEST_CASE("csv loader reports the line of a malformed row") {
  const auto path = write_temp("ragged.csv", "1,2\n3\n");
  try {
    load_dense_csv(path, Orientation::rows_are_samples, false);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("csv loader extracts a leading label column and skips headers") {
  // fashion-style layout: label then pixels, rows are samples
  std::string content = "label,p1,p2,p3,p4\n";
  content += "9,0,1,2,3\n";
  content += "0,4,5,6,7\n";
  const auto path = write_temp("labeled.csv", content);
  const auto loaded = load_dense_csv(path, Orientation::rows_are_samples, true);
  REQUIRE(loaded.matrix.feature_count() == 4);
  REQUIRE(loaded.matrix.sample_count() == 2);
  REQUIRE(loaded.truth.has_value());
  CHECK(loaded.truth->num_classes == 2);
  CHECK(loaded.truth->labels[0] == 2);  // 9 maps after 0
  CHECK(loaded.truth->labels[1] == 1);
  CHECK(loaded.matrix.values(0, 0) == 0.0);
  CHECK(loaded.matrix.values(3, 1) == 7.0);
  std::remove(path.c_str());
}

TEST_CASE("idx loader scales pixels and reads labels") {
  const auto img_path = write_temp_bytes("img.idx", tiny_idx_images());
  const auto lab_path = write_temp_bytes("lab.idx", tiny_idx_labels());
  const auto loaded = load_idx(img_path, lab_path);
  REQUIRE(loaded.matrix.feature_count() == 4);
  REQUIRE(loaded.matrix.sample_count() == 1);
  CHECK(loaded.matrix.values(0, 0) == 0.0);
  CHECK(loaded.matrix.values(1, 0) == 1.0);
  CHECK(loaded.matrix.values(2, 0) == 0.0);
  CHECK(loaded.matrix.values(3, 0) == 1.0);
  REQUIRE(loaded.truth.has_value());
  CHECK(loaded.truth->labels[0] == 1);  // single class, remapped from raw 7
  std::remove(img_path.c_str());
  std::remove(lab_path.c_str());
}

TEST_CASE("idx loader rejects a label magic in the image slot") {
  const auto img_path = write_temp_bytes("badmagic.idx", tiny_idx_labels());
  const auto lab_path = write_temp_bytes("lab2.idx", tiny_idx_labels());
  CHECK_THROWS_AS(load_idx(img_path, lab_path), Error);
  std::remove(img_path.c_str());
  std::remove(lab_path.c_str());
}

TEST_CASE("idx loader rejects image/label count mismatch") {
  auto labels = tiny_idx_labels();
  labels[7] = 2;  // claim two labels
  labels.push_back(3);
  const auto img_path = write_temp_bytes("img3.idx", tiny_idx_images());
  const auto lab_path = write_temp_bytes("lab3.idx", labels);
  CHECK_THROWS_WITH_AS(load_idx(img_path, lab_path), doctest::Contains("mismatch"), Error);
  std::remove(img_path.c_str());
  std::remove(lab_path.c_str());
}

TEST_CASE("gzip-compressed idx pair loads identically") {
  const auto plain_img = write_temp_bytes("p_img.idx", tiny_idx_images());
  const auto plain_lab = write_temp_bytes("p_lab.idx", tiny_idx_labels());
  const auto gz_img = write_temp_bytes("g_img.idx.gz", gzip_bytes(tiny_idx_images()));
  const auto gz_lab = write_temp_bytes("g_lab.idx.gz", gzip_bytes(tiny_idx_labels()));
  const auto a = load_idx(plain_img, plain_lab);
  const auto b = load_idx(gz_img, gz_lab);
  CHECK((a.matrix.values - b.matrix.values).norm() == 0.0);
  CHECK(a.truth->labels == b.truth->labels);
  for (const auto& p : {plain_img, plain_lab, gz_img, gz_lab}) std::remove(p.c_str());
}

TEST_CASE("normalize_columns scales a 3-4-5 column") {
  DataMatrix x;
  x.values.resize(2, 1);
  x.values << 3.0, 4.0;
  const auto out = normalize_columns(x);
  CHECK(out.values(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out.values(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("normalize_columns is idempotent and unitizes random data") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  DataMatrix x;
  x.values.resize(5, 8);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 8; ++j) x.values(i, j) = uni(gen) + 0.01;
  const auto once = normalize_columns(x);
  for (int j = 0; j < 8; ++j) CHECK(std::abs(once.values.col(j).norm() - 1.0) <= 1e-12);
  const auto twice = normalize_columns(once);
  CHECK((twice.values - once.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("normalize_columns names the offending zero column") {
  DataMatrix x;
  x.values = Matrix::Zero(3, 2);
  x.values(0, 0) = 1.0;
  CHECK_THROWS_WITH_AS(normalize_columns(x), doctest::Contains("column 2"), Error);
}

TEST_CASE("split picks 40 percent per class with ceiling") {
  GroundTruth truth;
  truth.num_classes = 3;
  for (int k = 1; k <= 3; ++k)
    for (int i = 0; i < 10; ++i) truth.labels.push_back(k);
  const auto split = split_semi_supervised(truth, 0.4, 11);
  CHECK(split.labeled_count() == 12);
  CHECK(split.unlabeled_count() == 18);
  for (int k = 1; k <= 3; ++k)
    CHECK(std::count(split.labels.begin(), split.labels.end(), k) == 4);
}

TEST_CASE("split with proportion 1 labels everything") {
  GroundTruth truth;
  truth.num_classes = 2;
  truth.labels = {1, 1, 2, 2, 2};
  const auto split = split_semi_supervised(truth, 1.0, 3);
  CHECK(split.labeled_count() == 5);
  CHECK(split.unlabeled_count() == 0);
}

TEST_CASE("split is deterministic and covers all columns") {
  GroundTruth truth;
  truth.num_classes = 4;
  std::mt19937_64 gen(5);
  for (int i = 0; i < 37; ++i) truth.labels.push_back(1 + int(gen() % 4));
  const auto a = split_semi_supervised(truth, 0.3, 99);
  const auto b = split_semi_supervised(truth, 0.3, 99);
  CHECK(a.labeled_indices == b.labeled_indices);
  CHECK(a.unlabeled_indices == b.unlabeled_indices);

  std::set<int> seen(a.labeled_indices.begin(), a.labeled_indices.end());
  seen.insert(a.unlabeled_indices.begin(), a.unlabeled_indices.end());
  CHECK(seen.size() == truth.labels.size());
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == int(truth.labels.size()) - 1);

  // per-class ceiling property
  for (int k = 1; k <= 4; ++k) {
    const auto n_k = std::count(truth.labels.begin(), truth.labels.end(), k);
    const auto taken = std::count(a.labels.begin(), a.labels.end(), k);
    CHECK(taken == std::min<long>(n_k, (long)std::ceil(0.3 * double(n_k) - 1e-9)));
  }
}

TEST_CASE("split rejects an empty class") {
  GroundTruth truth;
  truth.num_classes = 3;
  truth.labels = {1, 1, 2};  // class 3 missing
  CHECK_THROWS_AS(split_semi_supervised(truth, 0.5, 1), Error);
}

TEST_CASE("reordering to the split layout permutes columns") {
  GroundTruth truth;
  truth.num_classes = 2;
  truth.labels = {2, 1, 2, 1};
  const auto split = split_semi_supervised(truth, 0.5, 17);
  Matrix x(1, 4);
  x << 10, 20, 30, 40;
  const Matrix xw = reorder_to_split(x, split);
  std::multiset<double> before(x.data(), x.data() + 4);
  std::multiset<double> after(xw.data(), xw.data() + 4);
  CHECK(before == after);
  // labeled block first, grouped by class
  const auto order = working_order(split);
  for (int i = 0; i < split.labeled_count(); ++i) CHECK(order[i] == split.labeled_indices[i]);
}

TEST_CASE("synthetic blobs separate classes in cosine distance") {
  const auto loaded = generate_synthetic_blobs(3, 20, 16, 5.0, 0.1, 42);
  REQUIRE(loaded.matrix.feature_count() == 16);
  REQUIRE(loaded.matrix.sample_count() == 60);
  CHECK(loaded.matrix.values.minCoeff() >= 0.0);

  double max_within = -1.0, min_between = 2.0;
  const auto& truth = *loaded.truth;
  for (int i = 0; i < 60; ++i) {
    for (int j = i + 1; j < 60; ++j) {
      const double d = 1.0 - ds2cf::constraints::cosine_similarity(loaded.matrix.values.col(i),
                                                                   loaded.matrix.values.col(j));
      if (truth.labels[i] == truth.labels[j])
        max_within = std::max(max_within, d);
      else
        min_between = std::min(min_between, d);
    }
  }
  CHECK(min_between > max_within);
}

TEST_CASE("synthetic blobs with zero noise collapse onto unit centers") {
  const auto loaded = generate_synthetic_blobs(2, 3, 4, 7.0, 0.0, 1);
  for (int j = 0; j < 6; ++j) {
    const int cls = loaded.truth->labels[j] - 1;
    for (int i = 0; i < 4; ++i)
      CHECK(loaded.matrix.values(i, j) == (i == cls ? 1.0 : 0.0));
  }
}

TEST_CASE("synthetic blobs are deterministic per seed") {
  const auto a = generate_synthetic_blobs(3, 5, 8, 2.0, 0.3, 123);
  const auto b = generate_synthetic_blobs(3, 5, 8, 2.0, 0.3, 123);
  CHECK((a.matrix.values - b.matrix.values).norm() == 0.0);
}
