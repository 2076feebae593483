#include "ds2cf/data_model.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace ds2cf::data {

namespace {

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  return true;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  std::stringstream ss(line);
  while (std::getline(ss, current, ',')) fields.push_back(current);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::vector<int> contiguous_class_ids(const std::vector<double>& raw_labels) {
  // Class ids are remapped to 1..K preserving the numeric order of the
  // distinct values found in the file.
  std::vector<double> distinct(raw_labels);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> ids(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto it = std::lower_bound(distinct.begin(), distinct.end(), raw_labels[i]);
    ids[i] = static_cast<int>(it - distinct.begin()) + 1;
  }
  return ids;
}

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Error::Kind::io, "cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

std::vector<unsigned char> gunzip(const std::vector<unsigned char>& compressed,
                                  const std::string& path) {
  z_stream strm;
  std::memset(&strm, 0, sizeof(strm));
  // 15+32: zlib/gzip auto detection
  require(inflateInit2(&strm, 15 + 32) == Z_OK, Error::Kind::internal,
          "zlib init failed for " + path);
  std::vector<unsigned char> out;
  std::vector<unsigned char> buffer(1 << 16);
  strm.next_in = const_cast<unsigned char*>(compressed.data());
  strm.avail_in = static_cast<uInt>(compressed.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    strm.next_out = buffer.data();
    strm.avail_out = static_cast<uInt>(buffer.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw Error(Error::Kind::format, "corrupt gzip stream: " + path);
    }
    out.insert(out.end(), buffer.data(), buffer.data() + (buffer.size() - strm.avail_out));
  }
  inflateEnd(&strm);
  return out;
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::string& path) {
  require(offset + 4 <= bytes.size(), Error::Kind::format, "truncated IDX file: " + path);
  return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
         (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

std::vector<unsigned char> read_idx_bytes(const std::string& path) {
  std::vector<unsigned char> bytes = read_file_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) return gunzip(bytes, path);
  return bytes;
}

}  // namespace

LoadedDataset load_dense_csv(const std::string& path, Orientation orientation,
                             bool has_label_column) {
  std::ifstream in(path);
  require(in.good(), Error::Kind::io, "cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  std::size_t field_count = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    std::vector<double> parsed(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], parsed[j])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      // A non-numeric first row is a header; anywhere else it is an error.
      if (first_data_row) continue;
      throw Error(Error::Kind::parse,
                  "non-numeric field at line " + std::to_string(line_number) + " of " + path);
    }
    if (first_data_row) {
      field_count = parsed.size();
      first_data_row = false;
    } else if (parsed.size() != field_count) {
      throw Error(Error::Kind::parse, "wrong field count at line " + std::to_string(line_number) +
                                          " of " + path + ": expected " +
                                          std::to_string(field_count) + ", got " +
                                          std::to_string(parsed.size()));
    }
    rows.push_back(std::move(parsed));
  }
  require(!rows.empty(), Error::Kind::parse, "no data rows in " + path);

  // Normalize the file grid to sample-major rows, then transpose into columns.
  std::vector<std::vector<double>> samples;
  if (orientation == Orientation::rows_are_samples) {
    samples = std::move(rows);
  } else {
    samples.assign(rows[0].size(), std::vector<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j) samples[j][i] = rows[i][j];
  }

  std::vector<double> raw_labels;
  std::size_t feature_offset = 0;
  if (has_label_column) {
    require(samples[0].size() >= 2, Error::Kind::parse,
            "label column declared but rows have a single field: " + path);
    feature_offset = 1;
    raw_labels.reserve(samples.size());
    for (const auto& s : samples) raw_labels.push_back(s[0]);
  }

  const int n = static_cast<int>(samples.size());
  const int d = static_cast<int>(samples[0].size() - feature_offset);
  Matrix values(d, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) {
      double v = samples[j][feature_offset + i];
      if (v < 0.0)
        throw Error(Error::Kind::domain, "negative feature value " + std::to_string(v) +
                                             " for sample " + std::to_string(j + 1) + " in " + path);
      values(i, j) = v;
    }
  }

  LoadedDataset out;
  out.matrix.values = std::move(values);
  if (has_label_column) {
    GroundTruth truth;
    truth.labels = contiguous_class_ids(raw_labels);
    truth.num_classes = truth.labels.empty() ? 0 : *std::max_element(truth.labels.begin(),
                                                                     truth.labels.end());
    out.truth = std::move(truth);
  }
  return out;
}

LoadedDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  const std::vector<unsigned char> img = read_idx_bytes(images_path);
  const std::vector<unsigned char> lab = read_idx_bytes(labels_path);

  const std::uint32_t img_magic = read_be32(img, 0, images_path);
  require(img_magic == 0x00000803u, Error::Kind::format,
          "bad image magic in " + images_path + " (expected 0x00000803)");
  const std::uint32_t lab_magic = read_be32(lab, 0, labels_path);
  require(lab_magic == 0x00000801u, Error::Kind::format,
          "bad label magic in " + labels_path + " (expected 0x00000801)");

  const std::uint32_t n_images = read_be32(img, 4, images_path);
  const std::uint32_t n_rows = read_be32(img, 8, images_path);
  const std::uint32_t n_cols = read_be32(img, 12, images_path);
  const std::uint32_t n_labels = read_be32(lab, 4, labels_path);
  require(n_images == n_labels, Error::Kind::format,
          "image/label count mismatch: " + std::to_string(n_images) + " vs " +
              std::to_string(n_labels));

  const std::size_t pixels = std::size_t(n_rows) * n_cols;
  require(img.size() >= 16 + pixels * n_images, Error::Kind::format,
          "truncated image payload in " + images_path);
  require(lab.size() >= 8 + n_labels, Error::Kind::format,
          "truncated label payload in " + labels_path);

  Matrix values(pixels, n_images);
  for (std::uint32_t j = 0; j < n_images; ++j) {
    const unsigned char* base = img.data() + 16 + std::size_t(j) * pixels;
    for (std::size_t i = 0; i < pixels; ++i) values(i, j) = double(base[i]) / 255.0;
  }

  std::vector<double> raw(n_labels);
  for (std::uint32_t j = 0; j < n_labels; ++j) raw[j] = double(lab[8 + j]);

  LoadedDataset out;
  out.matrix.values = std::move(values);
  GroundTruth truth;
  truth.labels = contiguous_class_ids(raw);
  truth.num_classes =
      truth.labels.empty() ? 0 : *std::max_element(truth.labels.begin(), truth.labels.end());
  out.truth = std::move(truth);
  return out;
}

DataMatrix normalize_columns(const DataMatrix& x) {
  Matrix out = x.values;
  for (int j = 0; j < out.cols(); ++j) {
    double norm = out.col(j).norm();
    if (norm == 0.0)
      throw Error(Error::Kind::domain,
                  "column " + std::to_string(j + 1) + " is all zeros and cannot be normalized");
    out.col(j) /= norm;
  }
  return DataMatrix{std::move(out)};
}

SemiSupervisedSplit split_semi_supervised(const GroundTruth& truth, double proportion,
                                          std::uint64_t seed) {
  require(proportion > 0.0 && proportion <= 1.0, Error::Kind::invalid_argument,
          "labeled proportion must be in (0, 1]");
  require(truth.num_classes >= 1, Error::Kind::invalid_argument, "ground truth has no classes");

  const int c = truth.num_classes;
  std::vector<std::vector<int>> by_class(c);
  for (std::size_t i = 0; i < truth.labels.size(); ++i) {
    int k = truth.labels[i];
    require(k >= 1 && k <= c, Error::Kind::invalid_argument,
            "label out of range at sample " + std::to_string(i + 1));
    by_class[k - 1].push_back(static_cast<int>(i));
  }
  for (int k = 0; k < c; ++k)
    require(!by_class[k].empty(), Error::Kind::invalid_argument,
            "class " + std::to_string(k + 1) + " has no samples");

  std::mt19937_64 gen(seed);
  SemiSupervisedSplit split;
  split.num_classes = c;
  std::vector<char> is_labeled(truth.labels.size(), 0);
  for (int k = 0; k < c; ++k) {
    std::vector<int> pool = by_class[k];
    const int n_k = static_cast<int>(pool.size());
    // ceil with a tiny backoff so 0.4 * 10 does not round to 5
    int take = static_cast<int>(std::ceil(proportion * n_k - 1e-9));
    take = std::max(1, std::min(take, n_k));
    // Fisher-Yates prefix; modulo keeps the draw platform independent
    for (int i = 0; i < take; ++i) {
      int j = i + static_cast<int>(gen() % std::uint64_t(n_k - i));
      std::swap(pool[i], pool[j]);
    }
    std::sort(pool.begin(), pool.begin() + take);
    for (int i = 0; i < take; ++i) {
      split.labeled_indices.push_back(pool[i]);
      split.labels.push_back(k + 1);
      is_labeled[pool[i]] = 1;
    }
  }
  for (std::size_t i = 0; i < truth.labels.size(); ++i)
    if (!is_labeled[i]) split.unlabeled_indices.push_back(static_cast<int>(i));
  return split;
}

LoadedDataset generate_synthetic_blobs(int k, int per_class, int dim, double separation,
                                       double noise, std::uint64_t seed) {
  require(k >= 2, Error::Kind::invalid_argument, "need at least 2 classes");
  require(dim >= k, Error::Kind::invalid_argument, "need dim >= class count");
  require(per_class >= 1, Error::Kind::invalid_argument, "need at least 1 sample per class");
  require(noise >= 0.0, Error::Kind::invalid_argument, "noise must be nonnegative");

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int n = k * per_class;
  Matrix values = Matrix::Zero(dim, n);
  GroundTruth truth;
  truth.labels.resize(n);
  truth.num_classes = k;

  int col = 0;
  for (int cls = 0; cls < k; ++cls) {
    for (int s = 0; s < per_class; ++s, ++col) {
      values(cls, col) = separation;
      if (noise > 0.0)
        for (int i = 0; i < dim; ++i) values(i, col) += std::abs(noise * gauss(gen));
      truth.labels[col] = cls + 1;
    }
  }

  LoadedDataset out;
  out.matrix = normalize_columns(DataMatrix{std::move(values)});
  out.truth = std::move(truth);
  return out;
}

std::vector<int> working_order(const SemiSupervisedSplit& split) {
  std::vector<int> order;
  order.reserve(split.total_count());
  order.insert(order.end(), split.labeled_indices.begin(), split.labeled_indices.end());
  order.insert(order.end(), split.unlabeled_indices.begin(), split.unlabeled_indices.end());
  return order;
}

Matrix reorder_to_split(const Matrix& x, const SemiSupervisedSplit& split) {
  require(x.cols() == split.total_count(), Error::Kind::invalid_argument,
          "split does not cover the matrix columns");
  const std::vector<int> order = working_order(split);
  Matrix out(x.rows(), x.cols());
  for (int j = 0; j < x.cols(); ++j) out.col(j) = x.col(order[j]);
  return out;
}

Matrix restore_row_order(const Matrix& rows_in_working_order, const SemiSupervisedSplit& split) {
  require(rows_in_working_order.rows() == split.total_count(), Error::Kind::invalid_argument,
          "row count does not match the split");
  const std::vector<int> order = working_order(split);
  Matrix out(rows_in_working_order.rows(), rows_in_working_order.cols());
  for (int j = 0; j < rows_in_working_order.rows(); ++j)
    out.row(order[j]) = rows_in_working_order.row(j);
  return out;
}

}  // namespace ds2cf::data
