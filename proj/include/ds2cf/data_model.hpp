#ifndef DS2CF_DATA_MODEL_HPP
#define DS2CF_DATA_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ds2cf/types.hpp"

namespace ds2cf::data {

// Dense nonnegative D x N matrix; columns are samples.
struct DataMatrix {
  Matrix values;

  int feature_count() const { return static_cast<int>(values.rows()); }
  int sample_count() const { return static_cast<int>(values.cols()); }
};

// Per-column class ids, contiguous in 1..num_classes.
struct GroundTruth {
  std::vector<int> labels;
  int num_classes = 0;
};

struct LoadedDataset {
  DataMatrix matrix;
  std::optional<GroundTruth> truth;
};

// Partition of the columns into a labeled block and an unlabeled block.
// labeled_indices are grouped contiguously by class (class 1 first); in the
// reordered working matrix the labeled block precedes the unlabeled block.
struct SemiSupervisedSplit {
  std::vector<int> labeled_indices;
  std::vector<int> unlabeled_indices;
  std::vector<int> labels;  // class id per labeled index, same order
  int num_classes = 0;

  int labeled_count() const { return static_cast<int>(labeled_indices.size()); }
  int unlabeled_count() const { return static_cast<int>(unlabeled_indices.size()); }
  int total_count() const { return labeled_count() + unlabeled_count(); }
};

enum class Orientation { rows_are_samples, columns_are_samples };

// CSV loader. With has_label_column, the first field of each sample row
// carries the class id (first row when columns are samples). A non-numeric
// first row is treated as a header and skipped.
LoadedDataset load_dense_csv(const std::string& path, Orientation orientation,
                             bool has_label_column);

// IDX image/label pair loader (big-endian magics 0x00000803 / 0x00000801,
// unsigned-byte payload, transparent gzip). Pixels land in [0,1].
LoadedDataset load_idx(const std::string& images_path, const std::string& labels_path);

// Divides every column by its Euclidean norm. An all-zero column is rejected.
DataMatrix normalize_columns(const DataMatrix& x);

// Chooses ceil(proportion * n_k) labeled samples per class (capped at n_k)
// uniformly without replacement; deterministic given the seed.
SemiSupervisedSplit split_semi_supervised(const GroundTruth& truth, double proportion,
                                          std::uint64_t seed);

// Synthetic class blobs: center k is `separation * e_k`, samples add
// |Gaussian(0, noise)| entrywise, columns normalized afterwards.
LoadedDataset generate_synthetic_blobs(int k, int per_class, int dim, double separation,
                                       double noise, std::uint64_t seed);

// Column permutation mapping working position -> original column index
// (labeled block first, then unlabeled).
std::vector<int> working_order(const SemiSupervisedSplit& split);

// Applies working_order to the columns of x.
Matrix reorder_to_split(const Matrix& x, const SemiSupervisedSplit& split);

// Reorders rows of a working-order (N x r) matrix back to original sample order.
Matrix restore_row_order(const Matrix& rows_in_working_order,
                         const SemiSupervisedSplit& split);

}  // namespace ds2cf::data

#endif
