#ifndef DS2CF_EVALUATION_HPP
#define DS2CF_EVALUATION_HPP

#include <cstdint>
#include <vector>

#include "ds2cf/types.hpp"

namespace ds2cf::eval {

struct ClusteringResult {
  std::vector<int> assignment;  // cluster id per row, 1..k
  Matrix centroids;             // k x r, unit rows
  double inertia = 0.0;         // sum of (1 - cosine) to the assigned centroid
  std::vector<double> inertia_history;  // winning restart, one value per sweep
};

// K-means under the distance 1 - cos(a, b). Centroids are means of the
// member rows renormalized to unit length; zero-norm rows sit at distance 1
// from every centroid; an emptied cluster steals the point farthest from its
// own centroid. Best of `restarts` seeded runs by inertia.
ClusteringResult kmeans_cosine(const Matrix& rows, int k, int restarts, int max_iters,
                               std::uint64_t seed);

struct BestMap {
  std::vector<int> cluster_to_class;  // 1-based class per cluster id, 0 if unmatched
  int matched = 0;                    // samples whose mapped cluster hits the true class
};

// Optimal cluster-to-class assignment by maximum-weight matching on the
// contingency table (Kuhn-Munkres).
BestMap best_map(const std::vector<int>& predicted, const std::vector<int>& truth);

// Fraction of samples matched under the best mapping.
double clustering_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// Pairwise precision/recall F1 over unordered sample pairs; 0 when the
// precision/recall sum degenerates.
double pairwise_f_measure(const std::vector<int>& predicted, const std::vector<int>& truth);

// Per-class best-cluster F1 averaged with class-size weights; reported as an
// alternative alongside the pairwise default.
double classwise_f_measure(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace ds2cf::eval

#endif
