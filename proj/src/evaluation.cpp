#include "ds2cf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ds2cf/deep_factorization.hpp"

namespace ds2cf::eval {

namespace {

// O(n^3) Kuhn-Munkres on a square cost matrix; returns row -> column.
std::vector<int> assignment_min_cost(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

Matrix contingency_table(const std::vector<int>& predicted, const std::vector<int>& truth,
                         int& k, int& c) {
  require(predicted.size() == truth.size(), Error::Kind::invalid_argument,
          "predicted and truth lengths differ");
  require(!predicted.empty(), Error::Kind::invalid_argument, "empty label vectors");
  k = 0;
  c = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    require(predicted[i] >= 1 && truth[i] >= 1, Error::Kind::invalid_argument,
            "labels must be positive");
    k = std::max(k, predicted[i]);
    c = std::max(c, truth[i]);
  }
  Matrix table = Matrix::Zero(k, c);
  for (std::size_t i = 0; i < predicted.size(); ++i)
    table(predicted[i] - 1, truth[i] - 1) += 1.0;
  return table;
}

double pairs_of(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

BestMap best_map(const std::vector<int>& predicted, const std::vector<int>& truth) {
  int k = 0, c = 0;
  const Matrix table = contingency_table(predicted, truth, k, c);
  const int n = std::max(k, c);
  Matrix cost = Matrix::Zero(n, n);
  cost.topLeftCorner(k, c) = -table;
  const std::vector<int> row_to_col = assignment_min_cost(cost);

  BestMap out;
  out.cluster_to_class.assign(k, 0);
  for (int i = 0; i < k; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < c) {
      out.cluster_to_class[i] = j + 1;
      out.matched += static_cast<int>(table(i, j));
    }
  }
  return out;
}

double clustering_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  const BestMap map = best_map(predicted, truth);
  return static_cast<double>(map.matched) / static_cast<double>(predicted.size());
}

double pairwise_f_measure(const std::vector<int>& predicted, const std::vector<int>& truth) {
  int k = 0, c = 0;
  const Matrix table = contingency_table(predicted, truth, k, c);
  require(predicted.size() >= 2, Error::Kind::invalid_argument, "need at least two samples");

  double both = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < c; ++j) both += pairs_of(table(i, j));
  double same_cluster = 0.0;
  for (int i = 0; i < k; ++i) same_cluster += pairs_of(table.row(i).sum());
  double same_class = 0.0;
  for (int j = 0; j < c; ++j) same_class += pairs_of(table.col(j).sum());

  const double precision = same_cluster > 0.0 ? both / same_cluster : 0.0;
  const double recall = same_class > 0.0 ? both / same_class : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double classwise_f_measure(const std::vector<int>& predicted, const std::vector<int>& truth) {
  int k = 0, c = 0;
  const Matrix table = contingency_table(predicted, truth, k, c);
  const double n = static_cast<double>(predicted.size());
  double total = 0.0;
  for (int j = 0; j < c; ++j) {
    const double class_size = table.col(j).sum();
    if (class_size == 0.0) continue;
    double best = 0.0;
    for (int i = 0; i < k; ++i) {
      const double cluster_size = table.row(i).sum();
      if (cluster_size == 0.0 || table(i, j) == 0.0) continue;
      const double precision = table(i, j) / cluster_size;
      const double recall = table(i, j) / class_size;
      best = std::max(best, 2.0 * precision * recall / (precision + recall));
    }
    total += class_size / n * best;
  }
  return total;
}

ClusteringResult kmeans_cosine(const Matrix& rows, int k, int restarts, int max_iters,
                               std::uint64_t seed) {
  const int n = static_cast<int>(rows.rows());
  const int r = static_cast<int>(rows.cols());
  require(k >= 1, Error::Kind::invalid_argument, "cluster count must be positive");
  require(k <= n, Error::Kind::invalid_argument, "cluster count exceeds the sample count");
  require(restarts >= 1 && max_iters >= 1, Error::Kind::invalid_argument,
          "restarts and max_iters must be positive");

  // cosine is scale invariant, so the iteration runs on unit rows
  Matrix unit = rows;
  std::vector<char> is_zero(n, 0);
  for (int i = 0; i < n; ++i) {
    const double norm = unit.row(i).norm();
    if (norm > 0.0)
      unit.row(i) /= norm;
    else
      is_zero[i] = 1;
  }

  const auto point_distance = [&](int i, const Matrix& centroids, int cluster) {
    if (is_zero[i]) return 1.0;
    return 1.0 - unit.row(i).dot(centroids.row(cluster));
  };

  ClusteringResult best;
  best.inertia = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < restarts; ++restart) {
    std::mt19937_64 gen(deep::derive_seed(seed, 1000 + std::uint64_t(restart)));
    // k distinct rows as starting centroids
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(gen() % std::uint64_t(n - i));
      std::swap(order[i], order[j]);
    }
    Matrix centroids(k, r);
    for (int i = 0; i < k; ++i) centroids.row(i) = unit.row(order[i]);

    std::vector<int> assignment(n, 0), previous(n, -1);
    std::vector<double> history;
    double inertia = 0.0;

    for (int it = 0; it < max_iters; ++it) {
      for (int i = 0; i < n; ++i) {
        int arg = 0;
        double bestd = point_distance(i, centroids, 0);
        for (int cc = 1; cc < k; ++cc) {
          const double d = point_distance(i, centroids, cc);
          if (d < bestd) {
            bestd = d;
            arg = cc;
          }
        }
        assignment[i] = arg;
      }

      // refill any emptied cluster with the worst-served point
      std::vector<int> counts(k, 0);
      for (int i = 0; i < n; ++i) ++counts[assignment[i]];
      for (int cc = 0; cc < k; ++cc) {
        if (counts[cc] > 0) continue;
        int worst = -1;
        double worstd = -1.0;
        for (int i = 0; i < n; ++i) {
          if (counts[assignment[i]] <= 1) continue;
          const double d = point_distance(i, centroids, assignment[i]);
          if (d > worstd) {
            worstd = d;
            worst = i;
          }
        }
        if (worst < 0) break;
        --counts[assignment[worst]];
        assignment[worst] = cc;
        counts[cc] = 1;
        if (is_zero[worst])
          centroids.row(cc).setZero();
        else
          centroids.row(cc) = unit.row(worst);
      }

      inertia = 0.0;
      for (int i = 0; i < n; ++i) inertia += point_distance(i, centroids, assignment[i]);
      history.push_back(inertia);

      if (assignment == previous) break;
      previous = assignment;

      for (int cc = 0; cc < k; ++cc) {
        Vector mean = Vector::Zero(r);
        int members = 0;
        for (int i = 0; i < n; ++i) {
          if (assignment[i] != cc) continue;
          mean += unit.row(i).transpose();
          ++members;
        }
        if (members == 0) continue;
        mean /= static_cast<double>(members);
        const double norm = mean.norm();
        if (norm > 0.0) centroids.row(cc) = mean.transpose() / norm;
      }
    }

    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.centroids = centroids;
      best.inertia_history = history;
      best.assignment.assign(n, 0);
      for (int i = 0; i < n; ++i) best.assignment[i] = assignment[i] + 1;
    }
  }
  return best;
}

}  // namespace ds2cf::eval
