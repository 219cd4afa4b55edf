#include "seep/partition_search.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "seep/errors.h"
#include "seep/rng.h"

namespace seep {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Squared distances of every point to every centroid (rows x k).
MatrixXd SquaredDistances(const MatrixXd& points, const VectorXd& point_norms,
                          const MatrixXd& centroids) {
  MatrixXd d = -2.0 * points * centroids.transpose();
  d.colwise() += point_norms;
  d.rowwise() += centroids.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

// Greedy k-means++: each new center is the best of a few D^2-weighted
// candidates, judged by the resulting potential.
MatrixXd SeedCentroids(const MatrixXd& points, int k, Rng& rng) {
  const Eigen::Index m = points.rows();
  MatrixXd centroids(k, points.cols());
  VectorXd mind = VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(m, 0);
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  auto dist_to = [&](Eigen::Index j) {
    return (points.rowwise() - points.row(j)).rowwise().squaredNorm().eval();
  };
  std::uniform_int_distribution<Eigen::Index> first(0, m - 1);
  Eigen::Index pick = first(rng);
  VectorXd best_d = dist_to(pick);
  for (int c = 0; c < k; ++c) {
    if (c > 0) {
      const double total = mind.sum();
      if (total > 0.0) {
        std::discrete_distribution<Eigen::Index> dist(mind.data(),
                                                      mind.data() + m);
        double best_pot = std::numeric_limits<double>::infinity();
        for (int t = 0; t < trials; ++t) {
          const Eigen::Index cand = dist(rng);
          VectorXd d = dist_to(cand).cwiseMin(mind);
          const double pot = d.sum();
          if (pot < best_pot) {
            best_pot = pot;
            pick = cand;
            best_d = std::move(d);
          }
        }
      } else {
        // Every point coincides with a chosen center.
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < m; ++i) {
          if (!chosen[i]) free.push_back(i);
        }
        std::uniform_int_distribution<std::size_t> u(0, free.size() - 1);
        pick = free[u(rng)];
        best_d = dist_to(pick).cwiseMin(mind);
      }
    }
    chosen[pick] = 1;
    centroids.row(c) = points.row(pick);
    mind = best_d.cwiseMin(mind);
  }
  return centroids;
}

// Moves the point farthest from its centroid (taken from a cluster with at
// least two members) into each empty cluster.
void RepairEmpty(const MatrixXd& points, const MatrixXd& dist,
                 std::vector<int>& labels, std::vector<int>& sizes,
                 MatrixXd& centroids) {
  const int k = static_cast<int>(sizes.size());
  for (int c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    Eigen::Index best = -1;
    double best_d = -1.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      const double di = dist(i, labels[i]);
      if (di > best_d) {
        best_d = di;
        best = i;
      }
    }
    --sizes[labels[best]];
    labels[best] = c;
    ++sizes[c];
    centroids.row(c) = points.row(best);
  }
}

double Objective(const MatrixXd& points, const std::vector<int>& labels,
                 int k) {
  MatrixXd mean = MatrixXd::Zero(k, points.cols());
  std::vector<int> sizes(k, 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    mean.row(labels[i]) += points.row(i);
    ++sizes[labels[i]];
  }
  for (int c = 0; c < k; ++c) mean.row(c) /= sizes[c];
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - mean.row(labels[i])).squaredNorm();
  }
  return total;
}

// Single-point moves that lower the objective, accounting for the centroid
// shift: moving x from a to b pays off iff
//   n_b / (n_b + 1) |x - mu_b|^2 < n_a / (n_a - 1) |x - mu_a|^2.
// Escapes many of the fixed points Lloyd stops at.
void HartiganPasses(const MatrixXd& points, int k, std::vector<int>& labels,
                    std::vector<int>& sizes, int max_passes) {
  const Eigen::Index m = points.rows();
  MatrixXd mean = MatrixXd::Zero(k, points.cols());
  std::fill(sizes.begin(), sizes.end(), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    mean.row(labels[i]) += points.row(i);
    ++sizes[labels[i]];
  }
  for (int c = 0; c < k; ++c) mean.row(c) /= sizes[c];
  for (int pass = 0; pass < max_passes; ++pass) {
    bool moved = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      const int a = labels[i];
      if (sizes[a] < 2) continue;
      const double na = sizes[a];
      const double remove = na / (na - 1.0) * (points.row(i) - mean.row(a)).squaredNorm();
      int best = a;
      double best_add = remove;
      for (int b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = sizes[b];
        const double add = nb / (nb + 1.0) * (points.row(i) - mean.row(b)).squaredNorm();
        if (add < best_add) {
          best_add = add;
          best = b;
        }
      }
      if (best == a || best_add >= remove * (1.0 - 1e-12)) continue;
      mean.row(a) = (na * mean.row(a) - points.row(i)) / (na - 1.0);
      const double nb = sizes[best];
      mean.row(best) = (nb * mean.row(best) + points.row(i)) / (nb + 1.0);
      --sizes[a];
      ++sizes[best];
      labels[i] = best;
      moved = true;
    }
    if (!moved) break;
  }
}

KMeansResult Lloyd(const MatrixXd& points, const VectorXd& norms, int k,
                   int max_iterations, Rng& rng) {
  const Eigen::Index m = points.rows();
  MatrixXd centroids = SeedCentroids(points, k, rng);
  std::vector<int> labels(m, -1);
  std::vector<int> sizes(k, 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    const MatrixXd dist = SquaredDistances(points, norms, centroids);
    bool changed = false;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::Index c;
      dist.row(i).minCoeff(&c);
      if (labels[i] != c) {
        labels[i] = static_cast<int>(c);
        changed = true;
      }
      ++sizes[c];
    }
    if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
      RepairEmpty(points, dist, labels, sizes, centroids);
      changed = true;
    }
    if (!changed) break;
    centroids.setZero();
    for (Eigen::Index i = 0; i < m; ++i) centroids.row(labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) centroids.row(c) /= sizes[c];
  }
  HartiganPasses(points, k, labels, sizes, max_iterations);
  KMeansResult r;
  r.objective = Objective(points, labels, k);
  r.assignment = Partition::FromLabels(labels);
  return r;
}

}  // namespace

std::vector<KMeansResult> KMeansRestarts(const MatrixXd& points, int k,
                                         std::uint64_t seed,
                                         const KMeansOptions& options) {
  if (k < 1 || k > points.rows()) {
    throw DataError("kmeans: k = " + std::to_string(k) + " with " +
                    std::to_string(points.rows()) + " points");
  }
  if (options.restarts < 1) throw DataError("kmeans: restarts must be >= 1");
  const VectorXd norms = points.rowwise().squaredNorm();
  std::vector<KMeansResult> out;
  out.reserve(options.restarts);
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(SubSeed(seed, static_cast<std::uint64_t>(r)));
    out.push_back(Lloyd(points, norms, k, options.max_iterations, rng));
  }
  return out;
}

KMeansResult KMeans(const MatrixXd& points, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
  std::vector<KMeansResult> all = KMeansRestarts(points, k, seed, options);
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, all[best].objective);
    if (all[i].objective < all[best].objective - tol ||
        (all[i].objective <= all[best].objective + tol &&
         all[i].assignment.assignment() < all[best].assignment.assignment())) {
      best = i;
    }
  }
  return std::move(all[best]);
}

double ProjectionError(const Partition& partition, const MatrixXd& vectors) {
  if (partition.num_items() != vectors.rows()) {
    throw DataError("projection error: partition has " +
                    std::to_string(partition.num_items()) +
                    " items but vectors have " +
                    std::to_string(vectors.rows()) + " rows");
  }
  // (I - H H^+) V
  const MatrixXd group_means = partition.PseudoInverse() * vectors;
  const MatrixXd residual = vectors - partition.Indicator() * group_means;
  return residual.squaredNorm();
}

Partition BestEepPartition(const MatrixXd& vectors, int k, std::uint64_t seed,
                           const KMeansOptions& options) {
  std::vector<KMeansResult> all = KMeansRestarts(vectors, k, seed, options);
  std::vector<double> err(all.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    err[i] = ProjectionError(all[i].assignment, vectors);
    if (i == 0) continue;
    const double tol = 1e-12 * std::max(1.0, err[best]);
    if (err[i] < err[best] - tol ||
        (err[i] <= err[best] + tol &&
         all[i].assignment.assignment() < all[best].assignment.assignment())) {
      best = i;
    }
  }
  return std::move(all[best].assignment);
}

}  // namespace seep
