#ifndef SEEP_PARTITION_SEARCH_H_
#define SEEP_PARTITION_SEARCH_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "seep/partition.h"

namespace seep {

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
};

struct KMeansResult {
  Partition assignment;  // canonical labels
  // sum_j sum_i H_ij |x_i - mu_j|^2 with mu_j the cluster means.
  double objective = 0.0;
};

// Lloyd's algorithm with k-means++ seeding on the rows of `points`. Restart r
// draws from substream r of `seed`. Every returned cluster is non-empty:
// clusters that empty out are refilled with the point farthest from its
// centroid. Throws DataError if k is not in [1, rows].
std::vector<KMeansResult> KMeansRestarts(const Eigen::MatrixXd& points, int k,
                                         std::uint64_t seed,
                                         const KMeansOptions& options = {});

// Best restart by objective; ties go to the lexicographically smallest
// canonical assignment.
KMeansResult KMeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

// Squared projection error |(I - H H^+) V|_F^2 of the columns of `vectors`
// against the partition: the energy left after removing group-wise means.
double ProjectionError(const Partition& partition,
                       const Eigen::MatrixXd& vectors);

// Partition of the rows of `vectors` into k groups minimizing the projection
// error, searched over k-means restarts (k-means on the rows minimizes the
// same quantity).
Partition BestEepPartition(const Eigen::MatrixXd& vectors, int k,
                           std::uint64_t seed,
                           const KMeansOptions& options = {});

}  // namespace seep

#endif  // SEEP_PARTITION_SEARCH_H_
