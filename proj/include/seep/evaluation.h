#ifndef SEEP_EVALUATION_H_
#define SEEP_EVALUATION_H_

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "seep/partition.h"

namespace seep {

// Shannon entropy of the group-size distribution, in nats.
double Entropy(const Partition& p);

double MutualInformation(const Partition& a, const Partition& b);

// Expected mutual information under the permutation (fixed marginals) null,
// summed exactly over the hypergeometric distribution of each contingency
// cell.
double ExpectedMutualInformation(const Partition& a, const Partition& b);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Permutation-null estimate of the expected mutual information: shuffles the
// labels of `b` `samples` times.
MonteCarloEstimate ExpectedMutualInformationMonteCarlo(const Partition& a,
                                                       const Partition& b,
                                                       int samples,
                                                       std::uint64_t seed);

struct AmiScore {
  double value = 0.0;
  // Both partitions have a single group; the score is defined as 1.
  bool both_trivial = false;
};

// (I - E[I]) / ((H_a + H_b) / 2 - E[I]). Throws DataError on item-count
// mismatch.
AmiScore AdjustedMutualInformation(const Partition& a, const Partition& b);
double Ami(const Partition& a, const Partition& b);

struct ScoreReport {
  Eigen::MatrixXd xi;  // xi(i, j) = AMI(truth_i, inferred_j)
  double precision = 0.0;
  double recall = 0.0;
  int n_levels_true = 0;
  int n_levels_inferred = 0;
};

// Precision: mean over inferred partitions of the best match among the truth.
// Recall: mean over truth partitions of the best inferred match. Raw AMI
// values are averaged, small negatives included.
ScoreReport ScoreHierarchy(std::span<const Partition> truth,
                           std::span<const Partition> inferred);

}  // namespace seep

#endif  // SEEP_EVALUATION_H_
