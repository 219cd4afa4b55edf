#ifndef SEEP_SPECTRAL_H_
#define SEEP_SPECTRAL_H_

#include <cstdint>

#include <Eigen/Dense>

#include "seep/eigs.h"
#include "seep/graph.h"
#include "seep/partition.h"
#include "seep/partition_search.h"

namespace seep {

// B_r = (r^2 - 1) I + D - r A.
struct BetheHessian {
  SparseMatrix matrix;
  double r = 0.0;
};

BetheHessian MakeBetheHessian(const Graph& graph, double r);

// Eigenpairs of a symmetric matrix with eigenvalue <= tau.
struct NonPositiveSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  // True when the search stopped at the cap without seeing a positive
  // eigenvalue, so the count is a lower bound.
  bool capped = false;
};

// Requests smallest-algebraic eigenpairs in doubling batches (8, 16, 32, ...)
// until an eigenvalue above tau shows up or `cap` pairs have been computed.
NonPositiveSpectrum NonPositiveEigenpairs(const SparseMatrix& matrix,
                                          double tau, int cap,
                                          const EigsOptions& options = {});

struct BetheHessianOptions {
  int max_groups = 256;
  KMeansOptions kmeans;
  EigsOptions eigs;
};

struct BetheHessianClustering {
  int k_hat = 1;
  int k_plus = 0;   // non-positive eigenvalues of B_r
  int k_minus = 0;  // non-positive eigenvalues of B_{-r}
  double r = 0.0;
  Partition partition;
  // No non-positive eigenvalue was found; a single group is returned.
  bool fallback_single_group = false;
  bool capped = false;
};

// Finest-level clustering: r = sqrt(1'A1 / n), k_hat counts the non-positive
// eigenvalues of B_r and B_{-r}, and k-means on the rows of the stacked
// eigenvectors assigns the groups. Throws DataError for graphs without edges.
BetheHessianClustering ClusterBetheHessian(
    const Graph& graph, std::uint64_t seed,
    const BetheHessianOptions& options = {});

}  // namespace seep

#endif  // SEEP_SPECTRAL_H_
