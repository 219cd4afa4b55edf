#ifndef SEEP_EIGS_H_
#define SEEP_EIGS_H_

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace seep {

enum class Which { kSmallestAlgebraic, kLargestMagnitude };

// Eigenvalues ascending; column j of `eigenvectors` belongs to eigenvalue j.
struct EigsResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

struct EigsOptions {
  // Matrices up to this size are decomposed densely.
  int dense_threshold = 1200;
  // ARPACK convergence tolerance; 0 selects machine precision.
  double tolerance = 0.0;
  int max_iterations = 10000;
  // Seeds the Lanczos starting vector.
  std::uint64_t seed = 0;
};

// `count` eigenpairs of a symmetric matrix. Sparse inputs above the dense
// threshold go through implicitly restarted Lanczos (ARPACK); everything
// else through a full dense decomposition. Throws NumericalError carrying the
// residual norms when the iteration cap is hit, DataError when count is out
// of [1, n].
EigsResult EigsSymmetric(const Eigen::SparseMatrix<double>& matrix, int count,
                         Which which, const EigsOptions& options = {});
EigsResult EigsSymmetric(const Eigen::MatrixXd& matrix, int count, Which which);

}  // namespace seep

#endif  // SEEP_EIGS_H_
