#include "seep/spectral.h"

#include <algorithm>
#include <cmath>

#include "seep/errors.h"
#include "seep/rng.h"

namespace seep {

BetheHessian MakeBetheHessian(const Graph& graph, double r) {
  const int n = graph.num_nodes();
  SparseMatrix diag(n, n);
  diag.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int i = 0; i < n; ++i) {
    diag.insert(i, i) = r * r - 1.0 + graph.degrees()[i];
  }
  BetheHessian b;
  b.r = r;
  b.matrix = diag - r * graph.adjacency();
  b.matrix.makeCompressed();
  return b;
}

NonPositiveSpectrum NonPositiveEigenpairs(const SparseMatrix& matrix,
                                          double tau, int cap,
                                          const EigsOptions& options) {
  const int n = static_cast<int>(matrix.rows());
  cap = std::min(cap, n);
  NonPositiveSpectrum out;
  int batch = std::min(8, cap);
  while (true) {
    const EigsResult e =
        EigsSymmetric(matrix, batch, Which::kSmallestAlgebraic, options);
    int count = 0;
    while (count < batch && e.eigenvalues[count] <= tau) ++count;
    if (count < batch || batch == cap) {
      out.values = e.eigenvalues.head(count);
      out.vectors = e.eigenvectors.leftCols(count);
      out.capped = count == batch && batch < n;
      return out;
    }
    batch = std::min(2 * batch, cap);
  }
}

BetheHessianClustering ClusterBetheHessian(const Graph& graph,
                                           std::uint64_t seed,
                                           const BetheHessianOptions& options) {
  const int n = graph.num_nodes();
  if (n == 0 || !(graph.max_degree() > 0.0)) {
    throw DataError("Bethe Hessian clustering needs a graph with edges");
  }
  BetheHessianClustering out;
  out.r = std::sqrt(graph.total_weight() / n);

  const BetheHessian plus = MakeBetheHessian(graph, out.r);
  const BetheHessian minus = MakeBetheHessian(graph, -out.r);
  // Both operators share the diagonal.
  const double tau =
      1e-10 * plus.matrix.diagonal().cwiseAbs().maxCoeff();

  EigsOptions eigs = options.eigs;
  eigs.seed = SubSeed(seed, "bethe-plus");
  const NonPositiveSpectrum sp =
      NonPositiveEigenpairs(plus.matrix, tau, options.max_groups, eigs);
  eigs.seed = SubSeed(seed, "bethe-minus");
  const NonPositiveSpectrum sm =
      NonPositiveEigenpairs(minus.matrix, tau, options.max_groups, eigs);

  out.k_plus = static_cast<int>(sp.values.size());
  out.k_minus = static_cast<int>(sm.values.size());
  out.capped = sp.capped || sm.capped;
  out.k_hat = out.k_plus + out.k_minus;
  if (out.k_hat == 0) {
    out.k_hat = 1;
    out.fallback_single_group = true;
    out.partition = Partition::Single(n);
    return out;
  }
  if (out.k_hat == 1) {
    out.partition = Partition::Single(n);
    return out;
  }
  out.k_hat = std::min(out.k_hat, n);
  Eigen::MatrixXd q(n, out.k_plus + out.k_minus);
  q.leftCols(out.k_plus) = sp.vectors;
  q.rightCols(out.k_minus) = sm.vectors;
  out.partition =
      KMeans(q, out.k_hat, SubSeed(seed, "kmeans"), options.kmeans).assignment;
  return out;
}

}  // namespace seep
