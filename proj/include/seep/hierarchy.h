#ifndef SEEP_HIERARCHY_H_
#define SEEP_HIERARCHY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "seep/graph.h"
#include "seep/partition.h"
#include "seep/partition_search.h"
#include "seep/spectral.h"

namespace seep {

// Expected squared projection error of r random orthonormal directions (one
// of them constant) onto an arbitrary r-group partition of n items:
// (n - r)(r - 1) / (n - 1). Throws DataError unless 1 <= r <= n, n >= 2.
double ExpectedError(int n, int r);

// Piecewise-parabolic expected error given existing equitable partitions into
// kappa_1 < ... < kappa_c groups: between consecutive breakpoints a < b of
// {1, kappa..., n} the value is (b - r)(r - a) / (b - a). Empty `kappas`
// reduces to ExpectedError. Throws DataError on unsorted or out-of-range
// breakpoints.
double ExpectedErrorConditional(int n, int r, std::span<const int> kappas);

struct NullErrorCurve {
  int n = 0;
  std::vector<int> conditioning;
  std::vector<double> values;  // values[r - 1] for r = 1..n
};

NullErrorCurve MakeNullErrorCurve(int n, std::span<const int> kappas = {});

// Omega + gamma * Gamma with Gamma symmetric standard normal (upper triangle
// mirrored) and gamma = gamma_rel |Omega|_2 / |Gamma|_2. The output may carry
// negative entries.
AffinityMatrix PerturbAffinity(const AffinityMatrix& omega, double gamma_rel,
                               std::uint64_t seed);

struct LevelCandidates {
  // partitions[r - 1] splits the current k groups into r groups.
  std::vector<Partition> partitions;
  // mean_errors[r - 1]: mean projection error of partitions[r - 1] against
  // the leading r eigenvectors of the perturbed random-walk matrices.
  std::vector<double> mean_errors;
};

// Candidate coarsenings of a k-group affinity matrix and their mean
// projection errors over `samples` random perturbations.
LevelCandidates IdentifyPartitionsAndErrors(const AffinityMatrix& omega,
                                            int samples, double gamma_rel,
                                            std::uint64_t seed,
                                            const KMeansOptions& kmeans = {});

struct MsleFit {
  double sigma = 1.0;
  double msle = 0.0;
  // The null curve is identically zero while the errors are not.
  bool unidentifiable = false;
};

// Minimizes mean_r (log(e_r + 1) - log(sigma e0_r + 1))^2 over sigma in
// [1e-6, 1e2].
MsleFit FitMsle(std::span<const double> mean_errors,
                const NullErrorCurve& null_curve);

// Group counts in 2..k-1 at which the error curve shows a significant
// equitable partition, ascending. Empty when the unconditional curve is not
// beaten.
std::vector<int> FindRelevantMinima(std::span<const double> mean_errors);

struct DetectionConfig {
  int samples = 100;
  double gamma_rel = 0.05;
  KMeansOptions kmeans;
  BetheHessianOptions bethe;
};

struct LevelDiagnostics {
  // Empty for the coarsest level when the test was skipped (k < 3).
  std::vector<double> mean_errors;
  std::vector<int> minima;
  MsleFit null_fit;
  MsleFit conditional_fit;
};

struct HierarchyLevel {
  int k = 0;
  // Partition of the previous level's groups (of the nodes for level 0).
  Partition relative;
  Partition composed;
  AffinityMatrix affinity;
  // Significance test run on this level's affinity.
  LevelDiagnostics diagnostics;
};

struct HierarchyResult {
  int n = 0;
  std::vector<HierarchyLevel> levels;  // fine to coarse
  BetheHessianClustering finest;
};

// Finest partition from the Bethe Hessian, then repeated agglomeration: the
// affinity of the current partition is tested for significant coarser
// equitable partitions and the finest accepted one becomes the next level.
HierarchyResult InferHierarchy(const Graph& graph,
                               const DetectionConfig& config,
                               std::uint64_t seed);

}  // namespace seep

#endif  // SEEP_HIERARCHY_H_
