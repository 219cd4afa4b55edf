#include "seep/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "seep/errors.h"
#include "seep/rng.h"

namespace seep {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double SpectralNorm(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Eigenvectors of the uniform random walk matrix of `weights`, columns
// ordered by descending |eigenvalue|.
MatrixXd RandomWalkEigenvectors(const MatrixXd& weights) {
  const MatrixXd w = UniformRandomWalk(weights);
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(w);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the random walk matrix failed");
  }
  const VectorXd& values = solver.eigenvalues();
  std::vector<Eigen::Index> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Ascending input, so on |lambda| ties the positive eigenvalue goes first.
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(values[a]) > std::abs(values[b]);
  });
  MatrixXd out(w.rows(), w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    out.col(j) = solver.eigenvectors().col(idx[j]);
  }
  return out;
}

double MsleAt(std::span<const double> errors, const std::vector<double>& null,
              double sigma) {
  double total = 0.0;
  for (std::size_t r = 0; r < errors.size(); ++r) {
    const double d = std::log1p(errors[r]) - std::log1p(sigma * null[r]);
    total += d * d;
  }
  return total / static_cast<double>(errors.size());
}

}  // namespace

double ExpectedError(int n, int r) {
  if (n < 2 || r < 1 || r > n) {
    throw DataError("expected error: need n >= 2 and 1 <= r <= n, got n = " +
                    std::to_string(n) + ", r = " + std::to_string(r));
  }
  return static_cast<double>(n - r) * (r - 1) / (n - 1);
}

double ExpectedErrorConditional(int n, int r, std::span<const int> kappas) {
  if (kappas.empty()) return ExpectedError(n, r);
  if (r < 1 || r > n) {
    throw DataError("expected error: r = " + std::to_string(r) +
                    " outside [1, " + std::to_string(n) + "]");
  }
  int prev = 1;
  for (int kappa : kappas) {
    if (kappa <= prev || kappa >= n) {
      throw DataError("expected error: conditioning counts must satisfy 1 < "
                      "k_1 < ... < k_c < n");
    }
    prev = kappa;
  }
  int lo = 1;
  for (std::size_t i = 0; i <= kappas.size(); ++i) {
    const int hi = i < kappas.size() ? kappas[i] : n;
    if (r <= hi) {
      return static_cast<double>(hi - r) * (r - lo) / (hi - lo);
    }
    lo = hi;
  }
  return 0.0;  // unreachable: r <= n
}

NullErrorCurve MakeNullErrorCurve(int n, std::span<const int> kappas) {
  NullErrorCurve c;
  c.n = n;
  c.conditioning.assign(kappas.begin(), kappas.end());
  c.values.resize(n);
  for (int r = 1; r <= n; ++r) {
    c.values[r - 1] = ExpectedErrorConditional(n, r, kappas);
  }
  return c;
}

AffinityMatrix PerturbAffinity(const AffinityMatrix& omega, double gamma_rel,
                               std::uint64_t seed) {
  if (gamma_rel < 0.0) throw DataError("perturbation: gamma_rel < 0");
  AffinityMatrix out = omega;
  if (gamma_rel == 0.0 || omega.num_groups() == 0) return out;
  const int k = omega.num_groups();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd gamma(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      gamma(i, j) = normal(rng);
      gamma(j, i) = gamma(i, j);
    }
  }
  const double gnorm = SpectralNorm(gamma);
  if (gnorm == 0.0) return out;
  out.values += (gamma_rel * SpectralNorm(omega.values) / gnorm) * gamma;
  return out;
}

LevelCandidates IdentifyPartitionsAndErrors(const AffinityMatrix& omega,
                                            int samples, double gamma_rel,
                                            std::uint64_t seed,
                                            const KMeansOptions& kmeans) {
  const int k = omega.num_groups();
  if (samples < 1) throw DataError("identify partitions: samples must be >= 1");
  LevelCandidates out;
  if (k < 1) return out;
  if (k < 3) {
    out.partitions.push_back(Partition::Single(k));
    if (k == 2) out.partitions.push_back(Partition::Identity(k));
    out.mean_errors.assign(k, 0.0);
    return out;
  }

  const MatrixXd v = RandomWalkEigenvectors(omega.values);
  out.partitions.reserve(k);
  out.partitions.push_back(Partition::Single(k));
  const std::uint64_t kmeans_seed = SubSeed(seed, "kmeans");
  for (int r = 2; r <= k - 1; ++r) {
    out.partitions.push_back(BestEepPartition(
        v.leftCols(r), r, SubSeed(kmeans_seed, static_cast<std::uint64_t>(r)),
        kmeans));
  }
  out.partitions.push_back(Partition::Identity(k));

  out.mean_errors.assign(k, 0.0);
  const std::uint64_t perturb_seed = SubSeed(seed, "perturbations");
  for (int z = 0; z < samples; ++z) {
    const AffinityMatrix p = PerturbAffinity(
        omega, gamma_rel, SubSeed(perturb_seed, static_cast<std::uint64_t>(z)));
    const MatrixXd u = RandomWalkEigenvectors(p.values);
    for (int r = 1; r <= k; ++r) {
      out.mean_errors[r - 1] +=
          ProjectionError(out.partitions[r - 1], u.leftCols(r));
    }
  }
  for (double& e : out.mean_errors) e /= samples;
  return out;
}

MsleFit FitMsle(std::span<const double> mean_errors,
                const NullErrorCurve& null_curve) {
  if (mean_errors.size() != null_curve.values.size()) {
    throw DataError("msle: error curve has " +
                    std::to_string(mean_errors.size()) +
                    " entries, null curve " +
                    std::to_string(null_curve.values.size()));
  }
  MsleFit fit;
  if (mean_errors.empty()) return fit;
  const auto& null = null_curve.values;
  const bool null_zero =
      std::all_of(null.begin(), null.end(), [](double x) { return x == 0.0; });
  if (null_zero) {
    fit.sigma = 1.0;
    fit.msle = MsleAt(mean_errors, null, 1.0);
    fit.unidentifiable = std::any_of(mean_errors.begin(), mean_errors.end(),
                                     [](double x) { return x != 0.0; });
    return fit;
  }

  // Bracket on a log grid, then golden-section inside the bracket.
  constexpr double kLo = 1e-6, kHi = 1e2;
  constexpr int kGrid = 161;  // 20 points per decade
  std::vector<double> grid(kGrid);
  int best = 0;
  double best_val = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kGrid - 1));
    const double val = MsleAt(mean_errors, null, grid[i]);
    if (i == 0 || val < best_val) {
      best = i;
      best_val = val;
    }
  }
  double a = grid[std::max(best - 1, 0)];
  double b = grid[std::min(best + 1, kGrid - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = MsleAt(mean_errors, null, c);
  double fd = MsleAt(mean_errors, null, d);
  while (b - a > 1e-8 * c) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = MsleAt(mean_errors, null, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = MsleAt(mean_errors, null, d);
    }
  }
  fit.sigma = (a + b) / 2.0;
  fit.msle = MsleAt(mean_errors, null, fit.sigma);
  if (best_val < fit.msle) {
    fit.sigma = grid[best];
    fit.msle = best_val;
  }
  return fit;
}

std::vector<int> FindRelevantMinima(std::span<const double> mean_errors) {
  const int k = static_cast<int>(mean_errors.size());
  std::vector<int> accepted;
  if (k < 3) return accepted;
  double best = FitMsle(mean_errors, MakeNullErrorCurve(k)).msle;
  // Best-first forward selection: each round adds the breakpoint whose
  // conditional curve fits best, as long as it strictly improves the fit.
  while (true) {
    int best_kappa = -1;
    double best_round = best;
    for (int kappa = 2; kappa <= k - 1; ++kappa) {
      if (std::binary_search(accepted.begin(), accepted.end(), kappa)) continue;
      std::vector<int> trial = accepted;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), kappa), kappa);
      const double m = FitMsle(mean_errors, MakeNullErrorCurve(k, trial)).msle;
      if (m < best_round) {
        best_round = m;
        best_kappa = kappa;
      }
    }
    if (best_kappa < 0) break;
    accepted.insert(
        std::upper_bound(accepted.begin(), accepted.end(), best_kappa),
        best_kappa);
    best = best_round;
  }
  return accepted;
}

HierarchyResult InferHierarchy(const Graph& graph,
                               const DetectionConfig& config,
                               std::uint64_t seed) {
  if (graph.num_nodes() == 0) throw DataError("infer hierarchy: empty graph");
  HierarchyResult result;
  result.n = graph.num_nodes();
  result.finest =
      ClusterBetheHessian(graph, SubSeed(seed, "bethe"), config.bethe);

  HierarchyLevel first;
  first.k = result.finest.partition.num_groups();
  first.relative = result.finest.partition;
  first.composed = result.finest.partition;
  first.affinity = EstimateAffinity(graph, first.composed);
  result.levels.push_back(std::move(first));

  const std::uint64_t level_seed = SubSeed(seed, "levels");
  for (std::uint64_t u = 0;; ++u) {
    HierarchyLevel& current = result.levels.back();
    if (current.k < 3) break;
    const LevelCandidates cand = IdentifyPartitionsAndErrors(
        current.affinity, config.samples, config.gamma_rel,
        SubSeed(level_seed, u), config.kmeans);
    LevelDiagnostics& diag = current.diagnostics;
    diag.mean_errors = cand.mean_errors;
    diag.minima = FindRelevantMinima(cand.mean_errors);
    diag.null_fit = FitMsle(cand.mean_errors, MakeNullErrorCurve(current.k));
    diag.conditional_fit = FitMsle(
        cand.mean_errors, MakeNullErrorCurve(current.k, diag.minima));
    if (diag.minima.empty()) break;

    const int next_k = diag.minima.back();
    HierarchyLevel next;
    next.k = next_k;
    next.relative = cand.partitions[next_k - 1];
    next.composed = Compose(current.composed, next.relative);
    next.affinity = EstimateAffinity(graph, next.composed);
    result.levels.push_back(std::move(next));
  }
  return result;
}

}  // namespace seep
