#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "seep/eigs.h"
#include "seep/errors.h"
#include "seep/evaluation.h"
#include "seep/graph.h"
#include "seep/rng.h"
#include "seep/spectral.h"

namespace seep {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Graph Complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  }
  return GraphFromEdges(e, n);
}

// Planted partition with `k` equal groups; c_in, c_out expected degrees.
Graph Planted(int n, int k, double c_in, double c_out, std::uint64_t seed,
              std::vector<int>* truth = nullptr) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> g(n);
  for (int i = 0; i < n; ++i) g[i] = i * k / n;
  const double s = static_cast<double>(n) / k;
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = g[i] == g[j] ? c_in / s : c_out / (n - s);
      if (u(rng) < p) e.push_back({i, j});
    }
  }
  if (truth) *truth = g;
  return GraphFromEdges(e, n);
}

double MaxResidual(const SparseMatrix& m, const EigsResult& r) {
  const MatrixXd res =
      m * r.eigenvectors - r.eigenvectors * r.eigenvalues.asDiagonal();
  return res.colwise().norm().maxCoeff();
}

// --- eigensolver -----------------------------------------------------------

TEST(EigsTest, Identity) {
  const EigsResult r = EigsSymmetric(MatrixXd(MatrixXd::Identity(5, 5)), 2,
                                     Which::kSmallestAlgebraic);
  EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 1.0, 1e-14);
  EXPECT_NEAR((r.eigenvectors.transpose() * r.eigenvectors - MatrixXd::Identity(2, 2))
                  .cwiseAbs()
                  .maxCoeff(),
              0.0, 1e-12);
}

TEST(EigsTest, LaplacianK3) {
  const EigsResult r = EigsSymmetric(Laplacian(Complete(3)), 1, Which::kSmallestAlgebraic);
  EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.eigenvectors(0, 0)), 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(r.eigenvectors.col(0).cwiseAbs().maxCoeff() -
                  r.eigenvectors.col(0).cwiseAbs().minCoeff(),
              0.0, 1e-12);
}

TEST(EigsTest, DiagonalOrderings) {
  const MatrixXd d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const EigsResult small = EigsSymmetric(d, 2, Which::kSmallestAlgebraic);
  EXPECT_NEAR(small.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(small.eigenvalues[1], 2.0, 1e-14);
  const MatrixXd neg = Eigen::Vector3d(0.5, -3, 2).asDiagonal();
  const EigsResult big = EigsSymmetric(neg, 2, Which::kLargestMagnitude);
  std::vector<double> got = {big.eigenvalues[0], big.eigenvalues[1]};
  std::sort(got.begin(), got.end());
  EXPECT_NEAR(got[0], -3.0, 1e-14);
  EXPECT_NEAR(got[1], 2.0, 1e-14);
}

TEST(EigsTest, RejectsBadCount) {
  const MatrixXd m = MatrixXd::Identity(3, 3);
  EXPECT_THROW(EigsSymmetric(m, 0, Which::kSmallestAlgebraic), DataError);
  EXPECT_THROW(EigsSymmetric(m, 4, Which::kSmallestAlgebraic), DataError);
}

TEST(EigsTest, LanczosMatchesDenseOnLargeSparseMatrix) {
  const Graph g = Planted(1500, 3, 12, 3, 11);
  const SparseMatrix l = Laplacian(g);
  const EigsResult sparse = EigsSymmetric(l, 6, Which::kSmallestAlgebraic);
  Eigen::SelfAdjointEigenSolver<MatrixXd> dense{MatrixXd(l)};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(sparse.eigenvalues[i], dense.eigenvalues()[i], 1e-8) << i;
  }
  EXPECT_LT(MaxResidual(l, sparse), 1e-8);
  EXPECT_NEAR((sparse.eigenvectors.transpose() * sparse.eigenvectors -
               MatrixXd::Identity(6, 6))
                  .cwiseAbs()
                  .maxCoeff(),
              0.0, 1e-8);

  const SparseMatrix w = UniformRandomWalk(g);
  const EigsResult top = EigsSymmetric(w, 4, Which::kLargestMagnitude);
  Eigen::SelfAdjointEigenSolver<MatrixXd> dw{MatrixXd(w)};
  std::vector<double> mags(dw.eigenvalues().data(),
                           dw.eigenvalues().data() + dw.eigenvalues().size());
  std::sort(mags.begin(), mags.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  std::vector<double> got(top.eigenvalues.data(), top.eigenvalues.data() + 4);
  std::sort(got.begin(), got.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[i], mags[i], 1e-8) << i;
}

// --- Bethe Hessian ---------------------------------------------------------

TEST(BetheHessianTest, ROneIsLaplacian) {
  std::vector<int> truth;
  const Graph g = Planted(60, 2, 5, 1, 3, &truth);
  const MatrixXd b = MatrixXd(MakeBetheHessian(g, 1.0).matrix);
  EXPECT_TRUE(b.isApprox(MatrixXd(Laplacian(g))));
}

TEST(BetheHessianTest, RZeroIsDegreeMinusIdentity) {
  const Graph g = Complete(5);
  const MatrixXd b = MatrixXd(MakeBetheHessian(g, 0.0).matrix);
  const MatrixXd expected =
      MatrixXd(g.degrees().asDiagonal()) - MatrixXd::Identity(5, 5);
  EXPECT_TRUE(b.isApprox(expected));
}

TEST(BetheHessianTest, K2AtRTwo) {
  const Graph g = Complete(2);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es{MatrixXd(MakeBetheHessian(g, 2.0).matrix)};
  EXPECT_NEAR(es.eigenvalues()[0], 2.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues()[1], 6.0, 1e-12);
}

TEST(BetheHessianTest, ActionOnConstantVector) {
  const Graph g = Planted(80, 2, 6, 2, 4);
  const double r = 1.7;
  const VectorXd ones = VectorXd::Ones(80);
  const VectorXd got = MakeBetheHessian(g, r).matrix * ones;
  const VectorXd expected =
      (r * r - 1.0) * ones + (1.0 - r) * g.degrees();
  EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NonPositiveEigenpairsTest, CountsAcrossBatches) {
  VectorXd diag(40);
  for (int i = 0; i < 40; ++i) diag[i] = i < 19 ? -1.0 - i : 1.0 + i;
  const SparseMatrix m = MatrixXd(diag.asDiagonal()).sparseView();
  const NonPositiveSpectrum s = NonPositiveEigenpairs(m, 0.0, 40);
  EXPECT_EQ(s.values.size(), 19);
  EXPECT_FALSE(s.capped);
  const NonPositiveSpectrum capped = NonPositiveEigenpairs(m, 0.0, 10);
  EXPECT_EQ(capped.values.size(), 10);
  EXPECT_TRUE(capped.capped);
}

TEST(ClusterBetheHessianTest, TwoDisjointCliques) {
  std::vector<Edge> e;
  for (int base : {0, 5}) {
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) e.push_back({base + i, base + j});
    }
  }
  const BetheHessianClustering c = ClusterBetheHessian(GraphFromEdges(e), 1);
  EXPECT_EQ(c.k_hat, 2);
  EXPECT_TRUE(SameGrouping(c.partition,
                           Partition({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2)));
}

TEST(ClusterBetheHessianTest, RecoversPlantedGroups) {
  std::vector<int> truth;
  const Graph g = Planted(600, 3, 16, 2, 5, &truth);
  const BetheHessianClustering c = ClusterBetheHessian(g, 9);
  EXPECT_EQ(c.k_hat, 3);
  EXPECT_GT(Ami(c.partition, Partition::FromLabels(truth)), 0.9);
  EXPECT_NEAR(c.r, std::sqrt(g.degrees().sum() / 600.0), 1e-12);
}

TEST(ClusterBetheHessianTest, RelabelingNodesKeepsCount) {
  const Graph g = Planted(300, 3, 14, 2, 6);
  std::vector<int> perm(300);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> e;
  const SparseMatrix& a = g.adjacency();
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (it.row() < c) e.push_back({perm[it.row()], perm[c]});
    }
  }
  const Graph h = GraphFromEdges(e, 300);
  EXPECT_EQ(ClusterBetheHessian(g, 1).k_hat, ClusterBetheHessian(h, 1).k_hat);
}

TEST(ClusterBetheHessianTest, RejectsEdgelessGraph) {
  EXPECT_THROW(ClusterBetheHessian(GraphFromEdges({}, 4), 1), DataError);
}

}  // namespace
}  // namespace seep
