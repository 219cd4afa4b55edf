#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "seep/errors.h"
#include "seep/graph.h"
#include "seep/synthetic.h"

namespace seep {
namespace {

using Eigen::MatrixXd;

SynthSpec Spec(ModelKind model, int n, std::vector<int> schedule, double c,
               std::optional<double> snr, std::uint64_t seed = 1) {
  SynthSpec s;
  s.model = model;
  s.n = n;
  s.schedule = std::move(schedule);
  s.avg_degree = c;
  s.snr = snr;
  s.seed = seed;
  return s;
}

// Expected degree of every node from Omega and group sizes, self-pairs
// excluded.
Eigen::VectorXd ExpectedDegrees(const MatrixXd& omega, const Partition& p) {
  Eigen::VectorXd sizes(p.num_groups());
  for (int g = 0; g < p.num_groups(); ++g) sizes[g] = p.group_sizes()[g];
  return omega * sizes - omega.diagonal();
}

TEST(PlantedParamsTest, Example) {
  const PlantedParams p = SolvePlantedParams(3, 50, 4);
  EXPECT_NEAR(p.alpha, 50 + 2 * std::sqrt(200.0), 1e-12);
  EXPECT_NEAR(p.beta, 50 - std::sqrt(200.0), 1e-12);
  EXPECT_NEAR(SignalToNoise(3, p.alpha, p.beta), 4.0, 1e-12);
  EXPECT_NEAR((p.alpha + 2 * p.beta) / 3, 50.0, 1e-12);
}

TEST(PlantedParamsTest, Boundaries) {
  const PlantedParams zero = SolvePlantedParams(4, 20, 0);
  EXPECT_DOUBLE_EQ(zero.alpha, 20.0);
  EXPECT_DOUBLE_EQ(zero.beta, 20.0);
  const PlantedParams max = SolvePlantedParams(4, 20, 20);
  EXPECT_NEAR(max.beta, 0.0, 1e-12);
  EXPECT_NEAR(max.alpha, 80.0, 1e-12);
  EXPECT_THROW(SolvePlantedParams(4, 20, 20.5), InfeasibleError);
}

TEST(EvenGroupsTest, RemainderGoesToFirstGroups) {
  EXPECT_EQ(EvenGroups(10, 3).group_sizes(), (std::vector<int>{4, 3, 3}));
  EXPECT_EQ(EvenGroups(9, 3).assignment(),
            (std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 2}));
}

TEST(SampleBlockModelTest, ExtremesAndSymmetry) {
  MatrixXd p(2, 2);
  p << 1.0, 0.0, 0.0, 1.0;
  const Graph g = SampleBlockModel(p, EvenGroups(10, 2), 3);
  EXPECT_EQ(g.num_edges(), 2 * 10);  // two K5
  const MatrixXd a = MatrixXd(g.adjacency());
  EXPECT_TRUE(a.isApprox(a.transpose()));
  EXPECT_DOUBLE_EQ(a.diagonal().cwiseAbs().sum(), 0.0);
  EXPECT_DOUBLE_EQ(a(0, 9), 0.0);
}

TEST(SampleBlockModelTest, EdgeCountsMatchExpectation) {
  MatrixXd p(3, 3);
  p << 0.05, 0.01, 0.002, 0.01, 0.08, 0.02, 0.002, 0.02, 0.03;
  const Partition groups = EvenGroups(900, 3);
  const Graph g = SampleBlockModel(p, groups, 7);
  const MatrixXd counts = Aggregate(g, groups);
  for (int r = 0; r < 3; ++r) {
    for (int s = r; s < 3; ++s) {
      const double pairs = r == s ? 300.0 * 299 / 2 : 300.0 * 300;
      const double mean = pairs * p(r, s);
      const double sd = std::sqrt(pairs * p(r, s) * (1 - p(r, s)));
      const double got = r == s ? counts(r, s) / 2 : counts(r, s);
      EXPECT_NEAR(got, mean, 4.5 * sd) << r << "," << s;
    }
  }
}

TEST(SampleBlockModelTest, Deterministic) {
  MatrixXd p = MatrixXd::Constant(2, 2, 0.1);
  const Graph a = SampleBlockModel(p, EvenGroups(100, 2), 5);
  const Graph b = SampleBlockModel(p, EvenGroups(100, 2), 5);
  EXPECT_TRUE(MatrixXd(a.adjacency()).isApprox(MatrixXd(b.adjacency())));
}

TEST(PlantedPartitionTest, EqualParametersGiveUniformDensity) {
  const PlantedSample s = GeneratePlantedPartition(600, 3, 10, 10, 2);
  const MatrixXd o = EstimateAffinity(s.graph, s.truth).values;
  const double mean = o.mean();
  EXPECT_LT((o.array() - mean).abs().maxCoeff(), 0.25 * mean);
  EXPECT_THROW(GeneratePlantedPartition(10, 2, 20, 0, 1), DataError);
}

TEST(HierarchicalModelTest, SymmetricNestedWithExactDegrees) {
  const HierarchicalModel m =
      BuildHierarchicalModel(Spec(ModelKind::kSymmetric, 2187, {3, 9, 27}, 20, 10));
  EXPECT_EQ(m.omega.rows(), 27);
  EXPECT_TRUE(m.omega.isApprox(m.omega.transpose()));
  ASSERT_EQ(m.partitions.size(), 3u);
  EXPECT_EQ(m.partitions[0].num_groups(), 27);
  EXPECT_EQ(m.partitions[1].num_groups(), 9);
  EXPECT_EQ(m.partitions[2].num_groups(), 3);
  EXPECT_TRUE(IsRefinement(m.partitions[0], m.partitions[1]));
  EXPECT_TRUE(IsRefinement(m.partitions[1], m.partitions[2]));
  EXPECT_TRUE(SameGrouping(m.partitions[0], m.finest));
  // With self-pairs included the degree is exactly c; excluding them costs
  // one diagonal entry.
  const Eigen::VectorXd deg = ExpectedDegrees(m.omega, m.finest);
  for (int g = 0; g < 27; ++g) {
    EXPECT_NEAR(deg[g] + m.omega(g, g), 20.0, 1e-10);
  }
  for (const PlantedParams& p : m.level_params) {
    EXPECT_NEAR(SignalToNoise(3, p.alpha, p.beta), 10.0, 1e-10);
  }
}

TEST(HierarchicalModelTest, MaxSnrHasNoCrossEdges) {
  const HierarchicalModel m =
      BuildHierarchicalModel(Spec(ModelKind::kFlat, 640, {64}, 10, std::nullopt));
  EXPECT_DOUBLE_EQ(m.omega(0, 1), 0.0);
  // Degrees count self-pairs, so groups of 10 with c = 10 are cliques.
  EXPECT_NEAR(m.omega(0, 0), 1.0, 1e-12);
}

TEST(HierarchicalModelTest, DisassortativeKeepsCoarsestTruth) {
  const HierarchicalModel a =
      BuildHierarchicalModel(Spec(ModelKind::kAssortative, 4096, {2, 4, 8}, 30, 8));
  const HierarchicalModel d =
      BuildHierarchicalModel(Spec(ModelKind::kDisassortative, 4096, {2, 4, 8}, 30, 8));
  EXPECT_EQ(a.partitions.back().assignment(), d.partitions.back().assignment());
  EXPECT_TRUE(d.omega.isApprox(a.omega.rowwise().reverse()));
  // Densest block of each row now sits off the diagonal.
  for (int r = 0; r < 8; ++r) {
    Eigen::Index best = 0;
    d.omega.row(r).maxCoeff(&best);
    EXPECT_EQ(best, 7 - r);
  }
}

TEST(HierarchicalModelTest, AsymmetricRefinesOneGroup) {
  const HierarchicalModel m =
      BuildHierarchicalModel(Spec(ModelKind::kAsymmetric, 810, {3, 5, 7}, 30, 6));
  ASSERT_EQ(m.partitions.size(), 3u);
  EXPECT_EQ(m.partitions[0].num_groups(), 7);
  EXPECT_EQ(m.partitions[1].num_groups(), 5);
  EXPECT_EQ(m.partitions[2].num_groups(), 3);
  EXPECT_EQ(m.partitions[2].group_sizes(), (std::vector<int>{270, 270, 270}));
  EXPECT_TRUE(IsRefinement(m.partitions[0], m.partitions[1]));
  EXPECT_TRUE(IsRefinement(m.partitions[1], m.partitions[2]));
  for (const PlantedParams& p : m.level_params) {
    EXPECT_NEAR(SignalToNoise(3, p.alpha, p.beta), 6.0, 1e-10);
  }
}

TEST(HierarchicalModelTest, InfeasibleSnrNamesTheLevel) {
  try {
    BuildHierarchicalModel(Spec(ModelKind::kSymmetric, 2187, {3, 9, 27}, 20, 25));
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos) << e.what();
  }
  // Feasible at the top but the finest blocks of 3 nodes cannot hold the
  // within-group probability.
  try {
    BuildHierarchicalModel(Spec(ModelKind::kSymmetric, 81, {3, 9, 27}, 20, 10));
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(std::string(e.what()).find("level 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("level"), std::string::npos) << e.what();
  }
}

TEST(HierarchicalModelTest, RejectsBadSchedules) {
  EXPECT_THROW(BuildHierarchicalModel(Spec(ModelKind::kSymmetric, 100, {4, 3}, 5, 1)),
               DataError);
  EXPECT_THROW(BuildHierarchicalModel(Spec(ModelKind::kSymmetric, 100, {2, 5}, 5, 1)),
               DataError);
  EXPECT_THROW(BuildHierarchicalModel(Spec(ModelKind::kFlat, 100, {2, 4}, 5, 1)),
               DataError);
  EXPECT_THROW(BuildHierarchicalModel(Spec(ModelKind::kSymmetric, 5, {2, 8}, 5, 1)),
               DataError);
}

TEST(GenerateHierarchicalTest, MeanDegreeMatchesModel) {
  const SynthSpec spec = Spec(ModelKind::kAssortative, 4096, {2, 4, 8}, 30, 8, 4);
  const SynthSample s = GenerateHierarchical(spec);
  const HierarchicalModel m = BuildHierarchicalModel(spec);
  const double expected = ExpectedDegrees(m.omega, m.finest).mean();
  // Total edges are a sum of independent Bernoullis: sd of the mean degree
  // is at most sqrt(2 E[m]) * 2 / n.
  const double sd = 2.0 * std::sqrt(expected * 4096 / 2.0) / 4096;
  EXPECT_NEAR(s.graph.degrees().mean(), expected, 4.0 * sd);
  EXPECT_EQ(s.truth.partitions.size(), 3u);
  EXPECT_TRUE(s.truth.omega.isApprox(m.omega));
}

}  // namespace
}  // namespace seep
