#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "seep/errors.h"
#include "seep/graph.h"
#include "seep/hierarchy.h"
#include "seep/partition_search.h"
#include "seep/rng.h"
#include "seep/synthetic.h"

namespace seep {
namespace {

using Eigen::MatrixXd;

// Random n x r orthonormal matrix whose first column is constant.
MatrixXd RandomBasis(int n, int r, Rng& rng) {
  std::normal_distribution<double> z;
  MatrixXd m(n, r);
  m.col(0).setOnes();
  for (int j = 1; j < r; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = z(rng);
  }
  Eigen::HouseholderQR<MatrixXd> qr(m);
  return qr.householderQ() * MatrixXd::Identity(n, r);
}

// --- expected error ---------------------------------------------------------

TEST(ExpectedErrorTest, Examples) {
  EXPECT_NEAR(ExpectedError(27, 3), 48.0 / 26.0, 1e-14);
  EXPECT_DOUBLE_EQ(ExpectedError(10, 1), 0.0);
  EXPECT_DOUBLE_EQ(ExpectedError(10, 10), 0.0);
  EXPECT_THROW(ExpectedError(5, 0), DataError);
  EXPECT_THROW(ExpectedError(5, 6), DataError);
  EXPECT_THROW(ExpectedError(1, 1), DataError);
}

TEST(ExpectedErrorTest, ConditionalExamples) {
  const std::vector<int> four = {4};
  EXPECT_NEAR(ExpectedErrorConditional(10, 2, four), 2.0 * 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(ExpectedErrorConditional(10, 4, four), 0.0, 1e-14);
  EXPECT_NEAR(ExpectedErrorConditional(10, 7, four), 3.0 * 3.0 / 6.0, 1e-14);
  const std::vector<int> three = {3};
  EXPECT_NEAR(ExpectedErrorConditional(27, 9, three), 4.5, 1e-14);
  EXPECT_NEAR(ExpectedErrorConditional(27, 2, three), 0.5, 1e-14);
  const std::vector<int> k39 = {3, 9};
  EXPECT_NEAR(ExpectedErrorConditional(27, 6, k39), 1.5, 1e-14);
  EXPECT_NEAR(ExpectedErrorConditional(27, 9, k39), 0.0, 1e-14);
  EXPECT_NEAR(ExpectedErrorConditional(27, 3, three), 0.0, 1e-14);
  EXPECT_NEAR(ExpectedErrorConditional(27, 5, {}), ExpectedError(27, 5), 1e-14);
  const std::vector<int> unsorted = {9, 3};
  EXPECT_THROW(ExpectedErrorConditional(27, 5, unsorted), DataError);
  const std::vector<int> out = {30};
  EXPECT_THROW(ExpectedErrorConditional(27, 5, out), DataError);
}

TEST(ExpectedErrorTest, MonteCarloAgreement) {
  // Fixed partition, random basis: the mean error matches (n-r)(r-1)/(n-1).
  const int n = 12, r = 4, draws = 4000;
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) a[i] = i % r;
  const Partition p(a, r);
  Rng rng(3);
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double e = ProjectionError(p, RandomBasis(n, r, rng));
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
  EXPECT_NEAR(mean, ExpectedError(n, r), 4.0 * se);
}

TEST(NullErrorCurveTest, Endpoints) {
  const NullErrorCurve c = MakeNullErrorCurve(9);
  ASSERT_EQ(c.values.size(), 9u);
  EXPECT_DOUBLE_EQ(c.values.front(), 0.0);
  EXPECT_DOUBLE_EQ(c.values.back(), 0.0);
  EXPECT_NEAR(c.values[2], ExpectedError(9, 3), 1e-15);
}

// --- perturbation ------------------------------------------------------------

TEST(PerturbAffinityTest, RelativeNormAndSymmetry) {
  AffinityMatrix o;
  o.values = MatrixXd::Random(6, 6).cwiseAbs();
  o.values = (o.values + o.values.transpose()).eval();
  o.group_sizes.assign(6, 10);
  const AffinityMatrix p = PerturbAffinity(o, 0.05, 7);
  const MatrixXd diff = p.values - o.values;
  EXPECT_TRUE(diff.isApprox(diff.transpose()));
  Eigen::JacobiSVD<MatrixXd> sd(diff), so(o.values);
  EXPECT_NEAR(sd.singularValues()[0] / so.singularValues()[0], 0.05, 1e-12);
  EXPECT_EQ(p.group_sizes, o.group_sizes);
  EXPECT_TRUE(PerturbAffinity(o, 0.0, 7).values.isApprox(o.values));
  EXPECT_TRUE(PerturbAffinity(o, 0.05, 7).values.isApprox(p.values));
}

// --- candidate partitions ----------------------------------------------------

TEST(IdentifyPartitionsTest, ExactBlockStructureWithoutNoise) {
  // 6 groups forming 2 clear blocks.
  AffinityMatrix o;
  o.values = MatrixXd::Constant(6, 6, 0.02);
  o.values.topLeftCorner(3, 3).setConstant(0.5);
  o.values.bottomRightCorner(3, 3).setConstant(0.5);
  o.group_sizes.assign(6, 20);
  const LevelCandidates c = IdentifyPartitionsAndErrors(o, 1, 0.0, 1);
  ASSERT_EQ(c.mean_errors.size(), 6u);
  EXPECT_NEAR(c.mean_errors[0], 0.0, 1e-12);
  EXPECT_NEAR(c.mean_errors[1], 0.0, 1e-10);
  EXPECT_NEAR(c.mean_errors[5], 0.0, 1e-12);
  EXPECT_TRUE(SameGrouping(c.partitions[1], Partition({0, 0, 0, 1, 1, 1}, 2)));
  for (int r = 1; r <= 6; ++r) EXPECT_EQ(c.partitions[r - 1].num_groups(), r);
}

// --- MSLE fit ------------------------------------------------------------------

TEST(FitMsleTest, RecoversExactScale) {
  const NullErrorCurve c = MakeNullErrorCurve(20);
  std::vector<double> e(c.values);
  for (double& v : e) v *= 0.4;
  const MsleFit f = FitMsle(e, c);
  EXPECT_NEAR(f.sigma, 0.4, 1e-6);
  EXPECT_NEAR(f.msle, 0.0, 1e-12);
}

TEST(FitMsleTest, LargerErrorsGiveLargerScale) {
  const NullErrorCurve c = MakeNullErrorCurve(15);
  std::vector<double> e(c.values), e2(c.values);
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] *= 0.3 + 0.01 * static_cast<double>(i % 3);
    e2[i] = 2.0 * e[i];
  }
  EXPECT_GT(FitMsle(e2, c).sigma, FitMsle(e, c).sigma);
}

TEST(FitMsleTest, FlagsZeroNullCurve) {
  const std::vector<int> all = {2, 3};
  const NullErrorCurve c = MakeNullErrorCurve(4, all);
  const std::vector<double> e = {0.0, 0.1, 0.2, 0.0};
  EXPECT_TRUE(FitMsle(e, c).unidentifiable);
  EXPECT_FALSE(FitMsle(e, MakeNullErrorCurve(4)).unidentifiable);
}

// --- relevant minima -----------------------------------------------------------

std::vector<double> Scaled(int n, std::vector<int> kappas, double s) {
  std::vector<double> out(n);
  for (int r = 1; r <= n; ++r) out[r - 1] = s * ExpectedErrorConditional(n, r, kappas);
  return out;
}

TEST(FindRelevantMinimaTest, ProportionalCurveHasNone) {
  EXPECT_TRUE(FindRelevantMinima(Scaled(16, {}, 0.3)).empty());
}

TEST(FindRelevantMinimaTest, SingleLevel) {
  EXPECT_EQ(FindRelevantMinima(Scaled(16, {4}, 0.3)), std::vector<int>{4});
}

TEST(FindRelevantMinimaTest, TwoLevels) {
  EXPECT_EQ(FindRelevantMinima(Scaled(27, {3, 9}, 0.2)), (std::vector<int>{3, 9}));
}

TEST(FindRelevantMinimaTest, TooFewGroups) {
  EXPECT_TRUE(FindRelevantMinima(std::vector<double>{0.0, 0.0}).empty());
}

// --- full pipeline -------------------------------------------------------------

SynthSpec SmallSpec(std::uint64_t seed) {
  SynthSpec spec;
  spec.model = ModelKind::kAssortative;
  spec.n = 1000;
  spec.schedule = {2, 4, 8};
  spec.avg_degree = 40;
  spec.snr = 12;
  spec.seed = seed;
  return spec;
}

TEST(InferHierarchyTest, DeterministicAndNested) {
  const SynthSample pg = GenerateHierarchical(SmallSpec(3));
  DetectionConfig cfg;
  cfg.samples = 20;
  const HierarchyResult a = InferHierarchy(pg.graph, cfg, 5);
  const HierarchyResult b = InferHierarchy(pg.graph, cfg, 5);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    EXPECT_EQ(a.levels[i].composed.assignment(), b.levels[i].composed.assignment());
    EXPECT_EQ(a.levels[i].diagnostics.mean_errors, b.levels[i].diagnostics.mean_errors);
  }
  EXPECT_EQ(a.n, 1000);
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    const HierarchyLevel& l = a.levels[i];
    EXPECT_EQ(l.composed.num_groups(), l.k);
    if (i > 0) {
      EXPECT_LT(l.k, a.levels[i - 1].k);
      EXPECT_TRUE(IsRefinement(a.levels[i - 1].composed, l.composed));
      EXPECT_EQ(l.composed.assignment(),
                Compose(a.levels[i - 1].composed, l.relative).assignment());
    }
  }
}

TEST(InferHierarchyTest, CliqueNetworkIsOneLevel) {
  SynthSpec spec;
  spec.model = ModelKind::kFlat;
  spec.n = 128;
  spec.schedule = {16};
  spec.avg_degree = 8;
  const SynthSample pg = GenerateHierarchical(spec);
  DetectionConfig cfg;
  cfg.samples = 20;
  const HierarchyResult r = InferHierarchy(pg.graph, cfg, 1);
  ASSERT_EQ(r.levels.size(), 1u);
  EXPECT_EQ(r.levels[0].k, 16);
  EXPECT_TRUE(SameGrouping(r.levels[0].composed, pg.truth.partitions[0]));
}

TEST(InferHierarchyTest, RejectsEdgelessGraph) {
  EXPECT_THROW(InferHierarchy(GraphFromEdges({}, 5), DetectionConfig{}, 1), DataError);
}

}  // namespace
}  // namespace seep
