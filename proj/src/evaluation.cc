#include "seep/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "seep/errors.h"
#include "seep/rng.h"

namespace seep {
namespace {

void CheckSameItems(const Partition& a, const Partition& b) {
  if (a.num_items() != b.num_items()) {
    throw DataError("partitions cover " + std::to_string(a.num_items()) +
                    " and " + std::to_string(b.num_items()) + " items");
  }
}

double MutualInformationOf(const Partition& a, const std::vector<int>& b_labels,
                           int kb) {
  const double n = a.num_items();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.num_groups(), kb);
  for (int i = 0; i < a.num_items(); ++i) c(a.group_of(i), b_labels[i]) += 1;
  const Eigen::VectorXd ra = c.rowwise().sum();
  const Eigen::RowVectorXd cb = c.colwise().sum();
  double mi = 0.0;
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    for (Eigen::Index s = 0; s < c.cols(); ++s) {
      const double nij = c(r, s);
      if (nij > 0) mi += nij / n * std::log(n * nij / (ra[r] * cb[s]));
    }
  }
  return std::max(mi, 0.0);
}

}  // namespace

double Entropy(const Partition& p) {
  const double n = p.num_items();
  double h = 0.0;
  for (int size : p.group_sizes()) {
    const double q = size / n;
    h -= q * std::log(q);
  }
  return h;
}

double MutualInformation(const Partition& a, const Partition& b) {
  CheckSameItems(a, b);
  return MutualInformationOf(a, b.assignment(), b.num_groups());
}

double ExpectedMutualInformation(const Partition& a, const Partition& b) {
  CheckSameItems(a, b);
  const int n = a.num_items();
  const double nd = n;
  const double lg_n = std::lgamma(nd + 1);
  double emi = 0.0;
  for (int ai : a.group_sizes()) {
    for (int bj : b.group_sizes()) {
      const int lo = std::max(1, ai + bj - n);
      const int hi = std::min(ai, bj);
      // log of the nij-independent factor a! b! (n-a)! (n-b)! / n!
      const double base = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                          std::lgamma(nd - ai + 1) + std::lgamma(nd - bj + 1) -
                          lg_n;
      for (int nij = lo; nij <= hi; ++nij) {
        const double log_p = base - std::lgamma(nij + 1.0) -
                             std::lgamma(ai - nij + 1.0) -
                             std::lgamma(bj - nij + 1.0) -
                             std::lgamma(nd - ai - bj + nij + 1);
        emi += nij / nd *
               std::log(nd * nij / (static_cast<double>(ai) * bj)) *
               std::exp(log_p);
      }
    }
  }
  return emi;
}

MonteCarloEstimate ExpectedMutualInformationMonteCarlo(const Partition& a,
                                                       const Partition& b,
                                                       int samples,
                                                       std::uint64_t seed) {
  CheckSameItems(a, b);
  if (samples < 2) throw DataError("monte carlo EMI needs >= 2 samples");
  Rng rng(seed);
  std::vector<int> labels = b.assignment();
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::shuffle(labels.begin(), labels.end(), rng);
    const double mi = MutualInformationOf(a, labels, b.num_groups());
    sum += mi;
    sum_sq += mi * mi;
  }
  MonteCarloEstimate est;
  est.mean = sum / samples;
  const double var =
      std::max(0.0, (sum_sq - samples * est.mean * est.mean) / (samples - 1));
  est.standard_error = std::sqrt(var / samples);
  return est;
}

AmiScore AdjustedMutualInformation(const Partition& a, const Partition& b) {
  CheckSameItems(a, b);
  AmiScore score;
  if (a.num_groups() <= 1 && b.num_groups() <= 1) {
    score.value = 1.0;
    score.both_trivial = true;
    return score;
  }
  const double mi = MutualInformation(a, b);
  const double emi = ExpectedMutualInformation(a, b);
  const double mean_h = 0.5 * (Entropy(a) + Entropy(b));
  double denom = mean_h - emi;
  const double eps = std::numeric_limits<double>::epsilon();
  if (std::abs(denom) < eps) denom = denom < 0 ? -eps : eps;
  score.value = (mi - emi) / denom;
  return score;
}

double Ami(const Partition& a, const Partition& b) {
  return AdjustedMutualInformation(a, b).value;
}

ScoreReport ScoreHierarchy(std::span<const Partition> truth,
                           std::span<const Partition> inferred) {
  if (truth.empty() || inferred.empty()) {
    throw DataError("score: both partition lists must be non-empty");
  }
  const int n = truth.front().num_items();
  for (const auto* list : {&truth, &inferred}) {
    for (const Partition& p : *list) {
      if (p.num_items() != n) {
        throw DataError("score: partitions cover different numbers of items (" +
                        std::to_string(n) + " vs " +
                        std::to_string(p.num_items()) + ")");
      }
    }
  }
  ScoreReport report;
  report.n_levels_true = static_cast<int>(truth.size());
  report.n_levels_inferred = static_cast<int>(inferred.size());
  report.xi.resize(report.n_levels_true, report.n_levels_inferred);
  for (int i = 0; i < report.n_levels_true; ++i) {
    for (int j = 0; j < report.n_levels_inferred; ++j) {
      report.xi(i, j) = Ami(truth[i], inferred[j]);
    }
  }
  report.precision = report.xi.colwise().maxCoeff().mean();
  report.recall = report.xi.rowwise().maxCoeff().mean();
  return report;
}

}  // namespace seep
