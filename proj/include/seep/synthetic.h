#ifndef SEEP_SYNTHETIC_H_
#define SEEP_SYNTHETIC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seep/graph.h"
#include "seep/partition.h"

namespace seep {

// SNR(alpha, beta) = (alpha - beta)^2 / (k alpha + k (k - 1) beta).
double SignalToNoise(int k, double alpha, double beta);

struct PlantedParams {
  double alpha = 0.0;
  double beta = 0.0;
};

// Solves SNR(alpha, beta) = snr under the degree constraint
// (alpha + (k - 1) beta) / k = c:
//   alpha = c + (k - 1) sqrt(snr c),  beta = c - sqrt(snr c).
// Throws InfeasibleError when beta < 0, i.e. snr > c.
PlantedParams SolvePlantedParams(int k, double c, double snr);

// Independent Bernoulli edges per unordered pair (no self-loops). Group g of
// `groups` and h connect with probability probabilities(g, h). Block pair
// (g, h) draws from its own substream of `seed`; expected cost is linear in
// the number of sampled edges.
Graph SampleBlockModel(const Eigen::MatrixXd& probabilities,
                       const Partition& groups, std::uint64_t seed);

// Contiguous groups of near-equal size; the n % k leftover nodes go one each
// to the first groups.
Partition EvenGroups(int n, int k);

struct PlantedSample {
  Graph graph;
  Partition truth;
};

// Planted partition model with within-group probability alpha / n and
// between-group probability beta / n. Throws DataError if either probability
// leaves [0, 1].
PlantedSample GeneratePlantedPartition(int n, int k, double alpha, double beta,
                                       std::uint64_t seed);

enum class ModelKind { kFlat, kAssortative, kDisassortative, kSymmetric,
                       kAsymmetric };

ModelKind ParseModelKind(const std::string& name);
std::string ModelKindName(ModelKind kind);

struct SynthSpec {
  ModelKind model = ModelKind::kSymmetric;
  int n = 0;
  // Unset means the feasibility boundary snr = c (beta = 0 at every split).
  std::optional<double> snr;
  double avg_degree = 0.0;
  // Group counts from coarse to fine, e.g. {3, 9, 27}; one entry for flat.
  std::vector<int> schedule;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::vector<Partition> partitions;  // fine to coarse, on original nodes
  Eigen::MatrixXd omega;              // finest-level edge probabilities
};

// Deterministic part of the construction: the finest Omega, node groups and
// nested truth, no sampling. Throws InfeasibleError naming the level at which
// the SNR cannot be met.
struct HierarchicalModel {
  Eigen::MatrixXd omega;
  Partition finest;                   // on original nodes
  std::vector<Partition> partitions;  // fine to coarse, on original nodes
  std::vector<PlantedParams> level_params;  // one per split, in build order
  std::vector<int> level_of_split;
};

HierarchicalModel BuildHierarchicalModel(const SynthSpec& spec);

struct SynthSample {
  Graph graph;
  GroundTruth truth;
};

SynthSample GenerateHierarchical(const SynthSpec& spec);

}  // namespace seep

#endif  // SEEP_SYNTHETIC_H_
