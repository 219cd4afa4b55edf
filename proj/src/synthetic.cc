#include "seep/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "seep/errors.h"
#include "seep/rng.h"

namespace seep {
namespace {

void CheckProbability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DataError(what + " probability " + std::to_string(p) +
                    " outside [0, 1]");
  }
}

// Node of the construction tree. Leaves are the finest groups.
struct Block {
  int size = 0;
  double degree = 0.0;      // expected degree inside this block
  double within = 0.0;      // pair probability inside an unsplit block
  double between = 0.0;     // pair probability across children once split
  int parent = -1;
  int depth = 0;
  int created_at = -1;      // index of the split that created the block
  std::vector<int> children;
};

void SplitBlock(std::vector<Block>& blocks, int id, int parts, double snr_opt,
                bool snr_max, int level, std::vector<PlantedParams>& params,
                std::vector<int>& level_of_split) {
  const Block b = blocks[id];
  if (b.size < parts) {
    throw InfeasibleError("level " + std::to_string(level + 1) +
                          ": cannot split a block of " +
                          std::to_string(b.size) + " nodes into " +
                          std::to_string(parts) + " groups");
  }
  const double snr = snr_max ? b.degree : snr_opt;
  PlantedParams p;
  try {
    p = SolvePlantedParams(parts, b.degree, snr);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError("level " + std::to_string(level + 1) + ": " +
                          e.what());
  }
  const double p_in = p.alpha / b.size;
  const double p_out = p.beta / b.size;
  if (p_in > 1.0) {
    throw InfeasibleError("level " + std::to_string(level + 1) +
                          ": within-group probability " +
                          std::to_string(p_in) + " exceeds 1");
  }
  params.push_back(p);
  level_of_split.push_back(level);
  blocks[id].between = p_out;
  const Partition sizes = EvenGroups(b.size, parts);
  for (int c = 0; c < parts; ++c) {
    Block child;
    child.size = sizes.group_sizes()[c];
    child.degree = p_in * child.size;
    child.within = p_in;
    child.parent = id;
    child.depth = b.depth + 1;
    child.created_at = level;
    blocks[id].children.push_back(static_cast<int>(blocks.size()));
    blocks.push_back(child);
  }
}

void CollectLeaves(const std::vector<Block>& blocks, int id,
                   std::vector<int>& out) {
  if (blocks[id].children.empty()) {
    out.push_back(id);
    return;
  }
  for (int c : blocks[id].children) CollectLeaves(blocks, c, out);
}

int LowestCommonAncestor(const std::vector<Block>& blocks, int a, int b) {
  while (blocks[a].depth > blocks[b].depth) a = blocks[a].parent;
  while (blocks[b].depth > blocks[a].depth) b = blocks[b].parent;
  while (a != b) {
    a = blocks[a].parent;
    b = blocks[b].parent;
  }
  return a;
}

}  // namespace

double SignalToNoise(int k, double alpha, double beta) {
  const double d = alpha - beta;
  return d * d / (k * alpha + k * (k - 1.0) * beta);
}

PlantedParams SolvePlantedParams(int k, double c, double snr) {
  if (k < 2) throw DataError("planted partition needs k >= 2");
  if (!(c > 0.0)) throw DataError("expected degree must be positive");
  if (!(snr >= 0.0)) throw DataError("snr must be non-negative");
  const double root = std::sqrt(snr * c);
  PlantedParams p{c + (k - 1) * root, c - root};
  if (p.beta < 0.0) {
    throw InfeasibleError("snr " + std::to_string(snr) +
                          " infeasible for expected degree " +
                          std::to_string(c) + " (maximum feasible snr is " +
                          std::to_string(c) + ")");
  }
  return p;
}

Partition EvenGroups(int n, int k) {
  if (k < 1 || k > n) {
    throw DataError("cannot split " + std::to_string(n) + " nodes into " +
                    std::to_string(k) + " non-empty groups");
  }
  std::vector<int> a;
  a.reserve(n);
  const int base = n / k, extra = n % k;
  for (int g = 0; g < k; ++g) {
    a.insert(a.end(), base + (g < extra ? 1 : 0), g);
  }
  return Partition(std::move(a), k);
}

Graph SampleBlockModel(const Eigen::MatrixXd& probabilities,
                       const Partition& groups, std::uint64_t seed) {
  const int k = groups.num_groups();
  if (probabilities.rows() != k || probabilities.cols() != k) {
    throw DataError("block model: probability matrix does not match groups");
  }
  for (int r = 0; r < k; ++r) {
    for (int s = 0; s < k; ++s) {
      CheckProbability(probabilities(r, s), "block model");
      if (probabilities(r, s) != probabilities(s, r)) {
        throw DataError("block model: probability matrix is not symmetric");
      }
    }
  }
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < groups.num_items(); ++i) {
    members[groups.group_of(i)].push_back(i);
  }

  std::vector<Eigen::Triplet<double>> t;
  auto add = [&t](int u, int v) {
    t.emplace_back(u, v, 1.0);
    t.emplace_back(v, u, 1.0);
  };
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int r = 0; r < k; ++r) {
    for (int s = r; s < k; ++s) {
      const double p = probabilities(r, s);
      if (p == 0.0) continue;
      const auto& mr = members[r];
      const auto& ms = members[s];
      Rng rng(SubSeed(seed, static_cast<std::uint64_t>(r) * k + s));
      // Geometric skips over the pairs of the block; exact Bernoulli(p)
      // per pair.
      const double log_q = p < 1.0 ? std::log1p(-p) : 0.0;
      auto skip = [&]() -> std::int64_t {
        if (p >= 1.0) return 1;
        const double u = 1.0 - unif(rng);  // (0, 1]
        const double gap = std::floor(std::log(u) / log_q);
        return 1 + static_cast<std::int64_t>(std::min(gap, 0x1p60));
      };
      if (r == s) {
        // Pairs (v, w) with w < v, enumerated row by row.
        const std::int64_t m = static_cast<std::int64_t>(mr.size());
        std::int64_t v = 1, w = -1;
        while (v < m) {
          w += skip();
          while (w >= v && v < m) {
            w -= v;
            ++v;
          }
          if (v < m) add(mr[v], mr[w]);
        }
      } else {
        const std::int64_t cols = static_cast<std::int64_t>(ms.size());
        const std::int64_t total = static_cast<std::int64_t>(mr.size()) * cols;
        for (std::int64_t idx = skip() - 1; idx < total; idx += skip()) {
          add(mr[idx / cols], ms[idx % cols]);
        }
      }
    }
  }
  SparseMatrix a(groups.num_items(), groups.num_items());
  a.setFromTriplets(t.begin(), t.end());
  return Graph(std::move(a));
}

PlantedSample GeneratePlantedPartition(int n, int k, double alpha, double beta,
                                       std::uint64_t seed) {
  const double p_in = alpha / n, p_out = beta / n;
  CheckProbability(p_in, "within-group");
  CheckProbability(p_out, "between-group");
  PlantedSample out{Graph(), EvenGroups(n, k)};
  Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(k, k, p_out);
  probs.diagonal().setConstant(p_in);
  out.graph = SampleBlockModel(probs, out.truth, seed);
  return out;
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "flat") return ModelKind::kFlat;
  if (name == "assortative") return ModelKind::kAssortative;
  if (name == "disassortative") return ModelKind::kDisassortative;
  if (name == "symmetric") return ModelKind::kSymmetric;
  if (name == "asymmetric") return ModelKind::kAsymmetric;
  throw DataError("unknown model '" + name + "'");
}

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kFlat: return "flat";
    case ModelKind::kAssortative: return "assortative";
    case ModelKind::kDisassortative: return "disassortative";
    case ModelKind::kSymmetric: return "symmetric";
    case ModelKind::kAsymmetric: return "asymmetric";
  }
  return "unknown";
}

HierarchicalModel BuildHierarchicalModel(const SynthSpec& spec) {
  if (spec.schedule.empty()) throw DataError("empty group schedule");
  if (spec.model == ModelKind::kFlat && spec.schedule.size() != 1) {
    throw DataError("flat model takes a single group count");
  }
  if (!(spec.avg_degree > 0.0)) throw DataError("average degree must be > 0");
  if (spec.snr.has_value() && !(*spec.snr > 0.0)) {
    throw DataError("snr must be > 0");
  }
  int prev = 1;
  for (int g : spec.schedule) {
    if (g <= prev) {
      throw DataError("group schedule must be strictly increasing and > 1");
    }
    prev = g;
  }
  if (spec.n < spec.schedule.back()) {
    throw DataError("fewer nodes than finest groups");
  }

  std::vector<Block> blocks(1);
  blocks[0].size = spec.n;
  blocks[0].degree = spec.avg_degree;
  blocks[0].within = spec.avg_degree / spec.n;
  HierarchicalModel model;
  const bool snr_max = !spec.snr.has_value();
  const double snr = spec.snr.value_or(0.0);

  prev = 1;
  for (int level = 0; level < static_cast<int>(spec.schedule.size()); ++level) {
    const int target = spec.schedule[level];
    std::vector<int> leaves;
    CollectLeaves(blocks, 0, leaves);
    if (spec.model == ModelKind::kAsymmetric) {
      // Only the first finest group is refined.
      SplitBlock(blocks, leaves.front(), target - prev + 1, snr, snr_max,
                 level, model.level_params, model.level_of_split);
    } else {
      if (target % prev != 0) {
        throw DataError("group schedule entries must divide each other");
      }
      for (int leaf : leaves) {
        SplitBlock(blocks, leaf, target / prev, snr, snr_max, level,
                   model.level_params, model.level_of_split);
      }
    }
    prev = target;
  }

  std::vector<int> leaves;
  CollectLeaves(blocks, 0, leaves);
  const int k = static_cast<int>(leaves.size());
  model.omega.resize(k, k);
  for (int r = 0; r < k; ++r) {
    for (int s = 0; s < k; ++s) {
      model.omega(r, s) =
          r == s ? blocks[leaves[r]].within
                 : blocks[LowestCommonAncestor(blocks, leaves[r], leaves[s])]
                       .between;
    }
  }
  if (spec.model == ModelKind::kDisassortative) {
    const Eigen::MatrixXd reversed = model.omega.rowwise().reverse();
    if (!reversed.isApprox(reversed.transpose(), 1e-14)) {
      throw DataError(
          "disassortative construction needs a mirror-symmetric hierarchy");
    }
    model.omega = 0.5 * (reversed + reversed.transpose());
  }

  std::vector<int> finest;
  finest.reserve(spec.n);
  for (int r = 0; r < k; ++r) {
    finest.insert(finest.end(), blocks[leaves[r]].size, r);
  }
  model.finest = Partition(std::move(finest), k);

  // Truth at split level u: deepest ancestor created at or before u.
  const int levels = static_cast<int>(spec.schedule.size());
  for (int u = levels - 1; u >= 0; --u) {
    std::vector<int> label(k);
    for (int r = 0; r < k; ++r) {
      int b = leaves[r];
      while (blocks[b].created_at > u) b = blocks[b].parent;
      label[r] = b;
    }
    std::vector<int> a(spec.n);
    for (int i = 0; i < spec.n; ++i) a[i] = label[model.finest.group_of(i)];
    model.partitions.push_back(Partition::FromLabels(a));
  }
  return model;
}

SynthSample GenerateHierarchical(const SynthSpec& spec) {
  HierarchicalModel model = BuildHierarchicalModel(spec);
  SynthSample out;
  out.graph =
      SampleBlockModel(model.omega, model.finest, SubSeed(spec.seed, "edges"));
  out.truth.partitions = std::move(model.partitions);
  out.truth.omega = std::move(model.omega);
  return out;
}

}  // namespace seep
