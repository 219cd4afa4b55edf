#include "seep/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seep/errors.h"

namespace seep {
namespace {

void CheckCovers(const Graph& graph, const Partition& partition) {
  if (partition.num_items() != graph.num_nodes()) {
    throw DataError("partition has " + std::to_string(partition.num_items()) +
                    " items but graph has " +
                    std::to_string(graph.num_nodes()) + " nodes");
  }
}

Eigen::MatrixXd DenseSizes(const std::vector<int>& sizes) {
  Eigen::VectorXd s(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) s[i] = sizes[i];
  return s.asDiagonal();
}

}  // namespace

Graph::Graph(SparseMatrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw DataError("adjacency matrix is not square");
  }
  adjacency_.prune(0.0);
  adjacency_.makeCompressed();
  for (int c = 0; c < adjacency_.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(adjacency_, c); it; ++it) {
      if (!(it.value() >= 0.0) || !std::isfinite(it.value())) {
        throw DataError("adjacency has a negative or non-finite weight at (" +
                        std::to_string(it.row()) + ", " +
                        std::to_string(it.col()) + ")");
      }
    }
  }
  const SparseMatrix transpose = adjacency_.transpose();
  if ((adjacency_ - transpose).norm() != 0.0) {
    throw DataError("adjacency matrix is not symmetric");
  }
  degrees_ = adjacency_ * Eigen::VectorXd::Ones(adjacency_.cols());
}

double Graph::max_degree() const {
  return degrees_.size() == 0 ? 0.0 : degrees_.maxCoeff();
}

std::int64_t Graph::num_edges() const {
  std::int64_t m = 0;
  for (int c = 0; c < adjacency_.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(adjacency_, c); it; ++it) {
      if (it.row() <= it.col()) ++m;
    }
  }
  return m;
}

Graph GraphFromEdges(std::span<const Edge> edges, std::optional<int> n) {
  std::int64_t max_id = -1;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0) {
      throw DataError("edge (" + std::to_string(e.u) + ", " +
                      std::to_string(e.v) + ") has a negative node id");
    }
    if (!std::isfinite(e.w) || e.w < 0.0) {
      throw DataError("edge (" + std::to_string(e.u) + ", " +
                      std::to_string(e.v) + ") has invalid weight " +
                      std::to_string(e.w));
    }
    max_id = std::max({max_id, e.u, e.v});
  }
  const std::int64_t nodes = n.has_value() ? *n : max_id + 1;
  if (nodes <= max_id) {
    throw DataError("node id " + std::to_string(max_id) +
                    " out of range for n = " + std::to_string(nodes));
  }
  if (nodes > std::numeric_limits<int>::max()) {
    throw DataError("too many nodes");
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    const int u = static_cast<int>(e.u);
    const int v = static_cast<int>(e.v);
    t.emplace_back(u, v, e.w);
    t.emplace_back(v, u, e.w);
  }
  SparseMatrix a(nodes, nodes);
  a.setFromTriplets(t.begin(), t.end());  // sums duplicates
  return Graph(std::move(a));
}

SparseMatrix Laplacian(const Graph& graph) {
  SparseMatrix d(graph.num_nodes(), graph.num_nodes());
  d.reserve(Eigen::VectorXi::Constant(graph.num_nodes(), 1));
  for (int i = 0; i < graph.num_nodes(); ++i) {
    d.insert(i, i) = graph.degrees()[i];
  }
  SparseMatrix l = d - graph.adjacency();
  l.makeCompressed();
  return l;
}

SparseMatrix UniformRandomWalk(const Graph& graph) {
  const double dmax = graph.max_degree();
  if (!(dmax > 0.0)) {
    throw DataError("uniform random walk: graph has no edges (d_max = 0)");
  }
  SparseMatrix id(graph.num_nodes(), graph.num_nodes());
  id.setIdentity();
  SparseMatrix w = id - Laplacian(graph) / dmax;
  w.makeCompressed();
  return w;
}

Eigen::MatrixXd Laplacian(const Eigen::MatrixXd& weights) {
  if (weights.rows() != weights.cols()) {
    throw DataError("weight matrix is not square");
  }
  Eigen::MatrixXd l = -weights;
  l.diagonal() += weights.rowwise().sum();
  return l;
}

Eigen::MatrixXd UniformRandomWalk(const Eigen::MatrixXd& weights) {
  const Eigen::MatrixXd l = Laplacian(weights);
  const double dmax =
      weights.rows() == 0 ? 0.0 : weights.rowwise().sum().cwiseAbs().maxCoeff();
  if (!(dmax > 0.0)) {
    throw DataError("uniform random walk: weighted graph has d_max = 0");
  }
  Eigen::MatrixXd w = -l / dmax;
  w.diagonal().array() += 1.0;
  return w;
}

Eigen::MatrixXd Aggregate(const Graph& graph, const Partition& partition) {
  CheckCovers(graph, partition);
  const int k = partition.num_groups();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  const SparseMatrix& a = graph.adjacency();
  for (int c = 0; c < a.outerSize(); ++c) {
    const int gc = partition.group_of(c);
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      out(partition.group_of(static_cast<int>(it.row())), gc) += it.value();
    }
  }
  return out;
}

QuotientGraph Quotient(const Graph& graph, const Partition& partition) {
  QuotientGraph q;
  q.group_sizes = partition.group_sizes();
  Eigen::VectorXd inv_sizes(partition.num_groups());
  for (int g = 0; g < partition.num_groups(); ++g) {
    inv_sizes[g] = 1.0 / q.group_sizes[g];
  }
  q.a_pi = inv_sizes.asDiagonal() * Aggregate(graph, partition);
  q.l_pi = -q.a_pi;
  q.l_pi.diagonal() += q.a_pi.rowwise().sum();
  return q;
}

double DefaultEepTolerance(const Graph& graph) {
  return 1e-9 * std::max(graph.max_degree(), 1.0);
}

bool IsExactEep(const Graph& graph, const Partition& partition, double tol) {
  CheckCovers(graph, partition);
  const QuotientGraph q = Quotient(graph, partition);
  const SparseMatrix h = partition.Indicator();
  const Eigen::MatrixXd lh = Laplacian(graph) * Eigen::MatrixXd(h);
  const Eigen::MatrixXd hl = h * q.l_pi;
  if (lh.size() == 0) return true;
  return (lh - hl).cwiseAbs().maxCoeff() <= tol;
}

bool IsExactEep(const Graph& graph, const Partition& partition) {
  return IsExactEep(graph, partition, DefaultEepTolerance(graph));
}

AffinityMatrix EstimateAffinity(const Graph& graph,
                                const Partition& partition) {
  CheckCovers(graph, partition);
  AffinityMatrix omega;
  omega.group_sizes = partition.group_sizes();
  Eigen::VectorXd inv_sizes(partition.num_groups());
  for (int g = 0; g < partition.num_groups(); ++g) {
    inv_sizes[g] = 1.0 / omega.group_sizes[g];
  }
  omega.values = inv_sizes.asDiagonal() * Aggregate(graph, partition) *
                 inv_sizes.asDiagonal();
  return omega;
}

AffinityMatrix UpdateAffinity(const AffinityMatrix& fine,
                              const Partition& coarse) {
  if (coarse.num_items() != fine.num_groups()) {
    throw DataError("update affinity: partition size mismatch");
  }
  AffinityMatrix out;
  out.group_sizes.assign(coarse.num_groups(), 0);
  for (int i = 0; i < coarse.num_items(); ++i) {
    out.group_sizes[coarse.group_of(i)] += fine.group_sizes[i];
  }
  // H2^+ is normalized by the number of original nodes in each coarse group,
  // so N1 Omega1 N1 = H1'AH1 is summed into blocks and divided by node counts.
  Eigen::VectorXd inv_sizes(coarse.num_groups());
  for (int r = 0; r < coarse.num_groups(); ++r) {
    inv_sizes[r] = 1.0 / out.group_sizes[r];
  }
  const Eigen::MatrixXd n1 = DenseSizes(fine.group_sizes);
  const Eigen::MatrixXd h = Eigen::MatrixXd(coarse.Indicator());
  out.values = inv_sizes.asDiagonal() * h.transpose() * n1 * fine.values * n1 *
               h * inv_sizes.asDiagonal();
  return out;
}

}  // namespace seep
