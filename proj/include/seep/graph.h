#ifndef SEEP_GRAPH_H_
#define SEEP_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "seep/partition.h"

namespace seep {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct Edge {
  std::int64_t u = 0;
  std::int64_t v = 0;
  double w = 1.0;
};

// Undirected weighted graph stored as a symmetric compressed sparse matrix.
//
// Self-loop convention: an undirected edge (u, v, w) adds w to A(u,v) and w
// to A(v,u). For u == v both land on the diagonal, so a self-loop of weight w
// stores A(u,u) = 2w and adds 2w to the degree of u. With D = diag(A 1) this
// keeps every Laplacian row sum at zero and makes 1'A1 twice the total edge
// weight, loops included.
class Graph {
 public:
  Graph() = default;

  // Takes ownership of an already symmetric adjacency matrix. Throws
  // DataError if it is not square, not symmetric or has negative entries.
  explicit Graph(SparseMatrix adjacency);

  int num_nodes() const { return static_cast<int>(adjacency_.rows()); }
  const SparseMatrix& adjacency() const { return adjacency_; }
  const Eigen::VectorXd& degrees() const { return degrees_; }
  double max_degree() const;
  // 1'A1.
  double total_weight() const { return degrees_.sum(); }
  // Number of stored undirected pairs u <= v with nonzero weight.
  std::int64_t num_edges() const;

 private:
  SparseMatrix adjacency_;
  Eigen::VectorXd degrees_;
};

// Builds a Graph from an edge list. Duplicate undirected edges have their
// weights summed; `n` defaults to max id + 1.
Graph GraphFromEdges(std::span<const Edge> edges,
                     std::optional<int> n = std::nullopt);

// L = D - A.
SparseMatrix Laplacian(const Graph& graph);

// W = I - L / d_max. Throws DataError when the graph has no edges.
SparseMatrix UniformRandomWalk(const Graph& graph);

// Dense counterparts for small weighted graphs such as affinity matrices.
// Diagonal weights cancel in the Laplacian. For signed weights d_max is the
// largest absolute degree.
Eigen::MatrixXd Laplacian(const Eigen::MatrixXd& weights);
Eigen::MatrixXd UniformRandomWalk(const Eigen::MatrixXd& weights);

// Group-level summary of an affinity estimate.
struct AffinityMatrix {
  Eigen::MatrixXd values;
  std::vector<int> group_sizes;

  int num_groups() const { return static_cast<int>(values.rows()); }
};

struct QuotientGraph {
  Eigen::MatrixXd a_pi;  // N^-1 H'AH
  Eigen::MatrixXd l_pi;  // diag(a_pi 1) - a_pi
  std::vector<int> group_sizes;
};

// H'AH: total link weight between (and within) groups.
Eigen::MatrixXd Aggregate(const Graph& graph, const Partition& partition);

QuotientGraph Quotient(const Graph& graph, const Partition& partition);

// Default tolerance for IsExactEep: 1e-9 times the maximum degree.
double DefaultEepTolerance(const Graph& graph);

// True iff max |L H - H L^pi| <= tol.
bool IsExactEep(const Graph& graph, const Partition& partition, double tol);
bool IsExactEep(const Graph& graph, const Partition& partition);

// H^+ A (H^+)' with H^+ = N^-1 H'. Entry (r, s) is the density of links
// between groups r and s, normalized by n_r n_s (self-pairs included).
AffinityMatrix EstimateAffinity(const Graph& graph,
                                const Partition& partition);

// Next-level estimate from the current one without touching A:
// H2^+ N1 Omega1 N1 (H2^+)', where `coarse` partitions the groups of `fine`.
AffinityMatrix UpdateAffinity(const AffinityMatrix& fine,
                              const Partition& coarse);

}  // namespace seep

#endif  // SEEP_GRAPH_H_
