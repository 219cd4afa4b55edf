#ifndef SEEP_PARTITION_H_
#define SEEP_PARTITION_H_

#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace seep {

// Surjective map from n items onto k non-empty groups.
class Partition {
 public:
  Partition() = default;

  // Strict construction: every value must lie in [0, k) and every group must
  // be hit at least once. Throws DataError otherwise.
  Partition(std::vector<int> assignment, int k);

  // Accepts arbitrary non-negative labels and relabels groups in order of
  // first appearance.
  static Partition FromLabels(std::span<const int> labels);

  static Partition Single(int n);
  static Partition Identity(int n);

  int num_items() const { return static_cast<int>(assignment_.size()); }
  int num_groups() const { return k_; }
  int group_of(int item) const { return assignment_[item]; }
  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<int>& group_sizes() const { return sizes_; }

  // Same grouping with labels renumbered by first appearance.
  Partition Canonical() const;

  // n x k indicator matrix H.
  Eigen::SparseMatrix<double> Indicator() const;
  // k x n pseudoinverse H^+ = N^-1 H'.
  Eigen::SparseMatrix<double> PseudoInverse() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.k_ == b.k_ && a.assignment_ == b.assignment_;
  }

 private:
  std::vector<int> assignment_;
  std::vector<int> sizes_;
  int k_ = 0;
};

// True iff both partitions group items identically up to relabeling.
bool SameGrouping(const Partition& a, const Partition& b);

// `coarse` partitions the groups of `fine`; the result maps each original
// item i to coarse.group_of(fine.group_of(i)).
Partition Compose(const Partition& fine, const Partition& coarse);

// True iff every group of `fine` lies inside a single group of `coarse`.
bool IsRefinement(const Partition& fine, const Partition& coarse);

}  // namespace seep

#endif  // SEEP_PARTITION_H_
