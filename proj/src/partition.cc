#include "seep/partition.h"

#include <string>
#include <unordered_map>

#include "seep/errors.h"

namespace seep {

Partition::Partition(std::vector<int> assignment, int k)
    : assignment_(std::move(assignment)), sizes_(k > 0 ? k : 0, 0), k_(k) {
  if (k < 0 || (k == 0 && !assignment_.empty())) {
    throw DataError("partition: invalid group count " + std::to_string(k));
  }
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    const int g = assignment_[i];
    if (g < 0 || g >= k) {
      throw DataError("partition: item " + std::to_string(i) +
                      " has group " + std::to_string(g) + " outside [0, " +
                      std::to_string(k) + ")");
    }
    ++sizes_[g];
  }
  for (int g = 0; g < k; ++g) {
    if (sizes_[g] == 0) {
      throw DataError("partition: group " + std::to_string(g) + " is empty");
    }
  }
}

Partition Partition::FromLabels(std::span<const int> labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> assignment;
  assignment.reserve(labels.size());
  for (int label : labels) {
    if (label < 0) throw DataError("partition: negative label");
    auto [it, inserted] =
        remap.try_emplace(label, static_cast<int>(remap.size()));
    assignment.push_back(it->second);
  }
  const int k = static_cast<int>(remap.size());
  return Partition(std::move(assignment), k);
}

Partition Partition::Single(int n) {
  return Partition(std::vector<int>(n, 0), n > 0 ? 1 : 0);
}

Partition Partition::Identity(int n) {
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  return Partition(std::move(a), n);
}

Partition Partition::Canonical() const { return FromLabels(assignment_); }

Eigen::SparseMatrix<double> Partition::Indicator() const {
  Eigen::SparseMatrix<double> h(num_items(), k_);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(assignment_.size());
  for (int i = 0; i < num_items(); ++i) t.emplace_back(i, assignment_[i], 1.0);
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

Eigen::SparseMatrix<double> Partition::PseudoInverse() const {
  Eigen::SparseMatrix<double> hp(k_, num_items());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(assignment_.size());
  for (int i = 0; i < num_items(); ++i) {
    const int g = assignment_[i];
    t.emplace_back(g, i, 1.0 / sizes_[g]);
  }
  hp.setFromTriplets(t.begin(), t.end());
  return hp;
}

bool SameGrouping(const Partition& a, const Partition& b) {
  return a.num_items() == b.num_items() && a.Canonical() == b.Canonical();
}

Partition Compose(const Partition& fine, const Partition& coarse) {
  if (coarse.num_items() != fine.num_groups()) {
    throw DataError("compose: coarse partition covers " +
                    std::to_string(coarse.num_items()) + " items but fine has " +
                    std::to_string(fine.num_groups()) + " groups");
  }
  std::vector<int> a(fine.num_items());
  for (int i = 0; i < fine.num_items(); ++i) {
    a[i] = coarse.group_of(fine.group_of(i));
  }
  return Partition(std::move(a), coarse.num_groups());
}

bool IsRefinement(const Partition& fine, const Partition& coarse) {
  if (fine.num_items() != coarse.num_items()) return false;
  std::vector<int> owner(fine.num_groups(), -1);
  for (int i = 0; i < fine.num_items(); ++i) {
    int& o = owner[fine.group_of(i)];
    if (o == -1) {
      o = coarse.group_of(i);
    } else if (o != coarse.group_of(i)) {
      return false;
    }
  }
  return true;
}

}  // namespace seep
