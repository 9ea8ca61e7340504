#pragma once

#include <cstdint>
#include <vector>

#include "ccpir/rational.hpp"

namespace ccpir {

/// C(n, k); 0 when k < 0 or k > n. Exact at any size.
BigInt binom(uint64_t n, int64_t k);
/// Same, for callers that know the result fits.
uint64_t binom_u64(uint64_t n, int64_t k);

/// All size-t subsets of {1,...,k}, lexicographic on the sorted tuples.
/// This order is the canonical subfile order everywhere in the project.
std::vector<std::vector<int>> subsets(int k, int t);

/// Rank/unrank view of the t-subsets of {1,...,k}, lexicographic.
class SubsetTable {
 public:
  SubsetTable(int k, int t);

  int ground_size() const { return k_; }
  int subset_size() const { return t_; }
  size_t size() const { return subsets_.size(); }

  const std::vector<int>& subset(size_t rank) const { return subsets_[rank]; }
  /// Bitmask with bit (i-1) set for each member i.
  uint32_t mask(size_t rank) const { return masks_[rank]; }
  size_t rank_of_mask(uint32_t mask) const;
  bool contains(size_t rank, int user) const { return masks_[rank] >> (user - 1) & 1; }

 private:
  int k_, t_;
  std::vector<std::vector<int>> subsets_;
  std::vector<uint32_t> masks_;
  std::vector<size_t> rank_by_mask_;  // dense, 2^k entries
};

}  // namespace ccpir
