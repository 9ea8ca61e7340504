#include "ccpir/combinatorics.hpp"

#include <stdexcept>

namespace ccpir {

BigInt binom(uint64_t n, int64_t k) {
  if (k < 0 || uint64_t(k) > n) return 0;
  uint64_t kk = uint64_t(k);
  if (kk > n - kk) kk = n - kk;
  BigInt result = 1;
  for (uint64_t i = 0; i < kk; ++i) {
    result *= BigInt(n - i);
    result /= BigInt(i + 1);  // exact: product of j consecutive integers is divisible by j!
  }
  return result;
}

uint64_t binom_u64(uint64_t n, int64_t k) {
  return binom(n, k).convert_to<uint64_t>();
}

std::vector<std::vector<int>> subsets(int k, int t) {
  if (t < 0) throw std::invalid_argument("subset size out of range");
  if (t > k) return {};  // C(k, t) = 0 of them
  if (t == 0) return {{}};
  std::vector<std::vector<int>> out;
  std::vector<int> cur(t);
  // Standard lexicographic combination walk.
  for (int i = 0; i < t; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = t - 1;
    while (i >= 0 && cur[i] == k - (t - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < t; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

SubsetTable::SubsetTable(int k, int t) : k_(k), t_(t), subsets_(subsets(k, t)) {
  if (k > 30) throw std::invalid_argument("SubsetTable ground set too large");
  masks_.reserve(subsets_.size());
  rank_by_mask_.assign(size_t(1) << k, SIZE_MAX);
  for (size_t r = 0; r < subsets_.size(); ++r) {
    uint32_t m = 0;
    for (int u : subsets_[r]) m |= 1u << (u - 1);
    masks_.push_back(m);
    rank_by_mask_[m] = r;
  }
}

size_t SubsetTable::rank_of_mask(uint32_t mask) const {
  size_t r = rank_by_mask_[mask];
  if (r == SIZE_MAX) throw std::invalid_argument("mask is not a subset of the tabulated size");
  return r;
}

}  // namespace ccpir
