#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccpir/rational.hpp"

namespace ccpir {

/// Exact joint distribution over named finite variables, stored as integer
/// counts out of a common total. Probabilities are counts/total, so the mass
/// sums to 1 exactly by construction and every zero test is a test on
/// integers, never on floats. Rows are packed into a single mixed-radix key;
/// the product of all radices must fit 63 bits.
class DistributionTable {
 public:
  struct Column {
    std::string name;
    uint64_t radix;
  };

  DistributionTable() = default;
  explicit DistributionTable(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return cols_; }
  int column_index(const std::string& name) const;

  void add(const std::vector<uint64_t>& values, uint64_t count = 1);
  void add_packed(uint64_t key, uint64_t count) { counts_[key] += count; total_ += count; }
  /// Additive merge; partitions of a world space combine in any order.
  void merge(const DistributionTable& other);

  uint64_t total() const { return total_; }
  size_t row_count() const { return counts_.size(); }
  const std::unordered_map<uint64_t, uint64_t>& rows() const { return counts_; }

  uint64_t pack(const std::vector<uint64_t>& values) const;
  std::vector<uint64_t> unpack(uint64_t key) const;

  Rational probability(uint64_t key) const;

  DistributionTable marginal(const std::vector<int>& cols) const;

  /// Shannon entropy of the marginal on `cols`, in bits.
  double entropy(const std::vector<int>& cols) const;
  double entropy_all() const;
  /// H(Y | X) = sum_x p(x) H(Y | X = x).
  double conditional_entropy(const std::vector<int>& y, const std::vector<int>& x) const;

  struct MiResult {
    bool exactly_zero;  // rational factorization p(xyz)p(z) == p(xz)p(yz) everywhere
    double bits;        // 0 when exactly_zero
  };
  /// I(X; Y | Z); Z may be empty. Column sets must be disjoint.
  MiResult mutual_information(const std::vector<int>& x, const std::vector<int>& y,
                              const std::vector<int>& z = {}) const;

  /// CSV: one column per variable plus exact num/den probability columns.
  /// Rows sorted by key so identical tables serialize identically.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<Column> cols_;
  std::vector<uint64_t> strides_;
  std::unordered_map<uint64_t, uint64_t> counts_;
  uint64_t total_ = 0;

  uint64_t project(uint64_t key, const std::vector<int>& cols) const;
};

}  // namespace ccpir
