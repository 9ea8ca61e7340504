#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ccpir/field.hpp"

namespace ccpir {

/// Thrown when two known equations contradict each other; always a scheme bug,
/// never a property of the audited world.
struct InconsistentSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incremental Gaussian elimination over GF(q) with vector-valued right-hand
/// sides. Equations are linear functionals over a fixed ambient space (the
/// flattened library symbols); values are SymbolVecs of one shared length.
///
/// Besides plain solving, the system can emit a certificate: the combination
/// of the *original* equations that produces a target functional. The
/// certificate depends only on the coefficients, so it can be reused across
/// every library realization without re-eliminating.
class LinearSystem {
 public:
  LinearSystem(uint32_t q, size_t dim, size_t value_len);

  uint32_t modulus() const { return q_; }
  size_t dimension() const { return dim_; }
  size_t equation_count() const { return original_; }

  void add_equation(std::span<const uint8_t> coeffs, const SymbolVec& value);
  /// Coefficient-only form; values are not tracked (solve() unavailable).
  void add_functional(std::span<const uint8_t> coeffs);

  bool contains(std::span<const uint8_t> target) const;
  /// Value of the target functional if it lies in the span.
  std::optional<SymbolVec> solve(std::span<const uint8_t> target) const;
  /// Combination lambda over the original equations with
  /// target = sum_i lambda[i] * coeffs_i. Empty optional if out of span.
  std::optional<std::vector<uint8_t>> certificate(std::span<const uint8_t> target) const;

  size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    std::vector<uint8_t> coeffs;
    std::vector<uint8_t> combo;  // over original equations
    SymbolVec value;
    size_t pivot;
  };

  uint32_t q_;
  size_t dim_;
  size_t value_len_;
  bool track_values_ = true;
  std::vector<Row> rows_;
  size_t original_ = 0;

  // reduce() returns the residual coefficients plus the combination of
  // original equations subtracted along the way.
  void reduce(std::vector<uint8_t>& coeffs, std::vector<uint8_t>& combo,
              SymbolVec* value) const;
};

struct NotInSpan {};

/// One-shot oracle form: known equations in, value of the target out.
/// Gaussian elimination semantics, deterministic.
std::variant<SymbolVec, NotInSpan> span_solve(
    const std::vector<std::pair<std::vector<uint8_t>, SymbolVec>>& known,
    std::span<const uint8_t> target, uint32_t q);

}  // namespace ccpir
