#include "ccpir/linear.hpp"

#include <stdexcept>

namespace ccpir {

LinearSystem::LinearSystem(uint32_t q, size_t dim, size_t value_len)
    : q_(q), dim_(dim), value_len_(value_len) {
  if (!is_prime(q)) throw std::invalid_argument("LinearSystem modulus must be prime");
}

void LinearSystem::reduce(std::vector<uint8_t>& coeffs, std::vector<uint8_t>& combo,
                          SymbolVec* value) const {
  const uint8_t q = uint8_t(q_);
  for (const Row& row : rows_) {
    uint8_t c = coeffs[row.pivot];
    if (c == 0) continue;
    // subtract c * row
    for (size_t j = 0; j < dim_; ++j)
      coeffs[j] = gf_sub(coeffs[j], gf_mul(c, row.coeffs[j], q), q);
    for (size_t j = 0; j < combo.size(); ++j)
      combo[j] = gf_sub(combo[j], gf_mul(c, row.combo[j], q), q);
    if (value && track_values_) value->add_scaled(row.value, gf_sub(0, c, q));
  }
}

void LinearSystem::add_equation(std::span<const uint8_t> coeffs, const SymbolVec& value) {
  if (!track_values_) throw std::logic_error("system already holds coefficient-only rows");
  if (value.modulus() != q_ || value.size() != value_len_)
    throw std::invalid_argument("equation value has wrong modulus or length");
  if (coeffs.size() != dim_) throw std::invalid_argument("equation has wrong dimension");

  const uint8_t q = uint8_t(q_);
  Row row{std::vector<uint8_t>(coeffs.begin(), coeffs.end()),
          std::vector<uint8_t>(original_ + 1, 0), value, 0};
  row.combo[original_] = 1;
  ++original_;
  for (Row& r : rows_) r.combo.resize(original_, 0);

  reduce(row.coeffs, row.combo, &row.value);

  size_t pivot = dim_;
  for (size_t j = 0; j < dim_; ++j)
    if (row.coeffs[j] != 0) { pivot = j; break; }
  if (pivot == dim_) {
    // Coefficients vanished: the equation is dependent. A nonzero residual
    // value means the inputs contradict each other.
    for (size_t i = 0; i < row.value.size(); ++i)
      if (row.value[i] != 0)
        throw InconsistentSystem("inconsistent known equations in span_solve input");
    return;
  }
  uint8_t inv = gf_inv(row.coeffs[pivot], q);
  if (inv != 1) {
    for (auto& c : row.coeffs) c = gf_mul(c, inv, q);
    for (auto& c : row.combo) c = gf_mul(c, inv, q);
    SymbolVec scaled(q_, row.value.size());
    scaled.add_scaled(row.value, inv);
    row.value = scaled;
  }
  row.pivot = pivot;
  // Back-substitute into existing rows so lookups stay one pass.
  for (Row& r : rows_) {
    uint8_t c = r.coeffs[pivot];
    if (c == 0) continue;
    for (size_t j = 0; j < dim_; ++j)
      r.coeffs[j] = gf_sub(r.coeffs[j], gf_mul(c, row.coeffs[j], q), q);
    for (size_t j = 0; j < r.combo.size(); ++j)
      r.combo[j] = gf_sub(r.combo[j], gf_mul(c, row.combo[j], q), q);
    if (track_values_) r.value.add_scaled(row.value, gf_sub(0, c, q));
  }
  rows_.push_back(std::move(row));
}

void LinearSystem::add_functional(std::span<const uint8_t> coeffs) {
  if (original_ == 0) track_values_ = false;
  if (track_values_) throw std::logic_error("system already holds valued rows");
  if (coeffs.size() != dim_) throw std::invalid_argument("equation has wrong dimension");

  const uint8_t q = uint8_t(q_);
  Row row{std::vector<uint8_t>(coeffs.begin(), coeffs.end()),
          std::vector<uint8_t>(original_ + 1, 0), SymbolVec(q_, 0), 0};
  row.combo[original_] = 1;
  ++original_;
  for (Row& r : rows_) r.combo.resize(original_, 0);
  reduce(row.coeffs, row.combo, nullptr);

  size_t pivot = dim_;
  for (size_t j = 0; j < dim_; ++j)
    if (row.coeffs[j] != 0) { pivot = j; break; }
  if (pivot == dim_) return;
  uint8_t inv = gf_inv(row.coeffs[pivot], q);
  if (inv != 1) {
    for (auto& c : row.coeffs) c = gf_mul(c, inv, q);
    for (auto& c : row.combo) c = gf_mul(c, inv, q);
  }
  row.pivot = pivot;
  for (Row& r : rows_) {
    uint8_t c = r.coeffs[pivot];
    if (c == 0) continue;
    for (size_t j = 0; j < dim_; ++j)
      r.coeffs[j] = gf_sub(r.coeffs[j], gf_mul(c, row.coeffs[j], q), q);
    for (size_t j = 0; j < r.combo.size(); ++j)
      r.combo[j] = gf_sub(r.combo[j], gf_mul(c, row.combo[j], q), q);
  }
  rows_.push_back(std::move(row));
}

bool LinearSystem::contains(std::span<const uint8_t> target) const {
  if (target.size() != dim_) throw std::invalid_argument("target has wrong dimension");
  std::vector<uint8_t> coeffs(target.begin(), target.end());
  std::vector<uint8_t> combo(original_, 0);
  reduce(coeffs, combo, nullptr);
  for (uint8_t c : coeffs)
    if (c != 0) return false;
  return true;
}

std::optional<SymbolVec> LinearSystem::solve(std::span<const uint8_t> target) const {
  if (!track_values_) throw std::logic_error("coefficient-only system cannot solve values");
  if (target.size() != dim_) throw std::invalid_argument("target has wrong dimension");
  std::vector<uint8_t> coeffs(target.begin(), target.end());
  std::vector<uint8_t> combo(original_, 0);
  SymbolVec value(q_, value_len_);
  // target - sum(subtracted rows) == residual; residual zero => value of the
  // subtracted combination is the target's value.
  reduce(coeffs, combo, &value);
  for (uint8_t c : coeffs)
    if (c != 0) return std::nullopt;
  SymbolVec result(q_, value_len_);
  result.add_scaled(value, gf_sub(0, 1, uint8_t(q_)));  // value accumulated negated
  return result;
}

std::optional<std::vector<uint8_t>> LinearSystem::certificate(
    std::span<const uint8_t> target) const {
  if (target.size() != dim_) throw std::invalid_argument("target has wrong dimension");
  std::vector<uint8_t> coeffs(target.begin(), target.end());
  std::vector<uint8_t> combo(original_, 0);
  reduce(coeffs, combo, nullptr);
  for (uint8_t c : coeffs)
    if (c != 0) return std::nullopt;
  // reduce() subtracted combo_i * eq_i and reached zero, so
  // target == sum_i (-combo[i]) * eq_i.
  const uint8_t q = uint8_t(q_);
  for (auto& c : combo) c = gf_sub(0, c, q);
  return combo;
}

std::variant<SymbolVec, NotInSpan> span_solve(
    const std::vector<std::pair<std::vector<uint8_t>, SymbolVec>>& known,
    std::span<const uint8_t> target, uint32_t q) {
  size_t dim = target.size();
  size_t value_len = known.empty() ? 0 : known.front().second.size();
  LinearSystem sys(q, dim, value_len);
  for (const auto& [coeffs, value] : known) sys.add_equation(coeffs, value);
  auto solved = sys.solve(target);
  if (!solved) return NotInSpan{};
  return *solved;
}

}  // namespace ccpir
