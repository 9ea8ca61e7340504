#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ccpir {

bool is_prime(uint32_t n);

/// One symbol of a prime field GF(q). Carries its modulus so that mixing
/// elements of different fields is caught at the operation, not downstream.
class FieldElement {
 public:
  FieldElement(uint32_t value, uint32_t modulus);

  static FieldElement zero(uint32_t q) { return FieldElement(0, q); }
  static FieldElement one(uint32_t q) { return FieldElement(1 % q, q); }

  uint32_t value() const { return value_; }
  uint32_t modulus() const { return q_; }

  FieldElement operator+(FieldElement rhs) const;
  FieldElement operator-(FieldElement rhs) const;
  FieldElement operator*(FieldElement rhs) const;
  FieldElement operator-() const;
  /// Multiplicative inverse; throws std::domain_error on zero.
  FieldElement inverse() const;

  bool operator==(const FieldElement&) const = default;

 private:
  uint32_t value_;
  uint32_t q_;
};

// Raw mod-q helpers for hot loops that keep the modulus in hand.
inline uint8_t gf_add(uint8_t a, uint8_t b, uint8_t q) {
  uint32_t s = uint32_t(a) + b;
  return uint8_t(s >= q ? s - q : s);
}
inline uint8_t gf_sub(uint8_t a, uint8_t b, uint8_t q) {
  return uint8_t(a >= b ? a - b : a + q - b);
}
inline uint8_t gf_mul(uint8_t a, uint8_t b, uint8_t q) {
  return uint8_t((uint32_t(a) * b) % q);
}
uint8_t gf_inv(uint8_t a, uint8_t q);
/// Reduces a signed coefficient (e.g. -1) into [0, q).
inline uint8_t gf_from_signed(int c, uint8_t q) {
  int r = c % int(q);
  return uint8_t(r < 0 ? r + q : r);
}

/// Fixed-length vector of GF(q) symbols sharing one modulus.
class SymbolVec {
 public:
  SymbolVec() : q_(2) {}
  explicit SymbolVec(uint32_t q, size_t len = 0);
  SymbolVec(uint32_t q, std::vector<uint8_t> data);

  uint32_t modulus() const { return q_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  uint8_t operator[](size_t i) const { return data_[i]; }
  void set(size_t i, uint8_t v);
  FieldElement element(size_t i) const { return FieldElement(data_[i], q_); }

  const std::vector<uint8_t>& data() const { return data_; }
  std::span<const uint8_t> span() const { return {data_.data(), data_.size()}; }

  /// this += coeff * rhs, elementwise. Lengths and moduli must match.
  void add_scaled(const SymbolVec& rhs, uint8_t coeff);
  void append(const SymbolVec& rhs);

  bool operator==(const SymbolVec&) const = default;

  std::string to_string() const;

 private:
  uint32_t q_;
  std::vector<uint8_t> data_;
};

}  // namespace ccpir
