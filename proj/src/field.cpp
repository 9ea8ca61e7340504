#include "ccpir/field.hpp"

#include <sstream>
#include <stdexcept>

namespace ccpir {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldElement::FieldElement(uint32_t value, uint32_t modulus)
    : value_(value), q_(modulus) {
  if (!is_prime(modulus)) {
    throw std::invalid_argument("GF(q) modulus must be prime, got " +
                                std::to_string(modulus));
  }
  if (value >= modulus) {
    throw std::invalid_argument("field value " + std::to_string(value) +
                                " out of range for GF(" + std::to_string(modulus) + ")");
  }
}

namespace {
void check_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus()) {
    throw std::invalid_argument("field modulus mismatch: GF(" +
                                std::to_string(a.modulus()) + ") vs GF(" +
                                std::to_string(b.modulus()) + ")");
  }
}
}  // namespace

FieldElement FieldElement::operator+(FieldElement rhs) const {
  check_same_field(*this, rhs);
  return FieldElement((value_ + rhs.value_) % q_, q_);
}

FieldElement FieldElement::operator-(FieldElement rhs) const {
  check_same_field(*this, rhs);
  return FieldElement((value_ + q_ - rhs.value_) % q_, q_);
}

FieldElement FieldElement::operator*(FieldElement rhs) const {
  check_same_field(*this, rhs);
  return FieldElement(uint32_t((uint64_t(value_) * rhs.value_) % q_), q_);
}

FieldElement FieldElement::operator-() const {
  return FieldElement(value_ == 0 ? 0 : q_ - value_, q_);
}

FieldElement FieldElement::inverse() const {
  if (value_ == 0) throw std::domain_error("inversion of zero in GF(" + std::to_string(q_) + ")");
  return FieldElement(gf_inv(uint8_t(value_), uint8_t(q_)), q_);
}

uint8_t gf_inv(uint8_t a, uint8_t q) {
  if (a == 0) throw std::domain_error("inversion of zero in GF(" + std::to_string(q) + ")");
  // Fermat: a^(q-2). q is tiny, plain square-and-multiply is plenty.
  uint32_t result = 1, base = a, e = q - 2;
  while (e > 0) {
    if (e & 1) result = (result * base) % q;
    base = (base * base) % q;
    e >>= 1;
  }
  return uint8_t(result);
}

SymbolVec::SymbolVec(uint32_t q, size_t len) : q_(q), data_(len, 0) {
  if (!is_prime(q)) throw std::invalid_argument("SymbolVec modulus must be prime");
}

SymbolVec::SymbolVec(uint32_t q, std::vector<uint8_t> data)
    : q_(q), data_(std::move(data)) {
  if (!is_prime(q)) throw std::invalid_argument("SymbolVec modulus must be prime");
  for (uint8_t v : data_)
    if (v >= q_) throw std::invalid_argument("symbol out of range for GF(" + std::to_string(q_) + ")");
}

void SymbolVec::set(size_t i, uint8_t v) {
  if (v >= q_) throw std::invalid_argument("symbol out of range");
  data_[i] = v;
}

void SymbolVec::add_scaled(const SymbolVec& rhs, uint8_t coeff) {
  if (rhs.q_ != q_) throw std::invalid_argument("SymbolVec modulus mismatch");
  if (rhs.size() != size()) throw std::invalid_argument("SymbolVec length mismatch");
  if (coeff == 0) return;
  for (size_t i = 0; i < data_.size(); ++i)
    data_[i] = gf_add(data_[i], gf_mul(coeff, rhs.data_[i], uint8_t(q_)), uint8_t(q_));
}

void SymbolVec::append(const SymbolVec& rhs) {
  if (rhs.q_ != q_) throw std::invalid_argument("SymbolVec modulus mismatch");
  data_.insert(data_.end(), rhs.data_.begin(), rhs.data_.end());
}

std::string SymbolVec::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < data_.size(); ++i) os << (i ? "," : "") << int(data_[i]);
  os << "]";
  return os.str();
}

}  // namespace ccpir
