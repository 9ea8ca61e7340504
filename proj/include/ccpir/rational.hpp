#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccpir {

// Exact arithmetic everywhere a probability, load, or memory size appears.
// cpp_rational keeps values canonical (gcd-reduced, positive denominator),
// which is exactly the invariant the rest of the code relies on. Floating
// point enters only when an entropy or MI value is finally reported.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return numerator(r); }
inline BigInt rat_den(const Rational& r) { return denominator(r); }

/// Serialized as "num/den", denominator always explicit ("3" -> "3/1").
inline std::string rat_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "num/den" or a bare integer.
inline Rational rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rational(num, den);
}

inline double rat_to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace ccpir
