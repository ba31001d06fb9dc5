#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "cmreg/error.hpp"

namespace cmreg {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Rational rat(long long num, long long den = 1) {
  require(den != 0, ErrorKind::invalid_argument, "zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt floor_big(const Rational& x) {
  const BigInt num = numerator(x);
  const BigInt den = denominator(x);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

inline long long floor_int(const Rational& x) { return floor_big(x).convert_to<long long>(); }
inline long long ceil_int(const Rational& x) { return -floor_int(-x); }
inline Rational frac(const Rational& x) { return x - Rational(floor_big(x)); }
inline bool is_integer(const Rational& x) { return denominator(x) == 1; }
inline bool is_nonpositive_integer(const Rational& x) { return is_integer(x) && x <= 0; }

inline double to_double(const Rational& x) {
  return numerator(x).convert_to<double>() / denominator(x).convert_to<double>();
}

/// Lossless "num/den" form; integers keep the "/1" suffix.
inline std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

/// Compact form for human-readable tables: integers print without "/1".
inline std::string to_pretty(const Rational& x) {
  return is_integer(x) ? numerator(x).str() : to_string(x);
}

inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    const BigInt num(std::string(text.substr(0, slash)));
    const BigInt den(std::string(text.substr(slash + 1)));
    require(den != 0, ErrorKind::invalid_argument, "zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw Error(ErrorKind::invalid_argument, "malformed rational: " + std::string(text));
  }
}

}  // namespace cmreg
