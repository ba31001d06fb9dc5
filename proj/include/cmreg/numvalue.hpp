#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace cmreg {

using Complex = std::complex<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// A complex value with an estimated absolute error bound.
/// Arithmetic propagates the bound to first order and adds one rounding unit.
struct NumValue {
  Complex value{};
  double err = 0.0;

  NumValue() = default;
  NumValue(Complex v, double e = 0.0) : value(v), err(e) {}  // NOLINT(google-explicit-constructor)
  NumValue(double v, double e = 0.0) : value(v, 0.0), err(e) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] double re() const { return value.real(); }
  [[nodiscard]] double im() const { return value.imag(); }
  [[nodiscard]] double abs() const { return std::abs(value); }
  [[nodiscard]] bool finite() const {
    return std::isfinite(value.real()) && std::isfinite(value.imag()) && std::isfinite(err);
  }
};

namespace detail {
inline double ulp_of(Complex v) { return kEps * std::abs(v); }
}  // namespace detail

inline NumValue operator-(const NumValue& a) { return {-a.value, a.err}; }

inline NumValue operator+(const NumValue& a, const NumValue& b) {
  const Complex v = a.value + b.value;
  return {v, a.err + b.err + detail::ulp_of(v)};
}

inline NumValue operator-(const NumValue& a, const NumValue& b) {
  const Complex v = a.value - b.value;
  return {v, a.err + b.err + detail::ulp_of(v)};
}

inline NumValue operator*(const NumValue& a, const NumValue& b) {
  const Complex v = a.value * b.value;
  return {v, std::abs(a.value) * b.err + std::abs(b.value) * a.err + a.err * b.err + detail::ulp_of(v)};
}

inline NumValue operator/(const NumValue& a, const NumValue& b) {
  const Complex v = a.value / b.value;
  const double margin = std::abs(b.value) - b.err;
  const double e = margin > 0.0 ? (a.err + std::abs(v) * b.err) / margin
                                : std::numeric_limits<double>::infinity();
  return {v, e + detail::ulp_of(v)};
}

inline NumValue& operator+=(NumValue& a, const NumValue& b) { return a = a + b; }
inline NumValue& operator-=(NumValue& a, const NumValue& b) { return a = a - b; }
inline NumValue& operator*=(NumValue& a, const NumValue& b) { return a = a * b; }

/// x^e for real x > 0 and real exponent e.
inline NumValue real_pow(const NumValue& x, double e) {
  const double base = x.re();
  const double v = std::pow(base, e);
  return {v, std::abs(e * v / base) * x.err + 2.0 * kEps * std::abs(v)};
}

/// True when |x - expected| is within tol (absolute) plus the carried error.
inline bool agrees(const NumValue& x, Complex expected, double tol) {
  return std::abs(x.value - expected) <= tol + x.err;
}

}  // namespace cmreg
