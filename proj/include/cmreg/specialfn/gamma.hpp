#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "cmreg/error.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/rational.hpp"

namespace cmreg {

namespace detail {

// Lanczos approximation with g = 7.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
inline constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

/// Lanczos sum and shifted base for x >= 1/2.
struct LanczosParts {
  double series;
  double base;  // x + g - 1/2
};

inline LanczosParts lanczos_parts(double x) {
  const double y = x - 1.0;
  double series = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) series += kLanczosCoeff[i] / (y + static_cast<double>(i));
  return {series, y + kLanczosG + 0.5};
}

inline double error_ulps(double x) { return 24.0 + 4.0 * std::abs(x); }

}  // namespace detail

/// sin(pi x) with exact argument reduction for rational x.
inline double sinpi(const Rational& x) {
  Rational r = x - Rational(2) * Rational(floor_big(x / 2));  // r in [0, 2)
  double sign = 1.0;
  if (r >= 1) {
    r -= 1;
    sign = -1.0;
  }
  if (r > Rational(1, 2)) r = 1 - r;
  return sign * std::sin(kPi * to_double(r));
}

inline double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  double sign = 1.0;
  if (r >= 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(kPi * r);
}

/// Γ(x) for real x; reflection below 1/2. Poles raise ErrorKind::pole.
inline NumValue gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw Error(ErrorKind::pole, "gamma: pole at nonpositive integer");
  double v = 0.0;
  if (x < 0.5) {
    const auto [series, base] = detail::lanczos_parts(1.0 - x);
    const double g1mx = std::exp(detail::kHalfLog2Pi + (0.5 - x) * std::log(base) - base) * series;
    v = kPi / (sinpi(x) * g1mx);
  } else {
    const auto [series, base] = detail::lanczos_parts(x);
    v = std::exp(detail::kHalfLog2Pi + (x - 0.5) * std::log(base) - base) * series;
  }
  return {v, detail::error_ulps(x) * kEps * std::abs(v)};
}

inline NumValue gamma(const Rational& x) {
  if (is_nonpositive_integer(x)) throw Error(ErrorKind::pole, "gamma: pole at " + to_string(x));
  if (x < Rational(1, 2)) {
    const NumValue g1mx = gamma(to_double(1 - x));
    const double v = kPi / (sinpi(x) * g1mx.re());
    return {v, (g1mx.err / std::abs(g1mx.re()) + 4.0 * kEps) * std::abs(v)};
  }
  return gamma(to_double(x));
}

/// log|Γ(x)| together with sign(Γ(x)).
struct LogGamma {
  double log_abs = 0.0;
  int sign = 1;
  double err = 0.0;  // absolute error of log_abs
};

inline LogGamma log_gamma(const Rational& x) {
  if (is_nonpositive_integer(x)) throw Error(ErrorKind::pole, "gamma: pole at " + to_string(x));
  const double xd = to_double(x);
  if (x < Rational(1, 2)) {
    const LogGamma r = log_gamma(1 - x);
    const double s = sinpi(x);
    return {std::log(kPi) - std::log(std::abs(s)) - r.log_abs, (s < 0 ? -1 : 1) * r.sign, r.err + 2.0 * kEps};
  }
  const auto [series, base] = detail::lanczos_parts(xd);
  const double lg = detail::kHalfLog2Pi + (xd - 0.5) * std::log(base) - base + std::log(series);
  return {lg, 1, detail::error_ulps(xd) * kEps * (1.0 + std::abs(lg))};
}

/// 1/Γ(x), exactly zero at the poles.
inline NumValue rgamma(const Rational& x) {
  if (is_nonpositive_integer(x)) return {0.0, 0.0};
  const NumValue g = gamma(x);
  return NumValue(1.0) / g;
}

/// ΠΓ(upper)/ΠΓ(lower) in log space. Lower poles contribute 1/Γ = 0.
inline NumValue gamma_ratio(std::span<const Rational> upper, std::span<const Rational> lower) {
  for (const auto& x : lower)
    if (is_nonpositive_integer(x)) return {0.0, 0.0};
  double log_abs = 0.0;
  double err = 0.0;
  int sign = 1;
  for (const auto& x : upper) {
    const LogGamma g = log_gamma(x);
    log_abs += g.log_abs;
    err += g.err;
    sign *= g.sign;
  }
  for (const auto& x : lower) {
    const LogGamma g = log_gamma(x);
    log_abs -= g.log_abs;
    err += g.err;
    sign *= g.sign;
  }
  const double v = sign * std::exp(log_abs);
  return {v, (err + kEps * (1.0 + std::abs(log_abs))) * std::abs(v)};
}

inline NumValue gamma_ratio(std::initializer_list<Rational> upper, std::initializer_list<Rational> lower) {
  const std::vector<Rational> u(upper), l(lower);
  return gamma_ratio(std::span<const Rational>(u), std::span<const Rational>(l));
}

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y).
inline NumValue beta(const Rational& x, const Rational& y) { return gamma_ratio({x, y}, {x + y}); }

/// Rising factorial (x)_n.
inline Rational pochhammer(const Rational& x, unsigned n) {
  Rational r(1);
  for (unsigned i = 0; i < n; ++i) r *= x + i;
  return r;
}

/// The exact rational f with Γ(x) = f·Γ({x}).
inline Rational gamma_shift_factor(const Rational& x) {
  require(!is_integer(x), ErrorKind::invalid_argument, "gamma_shift_factor: integer argument");
  const long long n = floor_int(x);
  const Rational base = frac(x);
  Rational f(1);
  if (n >= 0) {
    for (long long k = 0; k < n; ++k) f *= base + k;
  } else {
    for (long long k = 0; k < -n; ++k) f /= x + k;
  }
  return f;
}

/// ψ(x): reflection for x < 1/2, upward recurrence, then the asymptotic series.
inline NumValue digamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw Error(ErrorKind::pole, "digamma: pole at nonpositive integer");
  double shift = 0.0;
  if (x < 0.5) {
    // ψ(x) = ψ(1-x) - π cot(πx)
    const NumValue r = digamma(1.0 - x);
    const double cot = std::cos(kPi * x) / std::sin(kPi * x);
    const double v = r.re() - kPi * cot;
    return {v, r.err + 8.0 * kEps * (std::abs(v) + kPi * std::abs(cot) + 1.0)};
  }
  double acc_abs = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    acc_abs += 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  const double tail =
      inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  const double v = std::log(x) - 0.5 / x - tail + shift;
  return {v, 16.0 * kEps * (std::abs(v) + acc_abs + std::abs(std::log(x)))};
}

inline NumValue digamma(const Rational& x) {
  if (is_nonpositive_integer(x)) throw Error(ErrorKind::pole, "digamma: pole at " + to_string(x));
  if (x < Rational(1, 2)) {
    const NumValue r = digamma(to_double(1 - x));
    const double cot = sinpi(x + Rational(1, 2)) / sinpi(x);
    const double v = r.re() - kPi * cot;
    return {v, r.err + 8.0 * kEps * (std::abs(v) + kPi * std::abs(cot))};
  }
  return digamma(to_double(x));
}

}  // namespace cmreg
