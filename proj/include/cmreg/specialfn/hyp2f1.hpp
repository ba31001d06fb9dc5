#pragma once

#include <cmath>
#include <string>

#include "cmreg/error.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/rational.hpp"
#include "cmreg/specialfn/gamma.hpp"
#include "cmreg/specialfn/series.hpp"

namespace cmreg {

namespace detail {

inline NumValue direct_2f1(const Rational& a, const Rational& b, const Rational& c, double x, const SeriesConfig& cfg) {
  SeriesConfig plain = cfg;
  plain.precision = Precision::binary64;
  const auto r = sum_direct<double>(PFQParams{{a, b}, {c}}, x, plain);
  return {r.value, r.err};
}

/// F(a,b;a+b+m;x) near x = 1 for an integer m >= 0, in y = 1 − x:
/// a finite sum (m > 0) plus Γ(a+b+m)/(Γ(a)Γ(b))·(−1)^{m+1} yᵐ Σ (a+m)_n(b+m)_n/(n!(n+m)!) yⁿ
/// ·[log y − ψ(n+1) − ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)].
inline NumValue log_case_2f1(const Rational& a, const Rational& b, long long m, double y, const SeriesConfig& cfg) {
  const Rational c = a + b + m;
  NumValue finite(0.0);
  if (m > 0) {
    const NumValue pref = gamma_ratio({Rational(m), c}, {a + m, b + m});
    double term = 1.0;
    double sum = 0.0;
    double abs_sum = 0.0;
    for (long long n = 0; n < m; ++n) {
      sum += term;
      abs_sum += std::abs(term);
      const double nd = static_cast<double>(n);
      term *= (to_double(a) + nd) * (to_double(b) + nd) / ((nd + 1.0) * (1.0 - static_cast<double>(m) + nd)) * y;
    }
    finite = pref * NumValue(sum, 4.0 * kEps * abs_sum);
  }
  const Rational am = a + m;
  const Rational bm = b + m;
  const NumValue pref = gamma_ratio({c}, {a, b, Rational(m + 1)});
  const double amd = to_double(am);
  const double bmd = to_double(bm);
  const NumValue psi_1 = digamma(Rational(1));
  const NumValue psi_m1 = digamma(Rational(m + 1));
  const NumValue psi_a = digamma(am);
  const NumValue psi_b = digamma(bm);
  // bracket_n = ψ(a+m+n) + ψ(b+m+n) − ψ(n+1) − ψ(n+m+1), updated by recurrence.
  double bracket = psi_a.re() + psi_b.re() - psi_1.re() - psi_m1.re();
  const double bracket_err = psi_a.err + psi_b.err + psi_1.err + psi_m1.err;
  const double log_y = std::log(y);
  const double md = static_cast<double>(m);
  double coeff = 1.0;  // (a+m)_n (b+m)_n m! / (n! (n+m)!)
  CompensatedSum<double> sum;
  double abs_total = 0.0;
  for (std::size_t n = 0; n < cfg.max_terms; ++n) {
    const double term = coeff * (log_y + bracket);
    sum.add(term);
    abs_total += std::abs(term);
    const double nd = static_cast<double>(n);
    const double next_coeff = coeff * (amd + nd) * (bmd + nd) / ((nd + 1.0) * (nd + md + 1.0)) * y;
    bracket += 1.0 / (amd + nd) + 1.0 / (bmd + nd) - 1.0 / (nd + 1.0) - 1.0 / (nd + md + 1.0);
    const double tail = std::abs(next_coeff) * (std::abs(bracket) + std::abs(log_y)) / (1.0 - y);
    if (n > 4 && tail <= 0.1 * cfg.tol * std::max(1.0, std::abs(sum.value()))) {
      const NumValue series(sum.value(), 4.0 * kEps * abs_total + bracket_err / (1.0 - y) + tail);
      const double sign = (m % 2 == 0) ? -1.0 : 1.0;
      const NumValue ym(std::pow(y, md), 2.0 * kEps * std::pow(y, md));
      return finite + NumValue(sign) * pref * ym * series;
    }
    coeff = next_coeff;
  }
  throw Error(ErrorKind::nonconvergence, "hyp2f1: logarithmic expansion did not converge");
}

/// Gauss connection formula to the 1 − x variable for non-integer d = c − a − b.
inline NumValue connection_2f1(const Rational& a, const Rational& b, const Rational& c, double y,
                               const SeriesConfig& cfg) {
  const Rational d = c - a - b;
  const NumValue first_pref = gamma_ratio({c, d}, {c - a, c - b});
  const NumValue second_pref = gamma_ratio({c, -d}, {a, b});
  NumValue total(0.0);
  if (first_pref.value != 0.0) total += first_pref * direct_2f1(a, b, 1 - d, y, cfg);
  if (second_pref.value != 0.0) {
    const NumValue power(std::pow(y, to_double(d)), 2.0 * kEps * std::pow(y, to_double(d)) * (1.0 + std::abs(to_double(d) * std::log(y))));
    total += second_pref * power * direct_2f1(c - a, c - b, 1 + d, y, cfg);
  }
  return total;
}

}  // namespace detail

/// ₂F₁(a,b;c;x) for x in [0,1) with the complement y = 1 − x supplied exactly.
/// Near x = 1 uses the connection formula, or the logarithmic expansion when c − a − b ∈ ℤ
/// (negative offsets go through Euler's transformation first).
inline NumValue hyp2f1(const Rational& a, const Rational& b, const Rational& c, double x, double y,
                       const SeriesConfig& cfg = {}) {
  require(!is_nonpositive_integer(c), ErrorKind::invalid_argument, "hyp2f1: c is a nonpositive integer");
  require(x >= 0.0 && x <= 1.0 && y > 0.0, ErrorKind::invalid_argument, "hyp2f1: argument must lie in [0, 1)");
  if (x == 0.0) return {1.0, 0.0};
  if (x <= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b)) return detail::direct_2f1(a, b, c, x, cfg);
  const Rational d = c - a - b;
  if (!is_integer(d)) return detail::connection_2f1(a, b, c, y, cfg);
  if (d >= 0) return detail::log_case_2f1(a, b, floor_int(d), y, cfg);
  // Euler: F(a,b;c;x) = (1−x)^{c−a−b} F(c−a,c−b;c;x).
  const NumValue power(std::pow(y, to_double(d)), 4.0 * kEps * std::pow(y, to_double(d)) * (1.0 + std::abs(to_double(d) * std::log(y))));
  return power * hyp2f1(c - a, c - b, c, x, y, cfg);
}

inline NumValue hyp2f1(const Rational& a, const Rational& b, const Rational& c, double t,
                       const SeriesConfig& cfg = {}) {
  return hyp2f1(a, b, c, t, 1.0 - t, cfg);
}

/// Gauss summation Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)).
inline NumValue hyp2f1_at1(const Rational& a, const Rational& b, const Rational& c) {
  require(c - a - b > 0, ErrorKind::divergence, "hyp2f1_at1: requires c - a - b > 0");
  return gamma_ratio({c, c - a - b}, {c - a, c - b});
}

enum class Contiguous { R1, R3, R5, R9, R13 };

inline std::string to_string(Contiguous r) {
  switch (r) {
    case Contiguous::R1: return "R1";
    case Contiguous::R3: return "R3";
    case Contiguous::R5: return "R5";
    case Contiguous::R9: return "R9";
    case Contiguous::R13: return "R13";
  }
  return "?";
}

/// LHS − RHS of the selected three-term contiguous relation at (a,b,c,t).
inline NumValue contiguous_residual(Contiguous rel, const Rational& a, const Rational& b, const Rational& c, double t,
                                    const SeriesConfig& cfg = {}) {
  auto F = [&](const Rational& aa, const Rational& bb, const Rational& cc) { return hyp2f1(aa, bb, cc, t, cfg); };
  const NumValue ad(to_double(a)), bd(to_double(b)), cd(to_double(c)), td(t), one(1.0);
  switch (rel) {
    case Contiguous::R1:
      return (cd - ad * 2.0 + (ad - bd) * td) * F(a, b, c) + ad * (one - td) * F(a + 1, b, c) - (cd - ad) * F(a - 1, b, c);
    case Contiguous::R3:
      return (cd - ad - bd) * F(a, b, c) + ad * (one - td) * F(a + 1, b, c) - (cd - bd) * F(a, b - 1, c);
    case Contiguous::R5:
      return (cd - ad - one) * F(a, b, c) + ad * F(a + 1, b, c) - (cd - one) * F(a, b, c - 1);
    case Contiguous::R9:
      return (ad - one + (one + bd - cd) * td) * F(a, b, c) + (cd - ad) * F(a - 1, b, c) -
             (cd - one) * (one - td) * F(a, b, c - 1);
    case Contiguous::R13:
      return cd * (one - td) * F(a, b, c) + (cd - ad) * td * F(a, b, c + 1) - cd * F(a, b - 1, c);
  }
  throw Error(ErrorKind::internal, "unknown contiguous relation");
}

}  // namespace cmreg
