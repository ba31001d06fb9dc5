#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "cmreg/error.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/rational.hpp"
#include "cmreg/specialfn.hpp"

namespace cmreg {

/// e^{2πik/N}.
inline NumValue root_of_unity(long long k, long long N) {
  const double angle = 2.0 * kPi * static_cast<double>(mod_floor(k, N)) / static_cast<double>(N);
  return {std::polar(1.0, angle), 2.0 * kEps};
}

/// ε^k with ε = i for p = 2 and ε = −1 otherwise; exact.
inline Complex eps_power(const FibrationParams& fp, long long k) {
  if (fp.p() == 2) {
    static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kIPowers[mod_floor(k, 4)];
  }
  return {mod_floor(k, 2) == 0 ? 1.0 : -1.0, 0.0};
}

/// ε^{pβ}: pβ = nb mod p is an integer.
inline Complex eps_p_beta(const FibrationParams& fp, long long n) { return eps_power(fp, mod_floor(n * fp.b(), fp.p())); }

namespace detail {

struct ShiftedExponents {
  Rational a;  // na/p − i
  Rational b;  // nb/p − j
  Rational c;  // nc/p − k
};

inline ShiftedExponents shifted_exponents(const FibrationParams& fp, long long n, const FormExponents& e) {
  fp.require_n(n);
  return {rat(n * fp.a(), fp.p()) - e.i, rat(n * fp.b(), fp.p()) - e.j, rat(n * fp.c(), fp.p()) - e.k};
}

}  // namespace detail

/// B(1−a',1−c')·t^{1−a'−c'}·₂F₁(1−a', b'; 2−a'−c'; t).
inline NumValue one_period_delta0(const FibrationParams& fp, long long n, const FormExponents& e, double t,
                                  const SeriesConfig& cfg = {}) {
  require(t > 0.0 && t < 1.0, ErrorKind::invalid_argument, "one_period_delta0: t must lie in (0,1)");
  const auto [a, b, c] = detail::shifted_exponents(fp, n, e);
  require(a < 1 && c < 1, ErrorKind::invalid_argument, "one_period_delta0: requires 1-alpha, 1-gamma > 0");
  const NumValue pref = beta(1 - a, 1 - c) * real_pow(NumValue(t), to_double(1 - a - c));
  return pref * hyp2f1(1 - a, b, 2 - a - c, t, 1.0 - t, cfg);
}

/// ε^{−pc'}·B(1−b',1−c')·(1−t)^{1−b'−c'}·₂F₁(a', 1−b'; 2−b'−c'; 1−t).
inline NumValue one_period_delta1(const FibrationParams& fp, long long n, const FormExponents& e, double t,
                                  const SeriesConfig& cfg = {}) {
  require(t > 0.0 && t < 1.0, ErrorKind::invalid_argument, "one_period_delta1: t must lie in (0,1)");
  const auto [a, b, c] = detail::shifted_exponents(fp, n, e);
  require(b < 1 && c < 1, ErrorKind::invalid_argument, "one_period_delta1: requires 1-beta, 1-gamma > 0");
  const long long pc = floor_int(c * fp.p());
  const NumValue pref = NumValue(eps_power(fp, -pc)) * beta(1 - b, 1 - c) * real_pow(NumValue(1.0 - t), to_double(1 - b - c));
  return pref * hyp2f1(a, 1 - b, 2 - b - c, 1.0 - t, t, cfg);
}

struct CyclePair {
  NumValue delta0;
  NumValue delta1;
};

inline CyclePair omega_periods(const FibrationParams& fp, long long n, double t, const SeriesConfig& cfg = {}) {
  const FormExponents e = holomorphic_exponents(fp, n);
  return {one_period_delta0(fp, n, e, t, cfg), one_period_delta1(fp, n, e, t, cfg)};
}

inline CyclePair eta_periods(const FibrationParams& fp, long long n, double t, const SeriesConfig& cfg = {}) {
  const FormExponents e = eta_exponents(fp, n);
  return {one_period_delta0(fp, n, e, t, cfg), one_period_delta1(fp, n, e, t, cfg)};
}

/// Rows κ₀, κ₁; columns ω_n, η_n.
struct PeriodMatrix {
  std::array<std::array<NumValue, 2>, 2> entries;
  double t = 0.0;

  [[nodiscard]] NumValue det() const { return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]; }
};

inline PeriodMatrix period_matrix(const FibrationParams& fp, long long n, double t, const SeriesConfig& cfg = {}) {
  const NumValue scale = NumValue(1.0) - root_of_unity(n, fp.p());
  const CyclePair w = omega_periods(fp, n, t, cfg);
  const CyclePair h = eta_periods(fp, n, t, cfg);
  return {{{{scale * w.delta0, scale * h.delta0}, {scale * w.delta1, scale * h.delta1}}}, t};
}

/// ε^{pβ}(1−ζ_p^n)²·B(β,1−β)/(1−α).
inline NumValue det_limit(const FibrationParams& fp, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n);
  const NumValue one_minus_zeta = NumValue(1.0) - root_of_unity(n, fp.p());
  return NumValue(eps_p_beta(fp, n)) * one_minus_zeta * one_minus_zeta * beta(beta_, 1 - beta_) /
         NumValue(to_double(1 - alpha));
}

/// Richardson extrapolation of det M_n(1 − h) to h = 0 on h = 2^{−k}, k = 4..10, order 4.
inline NumValue extrapolated_det_limit(const FibrationParams& fp, long long n, const SeriesConfig& cfg = {}) {
  constexpr int kFirst = 4;
  constexpr int kLast = 10;
  constexpr int kOrder = 4;
  std::vector<std::vector<Complex>> table;
  for (int k = kFirst; k <= kLast; ++k) {
    const double h = std::ldexp(1.0, -k);
    std::vector<Complex> row{period_matrix(fp, n, 1.0 - h, cfg).det().value};
    for (int j = 1; j <= kOrder && j <= k - kFirst; ++j) {
      const double factor = std::ldexp(1.0, j) - 1.0;
      const Complex prev = table.back()[static_cast<std::size_t>(j - 1)];
      row.push_back(row[static_cast<std::size_t>(j - 1)] + (row[static_cast<std::size_t>(j - 1)] - prev) / factor);
    }
    table.push_back(std::move(row));
  }
  const Complex best = table.back()[kOrder];
  const Complex previous = table[table.size() - 2][kOrder];
  return {best, std::abs(best - previous)};
}

struct TwoPeriods {
  NumValue omega;
  NumValue eta;
};

/// Δ₁ periods: −(ε^{pβ}/l)·B(β,μ)B(1−β,β−α+μ) and that times (1−β)/(1−α+μ).
inline TwoPeriods two_period_delta1(const FibrationParams& fp, long long m, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n, m);
  require(mu > alpha - beta_, ErrorKind::precondition, "two_period_delta1: requires mu > alpha - beta");
  const NumValue omega = NumValue(-eps_p_beta(fp, n) / static_cast<double>(fp.l())) * beta(beta_, mu) *
                         beta(1 - beta_, beta_ - alpha + mu);
  return {omega, omega * NumValue(to_double((1 - beta_) / (1 - alpha + mu)))};
}

/// Series configuration used for the ₃F₂ values at 1.
inline SeriesConfig regulator_series_config(Precision precision = Precision::extended) {
  SeriesConfig cfg;
  cfg.precision = precision;
  cfg.accel_tol = precision == Precision::extended ? 1e-12 : 1e-9;
  return cfg;
}

namespace detail {

struct Delta0Parameters {
  Rational a, b_omega, b_eta, c, d, e;
  NumValue prefactor;
};

inline Delta0Parameters delta0_parameters(const FibrationParams& fp, long long m, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n, m);
  const Rational shift = beta_ - alpha + mu;
  require(shift > 0, ErrorKind::precondition, "two_period_delta0: requires beta - alpha + mu > 0");
  const NumValue pref = beta(1 - alpha, beta_) / NumValue(to_double(shift * fp.l()));
  return {1 - alpha, beta_, beta_ - 1, shift, 1 - alpha + beta_, shift + 1, pref};
}

}  // namespace detail

/// Δ₀ periods: B(1−α,β)/(l(β−α+μ))·₃F₂(1−α, β or β−1, β−α+μ; 1−α+β, β−α+μ+1; 1).
inline TwoPeriods two_period_delta0(const FibrationParams& fp, long long m, long long n,
                                    const SeriesConfig& cfg = regulator_series_config()) {
  const auto q = detail::delta0_parameters(fp, m, n);
  auto series = [&](const Rational& b) { return pfq(PFQParams{{q.a, b, q.c}, {q.d, q.e}}, 1.0, cfg); };
  return {q.prefactor * series(q.b_omega), q.prefactor * series(q.b_eta)};
}

/// The same values with the ₃F₂ evaluated through its Euler-type integral of ₂F₁.
inline TwoPeriods two_period_delta0_integral(const FibrationParams& fp, long long m, long long n,
                                             const QuadConfig& qcfg = {1e-11, 16, 512}) {
  const auto q = detail::delta0_parameters(fp, m, n);
  auto integral = [&](const Rational& b) { return pfq_integral_3f2(q.a, b, q.c, q.d, q.e, 1.0, qcfg); };
  return {q.prefactor * integral(q.b_omega), q.prefactor * integral(q.b_eta)};
}

/// Π_i Γ({hi/lp})^{ε(i)}.
inline NumValue per_gamma_product(const FibrationParams& fp, long long h) {
  fp.require_h(h);
  std::vector<Rational> upper, lower;
  for (long long i = 0; i < fp.lp(); ++i) {
    const int e = eps(fp, i);
    const Rational x = rat(mod_floor(h * i, fp.lp()), fp.lp());
    for (int r = 0; r < std::abs(e); ++r) (e > 0 ? upper : lower).push_back(x);
  }
  return gamma_ratio(std::span<const Rational>(upper), std::span<const Rational>(lower));
}

struct CharData {
  long long m;
  long long n;
  FracParams frac;  // μ = {m/l}
};

inline CharData char_data(const FibrationParams& fp, long long h) {
  fp.require_h(h);
  const long long m = mod_floor(h, fp.l());
  const long long n = mod_floor(h, fp.p());
  return {m, n, frac_params(fp, n, m)};
}

/// B(β,μ)·B(1−β,β−α+μ) as a Γ-quotient, valid for β−α+μ outside (0,1).
inline NumValue per_bb_product(const FibrationParams& fp, long long h) {
  const auto [alpha, beta_, gamma, mu] = char_data(fp, h).frac;
  const Rational x = beta_ - alpha + mu;
  return gamma_ratio({beta_, mu, 1 - beta_, x}, {beta_ + mu, 1 - alpha + mu});
}

/// per_gamma/per_bb predicted by reducing every Γ argument of per_bb to its fractional part.
inline Rational predicted_shift(const FibrationParams& fp, long long h) {
  const auto [alpha, beta_, gamma, mu] = char_data(fp, h).frac;
  return gamma_shift_factor(beta_ + mu) * gamma_shift_factor(1 - alpha + mu) / gamma_shift_factor(beta_ - alpha + mu);
}

/// per_gamma(h)·per_gamma(−h) = π^{Σε}·Π_i sin(π{hi/lp})^{−ε(i)}; returns the ratio of the two sides.
inline NumValue gamma_duality_ratio(const FibrationParams& fp, long long h) {
  const NumValue product = per_gamma_product(fp, h) * per_gamma_product(fp, -h);
  double log_rhs = 0.0;
  for (long long i = 0; i < fp.lp(); ++i) {
    const int e = eps(fp, i);
    if (e == 0) continue;
    log_rhs += e * (std::log(kPi) - std::log(sinpi(rat(mod_floor(h * i, fp.lp()), fp.lp()))));
  }
  return product / NumValue(std::exp(log_rhs), 16.0 * kEps * std::exp(log_rhs));
}

struct GrossDeligneRow {
  long long h = 0;
  long long m = 0;
  long long n = 0;
  int position = 0;  // from ε
  int side = 0;      // from the index sets
  NumValue per_gamma;
  NumValue per_bb;
  NumValue ratio;
  Rational predicted;
  int root_of_unity_sign = 0;  // ratio/predicted, ±1 when found
  double deviation = 0.0;      // |ratio/predicted − sign|
  bool hodge_ok = false;
  bool period_ok = false;
};

inline std::vector<GrossDeligneRow> gross_deligne_check(const FibrationParams& fp, double tol = 1e-9) {
  std::vector<GrossDeligneRow> rows;
  for (const long long h : char_indices(fp)) {
    GrossDeligneRow r;
    r.h = h;
    const CharData cd = char_data(fp, h);
    r.m = cd.m;
    r.n = cd.n;
    r.position = hodge_position(fp, h);
    r.side = hodge_side(fp, h);
    r.per_gamma = per_gamma_product(fp, h);
    r.per_bb = per_bb_product(fp, h);
    r.ratio = r.per_gamma / r.per_bb;
    r.predicted = predicted_shift(fp, h);
    const double normalized = r.ratio.re() / to_double(r.predicted);
    r.root_of_unity_sign = normalized >= 0 ? 1 : -1;
    r.deviation = std::abs(normalized - r.root_of_unity_sign) + std::abs(r.ratio.im());
    r.hodge_ok = r.position == r.side;
    r.period_ok = r.deviation <= tol;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cmreg
