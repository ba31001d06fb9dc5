#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cmreg/connection/poly.hpp"
#include "cmreg/error.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/periods.hpp"
#include "cmreg/rational.hpp"
#include "cmreg/specialfn.hpp"

namespace cmreg {

/// Φ_N over ℚ, from x^N − 1 = Π_{d|N} Φ_d.
inline Poly cyclotomic_poly(long long order) {
  require(order >= 1, ErrorKind::invalid_argument, "cyclotomic_poly: order must be positive");
  Poly p = Poly::monomial(1, static_cast<std::size_t>(order)) - Poly(1);
  for (long long d = 1; d < order; ++d)
    if (order % d == 0) p = divmod(p, cyclotomic_poly(d)).first;
  return p;
}

/// Element of ℚ(ζ_N), stored in the power basis 1, ζ, …, ζ^{φ(N)−1}.
class CycloElem {
 public:
  explicit CycloElem(long long order, const std::vector<Rational>& coeffs = {})
      : order_(order), modulus_(cyclotomic_poly(order)) {
    assign(Poly(coeffs));
  }

  static CycloElem one(long long order) { return CycloElem(order, {Rational(1)}); }
  /// ζ_N^k for any integer k.
  static CycloElem root_power(long long order, long long k) {
    std::vector<Rational> c(static_cast<std::size_t>(mod_floor(k, order)) + 1);
    c.back() = 1;
    return CycloElem(order, c);
  }

  [[nodiscard]] long long order() const { return order_; }
  [[nodiscard]] std::size_t degree() const { return coeffs_.size(); }
  [[nodiscard]] const std::vector<Rational>& coeffs() const { return coeffs_; }

  /// Image under ζ ↦ ζ⁻¹ (complex conjugation in every embedding).
  [[nodiscard]] CycloElem conj() const {
    CycloElem out(order_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (coeffs_[k] != 0) out = out + CycloElem(order_, {coeffs_[k]}) * root_power(order_, -static_cast<long long>(k));
    return out;
  }

  friend CycloElem operator+(const CycloElem& x, const CycloElem& y) {
    check_same(x, y);
    CycloElem out(x.order_);
    out.assign(Poly(x.coeffs_) + Poly(y.coeffs_));
    return out;
  }
  friend CycloElem operator-(const CycloElem& x, const CycloElem& y) {
    check_same(x, y);
    CycloElem out(x.order_);
    out.assign(Poly(x.coeffs_) - Poly(y.coeffs_));
    return out;
  }
  friend CycloElem operator*(const CycloElem& x, const CycloElem& y) {
    check_same(x, y);
    CycloElem out(x.order_);
    out.assign(Poly(x.coeffs_) * Poly(y.coeffs_));
    return out;
  }
  friend bool operator==(const CycloElem& x, const CycloElem& y) {
    return x.order_ == y.order_ && x.coeffs_ == y.coeffs_;
  }

 private:
  static void check_same(const CycloElem& x, const CycloElem& y) {
    require(x.order_ == y.order_, ErrorKind::invalid_argument, "CycloElem: mismatched cyclotomic fields");
  }
  void assign(const Poly& p) {
    const Poly r = divmod(p, modulus_).second;
    coeffs_.assign(static_cast<std::size_t>(modulus_.degree()), Rational(0));
    for (std::size_t k = 0; k < r.coeffs().size(); ++k) coeffs_[k] = r.coeffs()[k];
  }

  long long order_;
  Poly modulus_;
  std::vector<Rational> coeffs_;
};

/// ζ_l = ζ_lp^p and ζ_p = ζ_lp^l inside ℚ(ζ_lp).
inline CycloElem zeta_l(const FibrationParams& fp) { return CycloElem::root_power(fp.lp(), fp.p()); }
inline CycloElem zeta_p(const FibrationParams& fp) { return CycloElem::root_power(fp.lp(), fp.l()); }

/// The exponent h mod lp with h ≡ m (mod l) and h ≡ n (mod p).
inline long long crt_index(const FibrationParams& fp, long long m, long long n) {
  for (long long h = 0; h < fp.lp(); ++h)
    if (mod_floor(h - m, fp.l()) == 0 && mod_floor(h - n, fp.p()) == 0) return h;
  throw Error(ErrorKind::internal, "crt_index: no solution");
}

/// χ_{m,n}(x): ζ_lp ↦ e^{2πih/lp}, so that ζ_l ↦ e^{2πim/l} and ζ_p ↦ e^{2πin/p}.
inline NumValue cyclo_eval(const CycloElem& x, const FibrationParams& fp, long long m, long long n) {
  require(x.order() == fp.lp(), ErrorKind::invalid_argument, "cyclo_eval: element is not in Q(zeta_lp)");
  const long long h = crt_index(fp, m, n);
  Complex acc(0.0);
  double scale = 0.0;
  for (std::size_t k = 0; k < x.degree(); ++k) {
    const double c = to_double(x.coeffs()[k]);
    acc += c * std::polar(1.0, 2.0 * kPi * static_cast<double>(h * static_cast<long long>(k) % fp.lp()) /
                                   static_cast<double>(fp.lp()));
    scale += std::abs(c);
  }
  return {acc, 4.0 * kEps * (scale + 1.0) * static_cast<double>(x.degree() + 1)};
}

namespace detail {

inline void require_regulator_index(const FibrationParams& fp, long long m, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n, m);
  const auto i1 = index_sets(fp, n).i1;
  require(std::find(i1.begin(), i1.end(), m) != i1.end(), ErrorKind::precondition,
          "m = " + std::to_string(m) + " is not in I1(n) for n = " + std::to_string(n));
  require(mu > alpha - beta_, ErrorKind::precondition, "requires mu > alpha - beta");
}

}  // namespace detail

/// R_{m,n} = B(1−α,β)/(l(β−α+μ))·₃F₂(1−α, β, β−α+μ; 1−α+β, β−α+μ+1; 1).
inline NumValue regulator_value(const FibrationParams& fp, long long m, long long n,
                                Precision precision = Precision::extended) {
  detail::require_regulator_index(fp, m, n);
  return two_period_delta0(fp, m, n, regulator_series_config(precision)).omega;
}

/// R_{m,n} with the ₃F₂ from its Euler integral; an independent route to regulator_value.
inline NumValue regulator_value_integral(const FibrationParams& fp, long long m, long long n) {
  detail::require_regulator_index(fp, m, n);
  return two_period_delta0_integral(fp, m, n).omega;
}

/// Ω_{m,n} = −(ε^{pβ}/l)·B(β,μ)·B(1−β,β−α+μ).
inline NumValue omega_cap(const FibrationParams& fp, long long m, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n, m);
  require(mu > alpha - beta_, ErrorKind::precondition, "omega_cap: requires mu > alpha - beta");
  return two_period_delta1(fp, m, n).omega;
}

/// The window min(⌊αl⌋, ⌊(1−β)l⌋) < m ≤ max(⌊αl⌋, ⌊(1−β)l⌋).
inline std::vector<long long> good_m_window(const FibrationParams& fp, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n);
  const long long fa = floor_l(alpha, fp.l());
  const long long fb = floor_l(1 - beta_, fp.l());
  std::vector<long long> out;
  for (long long m = std::min(fa, fb) + 1; m <= std::max(fa, fb); ++m) out.push_back(m);
  return out;
}

inline bool is_good_m(const FibrationParams& fp, long long m, long long n) {
  const auto w = good_m_window(fp, n);
  return std::find(w.begin(), w.end(), m) != w.end();
}

/// The partner index (m', n') = (l − m, p − n).
inline std::pair<long long, long long> dual_index(const FibrationParams& fp, long long m, long long n) {
  return {fp.l() - m, fp.p() - n};
}

/// Im χ_{m,n}(x)·(R_{m,n}/Ω_{m,n} − R_{m',n'}/Ω_{m',n'}).
inline NumValue rho_R_pairing(const FibrationParams& fp, long long m, long long n, const CycloElem& x,
                              Precision precision = Precision::extended) {
  require(is_good_m(fp, m, n), ErrorKind::precondition,
          "rho_R_pairing: m = " + std::to_string(m) + " is outside the good-m window for n = " + std::to_string(n));
  const auto [md, nd] = dual_index(fp, m, n);
  const NumValue ratio = regulator_value(fp, m, n, precision) / omega_cap(fp, m, n);
  const NumValue dual_ratio = regulator_value(fp, md, nd, precision) / omega_cap(fp, md, nd);
  const NumValue chi = cyclo_eval(x, fp, m, n);
  return NumValue(chi.im(), chi.err) * (ratio - dual_ratio);
}

struct NonvanishingRow {
  long long n = 0;
  std::optional<long long> m;  // chosen good m, if the window is non-empty
  NumValue omega, omega_dual, reg, reg_dual, pairing;
  bool omega_sign_ok = false;  // Ω·Ω' < 0
  bool reg_positive = false;   // R > 0 and R' > 0
  bool nonzero = false;        // |pairing| > 10·err
  [[nodiscard]] bool pass() const { return m && omega_sign_ok && reg_positive && nonzero; }
};

/// For each n, the first good m satisfying all checks (or the first good m if none does).
inline std::vector<NonvanishingRow> nonvanishing_check(const FibrationParams& fp,
                                                       Precision precision = Precision::extended) {
  require(fp.p() < fp.l(), ErrorKind::precondition, "nonvanishing_check: the theorem assumes p < l");
  require(fp.a() + fp.b() != fp.p(), ErrorKind::precondition, "nonvanishing_check: the theorem assumes a + b != p");
  const CycloElem x = CycloElem::root_power(fp.lp(), 1);
  std::vector<NonvanishingRow> rows;
  for (long long n = 1; n < fp.p(); ++n) {
    std::optional<NonvanishingRow> first;
    for (long long m : good_m_window(fp, n)) {
      NonvanishingRow row;
      row.n = n;
      row.m = m;
      const auto [md, nd] = dual_index(fp, m, n);
      row.omega = omega_cap(fp, m, n);
      row.omega_dual = omega_cap(fp, md, nd);
      row.reg = regulator_value(fp, m, n, precision);
      row.reg_dual = regulator_value(fp, md, nd, precision);
      row.pairing = rho_R_pairing(fp, m, n, x, precision);
      row.omega_sign_ok = (row.omega * row.omega_dual).re() < 0.0 && std::abs(row.omega.im()) <= row.omega.err &&
                          std::abs(row.omega_dual.im()) <= row.omega_dual.err;
      row.reg_positive = row.reg.re() > row.reg.err && row.reg_dual.re() > row.reg_dual.err;
      row.nonzero = row.pairing.abs() > 10.0 * row.pairing.err;
      if (!first) first = row;
      if (row.pass()) {
        first = row;
        break;
      }
    }
    if (!first) {
      first = NonvanishingRow{};
      first->n = n;
    }
    rows.push_back(*first);
  }
  return rows;
}

struct RatioEntry {
  long long m = 0;
  long long n = 0;
  NumValue r;  // R_{m,n}/Ω_{m,n}
  std::optional<double> conjugation_defect;  // |r_{l−m,p−n} − conj(r_{m,n})| when the partner is defined
};

struct CriterionReport {
  std::vector<RatioEntry> entries;
  std::size_t unknowns = 0;   // φ(lp) coordinates of x
  std::size_t equations = 0;  // two real equations per (m,n)
  double residual = 0.0;      // ‖Ac − r‖
  double relative_residual = 0.0;
  /// Equations beyond the number of unknowns; when ≤ 0 a small residual carries no information.
  [[nodiscard]] long long surplus() const {
    return static_cast<long long>(equations) - static_cast<long long>(unknowns);
  }
};

/// Fits r_{m,n} = χ_{m,n}(x) for a single x ∈ ℚ(ζ_lp) by real least squares and reports the residual.
inline CriterionReport criterion_ratios(const FibrationParams& fp, Precision precision = Precision::extended) {
  require(fp.a() + fp.b() == fp.p(), ErrorKind::precondition, "criterion_ratios: requires a + b = p");
  CriterionReport report;
  for (long long n = 1; n < fp.p(); ++n) {
    const auto [alpha, beta_, gamma, mu] = frac_params(fp, n);
    for (long long m : index_sets(fp, n).i1) {
      if (!(rat(m, fp.l()) > alpha - beta_)) continue;
      report.entries.push_back({m, n, regulator_value(fp, m, n, precision) / omega_cap(fp, m, n), std::nullopt});
    }
  }
  for (auto& e : report.entries) {
    const auto [md, nd] = dual_index(fp, e.m, e.n);
    const auto dual = frac_params(fp, nd, md);
    if (!(dual.mu > dual.alpha - dual.beta)) continue;
    const NumValue r_dual = two_period_delta0(fp, md, nd, regulator_series_config(precision)).omega / omega_cap(fp, md, nd);
    e.conjugation_defect = std::abs(r_dual.value - std::conj(e.r.value));
  }
  const auto dim = static_cast<Eigen::Index>(cyclotomic_poly(fp.lp()).degree());
  const auto rows = static_cast<Eigen::Index>(2 * report.entries.size());
  Eigen::MatrixXd a(rows, dim);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(report.entries.size()); ++i) {
    const auto& e = report.entries[static_cast<std::size_t>(i)];
    const long long h = crt_index(fp, e.m, e.n);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Complex z = std::polar(1.0, 2.0 * kPi * static_cast<double>((h * k) % fp.lp()) / static_cast<double>(fp.lp()));
      a(2 * i, k) = z.real();
      a(2 * i + 1, k) = z.imag();
    }
    rhs(2 * i) = e.r.re();
    rhs(2 * i + 1) = e.r.im();
  }
  report.unknowns = static_cast<std::size_t>(dim);
  report.equations = static_cast<std::size_t>(rows);
  if (rows > 0) {
    const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(rhs);
    report.residual = (a * c - rhs).norm();
    report.relative_residual = report.residual / std::max(rhs.norm(), kEps);
  }
  return report;
}

/// Best rational approximation p/q with q ≤ bound from the continued-fraction convergents.
struct RationalProbe {
  long long num = 0;
  long long den = 1;
  double quality = 0.0;  // |V − p/q|·q²
};

inline RationalProbe continued_fraction_probe(double v, long long bound = 1'000'000) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  RationalProbe best;
  for (int step = 0; step < 64; ++step) {
    const double a = std::floor(x);
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > bound) break;
    best.num = h2;
    best.den = k2;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    const double rest = x - a;
    if (rest < 1e-300) break;
    x = 1.0 / rest;
  }
  const double q = static_cast<double>(best.den);
  best.quality = std::abs(v - static_cast<double>(best.num) / q) * q * q;
  return best;
}

struct LegendreReport {
  NumValue value;             // √3(Γ(5/6)/Γ(1/3))²·₃F₂(1/2,1/2,1/3;1,4/3;1)
  NumValue via_regulator;     // (R_{1,1}/Ω_{1,1})/(i√3) at (p,l,a,b) = (2,3,1,1)
  double path_difference = 0.0;
  double precision_difference = 0.0;  // |V(extended) − V(binary64)|
  RationalProbe probe;
};

namespace detail {

inline NumValue legendre_direct(Precision precision) {
  const NumValue g = gamma_ratio({rat(5, 6)}, {rat(1, 3)});
  const NumValue f = pfq(PFQParams{{rat(1, 2), rat(1, 2), rat(1, 3)}, {Rational(1), rat(4, 3)}}, 1.0,
                         regulator_series_config(precision));
  return NumValue(std::sqrt(3.0)) * g * g * f;
}

}  // namespace detail

/// The Legendre-family quantity; R_{1,1}/Ω_{1,1} = i√3·V exactly, which gives the second path.
inline LegendreReport legendre_probe() {
  LegendreReport out;
  out.value = detail::legendre_direct(Precision::extended);
  const FibrationParams fp(2, 3, 1, 1);
  const NumValue ratio = regulator_value(fp, 1, 1) / omega_cap(fp, 1, 1);
  out.via_regulator = ratio / NumValue(Complex(0.0, std::sqrt(3.0)));
  out.path_difference = std::abs(out.value.value - out.via_regulator.value);
  out.precision_difference = std::abs(out.value.value - detail::legendre_direct(Precision::binary64).value);
  out.probe = continued_fraction_probe(out.value.re());
  return out;
}

}  // namespace cmreg
