#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cmreg/connection/poly.hpp"
#include "cmreg/error.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/rational.hpp"

namespace cmreg {

enum class Chart { t, s };
enum class SingularPoint { zero, infinity, zeta };

inline std::string to_string(SingularPoint pt) {
  switch (pt) {
    case SingularPoint::zero: return "0";
    case SingularPoint::infinity: return "infinity";
    case SingularPoint::zeta: return "zeta";
  }
  return "?";
}

inline constexpr std::array<SingularPoint, 3> kSingularPoints = {SingularPoint::zero, SingularPoint::zeta,
                                                                  SingularPoint::infinity};

using Mat2 = std::array<std::array<RatFunc, 2>, 2>;
using RatMat2 = std::array<std::array<Rational, 2>, 2>;

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

inline Mat2 operator+(const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][j] + y[i][j];
  return r;
}

inline Mat2 scaled(const Mat2& x, const RatFunc& f) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = f * x[i][j];
  return r;
}

inline RatFunc det(const Mat2& x) { return x[0][0] * x[1][1] - x[0][1] * x[1][0]; }

inline Mat2 inverse(const Mat2& x) {
  const RatFunc d = det(x);
  require(!d.is_zero(), ErrorKind::invalid_argument, "singular gauge matrix");
  const Mat2 adj{{{x[1][1], -x[0][1]}, {-x[1][0], x[0][0]}}};
  return scaled(adj, RatFunc(1) / d);
}

inline Mat2 derivative(const Mat2& x) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][j].derivative();
  return r;
}

inline Mat2 diag(const RatFunc& d0, const RatFunc& d1) { return {{{d0, RatFunc()}, {RatFunc(), d1}}}; }

/// Entrywise f(1/x): moves a matrix of functions between the t and s = 1/t charts.
inline Mat2 at_reciprocal(const Mat2& x) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][j].at_reciprocal();
  return r;
}

inline std::string to_string(const Mat2& x, std::string_view var) {
  return "[[" + x[0][0].to_string(var) + ", " + x[0][1].to_string(var) + "], [" + x[1][0].to_string(var) + ", " +
         x[1][1].to_string(var) + "]]";
}

inline std::string to_string(const RatMat2& x) {
  return "[[" + to_pretty(x[0][0]) + ", " + to_pretty(x[0][1]) + "], [" + to_pretty(x[1][0]) + ", " +
         to_pretty(x[1][1]) + "]]";
}

/// Connection matrix acting on row vectors (ω_n, η_n): ∇(e) = e·A·(dx/x) in log form.
struct ConnMat {
  Mat2 entries;
  Chart chart = Chart::t;
  bool log_form = true;

  [[nodiscard]] std::string_view variable() const { return chart == Chart::t ? "t" : "s"; }
  [[nodiscard]] std::string to_string() const { return cmreg::to_string(entries, variable()); }
};

/// Change of frame e' = e·P; entries are rationals times integer powers of the chart variable.
class GaugeMat {
 public:
  explicit GaugeMat(Mat2 entries, Chart chart = Chart::t) : entries_(std::move(entries)), chart_(chart) {
    const RatFunc d = det(entries_);
    const bool monomial = !d.is_zero() && d.num().coeffs().size() - d.num().valuation() == 1 &&
                          d.den().coeffs().size() - d.den().valuation() == 1;
    require(monomial, ErrorKind::invalid_argument, "gauge matrix determinant must be a nonzero monomial");
  }

  [[nodiscard]] const Mat2& entries() const { return entries_; }
  [[nodiscard]] Chart chart() const { return chart_; }

  [[nodiscard]] GaugeMat in_chart(Chart target) const {
    return target == chart_ ? *this : GaugeMat(at_reciprocal(entries_), target);
  }

 private:
  Mat2 entries_;
  Chart chart_;
};

/// Connection of the base family in (ω_n, η_n): diag(1−β, 1−α)·[[−1,−1],[1/(1−t),1]] (dt/t).
inline ConnMat gm_matrix_base(const Rational& alpha, const Rational& beta) {
  require(alpha > 0 && alpha < 1 && beta > 0 && beta < 1, ErrorKind::invalid_argument,
          "gm_matrix_base: alpha and beta must lie in (0,1)");
  const RatFunc one_minus_t(Poly::linear(1, -1));
  const Mat2 shape{{{RatFunc(-1), RatFunc(-1)}, {RatFunc(1) / one_minus_t, RatFunc(1)}}};
  return {diag(1 - beta, 1 - alpha) * shape, Chart::t, true};
}

/// The same system pulled back by t ↦ t^l, in the requested chart.
inline ConnMat gm_matrix(const FibrationParams& fp, long long n, Chart chart) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const auto l = static_cast<std::size_t>(fp.l());
  const Poly xl = Poly::monomial(1, l);
  const RatFunc one_minus_xl(Poly(1) - xl);
  const Mat2 d = diag(1 - beta, 1 - alpha);
  const Mat2 shape = chart == Chart::t
                         ? Mat2{{{RatFunc(-1), RatFunc(-1)}, {RatFunc(1) / one_minus_xl, RatFunc(1)}}}
                         : Mat2{{{RatFunc(1), RatFunc(1)}, {RatFunc(xl) / one_minus_xl, RatFunc(-1)}}};
  return {scaled(d * shape, RatFunc(fp.l())), chart, true};
}

/// Rewrites a log-form matrix in the other chart: dt/t = −ds/s.
inline ConnMat change_chart(const ConnMat& a) {
  require(a.log_form, ErrorKind::invalid_argument, "change_chart: expects a log-form matrix");
  return {scaled(at_reciprocal(a.entries), RatFunc(-1)), a.chart == Chart::t ? Chart::s : Chart::t, true};
}

/// A_P = P⁻¹AP + x·P⁻¹dP/dx for a log-form matrix in chart variable x.
inline ConnMat gauge_transform(const ConnMat& a, const GaugeMat& gauge) {
  require(a.log_form, ErrorKind::invalid_argument, "gauge_transform: expects a log-form matrix");
  const GaugeMat local = gauge.in_chart(a.chart);
  const Mat2& p = local.entries();
  const Mat2 p_inv = inverse(p);
  const RatFunc x(Poly::x());
  return {p_inv * a.entries * p + scaled(p_inv * derivative(p), x), a.chart, true};
}

/// True if every denominator divides x^k·(1 − x^l)^j.
inline bool poles_within_divisor(const ConnMat& a, long long l) {
  const Poly roots_of_unity = Poly::monomial(1, static_cast<std::size_t>(l)) - Poly(1);
  for (const auto& row : a.entries)
    for (const auto& e : row) {
      Poly rest = divmod(e.den(), Poly::monomial(1, e.den().valuation())).first;
      while (rest.degree() > 0) {
        const Poly g = gcd(rest, roots_of_unity);
        if (g.degree() <= 0) return false;
        rest = divmod(rest, g).first;
      }
    }
  return true;
}

/// Local frame of the canonical extension, written in the t variable.
inline GaugeMat canonical_basis_matrix(const FibrationParams& fp, long long n, SingularPoint point) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const long long l = fp.l();
  auto t_pow = [](long long k) { return RatFunc::monomial(1, k); };
  switch (point) {
    case SingularPoint::zeta:
      return GaugeMat(diag(1, 1));
    case SingularPoint::zero: {
      if (alpha == beta) return GaugeMat(diag(1, 1));
      const Mat2 mix{{{RatFunc(1), RatFunc(1 - beta)}, {RatFunc(-1), RatFunc(alpha - 1)}}};
      return GaugeMat(mix * diag(1, t_pow(ceil_l(alpha - beta, l))));
    }
    case SingularPoint::infinity: {
      const long long fa = floor_l(alpha, l);
      if (alpha + beta == 1) return GaugeMat(diag(t_pow(fa), t_pow(fa - l)));
      const Mat2 mix{{{RatFunc(1 - alpha - beta), RatFunc()}, {RatFunc(1 - alpha), RatFunc(1)}}};
      return GaugeMat(diag(1, t_pow(-l)) * mix * diag(t_pow(floor_l(1 - beta, l)), t_pow(fa)));
    }
  }
  throw Error(ErrorKind::internal, "unknown singular point");
}

/// The connection in the canonical local frame, in the chart where the point is at the origin
/// (ζ is handled at ζ = 1 in the t chart).
inline ConnMat gauged_connection(const FibrationParams& fp, long long n, SingularPoint point) {
  const ConnMat a = gm_matrix(fp, n, point == SingularPoint::infinity ? Chart::s : Chart::t);
  return gauge_transform(a, canonical_basis_matrix(fp, n, point));
}

/// Residue of the 1-form A·dx/x at x = 0, or at x = 1 when `at_one` is set.
inline RatMat2 residue_of(const ConnMat& a, bool at_one) {
  RatMat2 r;
  const RatFunc factor = at_one ? RatFunc(Poly::linear(-1, 1), Poly::x()) : RatFunc(1);
  const Rational where = at_one ? Rational(1) : Rational(0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const RatFunc e = factor * a.entries[i][j];
      require(e.regular_at(where), ErrorKind::pole, "residue: pole worse than logarithmic");
      r[i][j] = e.evaluate(where);
    }
  return r;
}

inline RatMat2 residue_matrix(const FibrationParams& fp, long long n, SingularPoint point) {
  return residue_of(gauged_connection(fp, n, point), point == SingularPoint::zeta);
}

/// Residue at ∞ obtained by gauging in the t chart first and then moving to s.
inline RatMat2 residue_at_infinity_via_t(const FibrationParams& fp, long long n) {
  const ConnMat gauged = gauge_transform(gm_matrix(fp, n, Chart::t), canonical_basis_matrix(fp, n, SingularPoint::infinity));
  return residue_of(change_chart(gauged), false);
}

/// Closed-form residue tables. At ∞ with α+β=1 the lower-left entry is +(1−α)l.
inline RatMat2 residue_table(const FibrationParams& fp, long long n, SingularPoint point) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const long long l = fp.l();
  const Rational zero(0);
  switch (point) {
    case SingularPoint::zeta:
      return {{{zero, zero}, {alpha - 1, zero}}};
    case SingularPoint::zero: {
      if (alpha == beta) {
        const Rational v = (1 - alpha) * l;
        return {{{-v, -v}, {v, v}}};
      }
      return {{{zero, zero}, {zero, frac((beta - alpha) * l)}}};
    }
    case SingularPoint::infinity: {
      const Rational fa = frac(alpha * l);
      if (alpha + beta == 1) return {{{fa, zero}, {(1 - alpha) * l, fa}}};
      return {{{frac((1 - beta) * l), zero}, {zero, fa}}};
    }
  }
  throw Error(ErrorKind::internal, "unknown singular point");
}

/// Eigenvalues of a 2×2 rational matrix when the characteristic polynomial splits over ℚ.
inline std::optional<std::array<Rational, 2>> rational_spectrum(const RatMat2& r) {
  const Rational tr = r[0][0] + r[1][1];
  const Rational dt = r[0][0] * r[1][1] - r[0][1] * r[1][0];
  const Rational disc = tr * tr - 4 * dt;
  if (disc < 0) return std::nullopt;
  const BigInt num_root = boost::multiprecision::sqrt(numerator(disc));
  const BigInt den_root = boost::multiprecision::sqrt(denominator(disc));
  if (num_root * num_root != numerator(disc) || den_root * den_root != denominator(disc)) return std::nullopt;
  const Rational root(num_root, den_root);
  return std::array<Rational, 2>{(tr - root) / 2, (tr + root) / 2};
}

struct SpectrumRow {
  SingularPoint point;
  RatMat2 residue;
  std::optional<std::array<Rational, 2>> spectrum;
  bool in_unit_interval = false;
};

inline std::vector<SpectrumRow> residue_spectrum_check(const FibrationParams& fp, long long n) {
  std::vector<SpectrumRow> rows;
  for (const SingularPoint pt : kSingularPoints) {
    SpectrumRow row{pt, residue_matrix(fp, n, pt), std::nullopt, false};
    row.spectrum = rational_spectrum(row.residue);
    row.in_unit_interval = row.spectrum && (*row.spectrum)[0] >= 0 && (*row.spectrum)[1] < 1;
    rows.push_back(row);
  }
  return rows;
}

/// Image of the residue at a point: its dimension, codimension in the rank-2 fiber, and a spanning
/// vector written in (ω_n, η_n) when the image is a line.
struct NSubspace {
  int dim = 0;
  int codim = 0;
  std::optional<std::array<RatFunc, 2>> span;
};

inline NSubspace n_subspace(const FibrationParams& fp, long long n, SingularPoint point) {
  const RatMat2 res = residue_matrix(fp, n, point);
  const Rational dt = res[0][0] * res[1][1] - res[0][1] * res[1][0];
  const bool zero_matrix = res[0][0] == 0 && res[0][1] == 0 && res[1][0] == 0 && res[1][1] == 0;
  NSubspace out;
  out.dim = zero_matrix ? 0 : (dt != 0 ? 2 : 1);
  out.codim = 2 - out.dim;
  if (out.dim != 1) return out;
  // A nonzero column of the residue spans its image; map it through the frame P.
  const int col = (res[0][0] != 0 || res[1][0] != 0) ? 0 : 1;
  const GaugeMat frame = canonical_basis_matrix(fp, n, point);
  const Mat2& p = frame.entries();
  std::array<RatFunc, 2> v;
  for (int i = 0; i < 2; ++i) v[i] = p[i][0] * RatFunc(res[0][col]) + p[i][1] * RatFunc(res[1][col]);
  // Normalise so that the η coefficient has leading coefficient −(1−α) when both are present, else 1.
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const RatFunc& eta = v[1];
  const Rational lead = eta.is_zero() ? v[0].num().leading() : eta.num().leading();
  const Rational target = (v[0].is_zero() || eta.is_zero()) ? Rational(1) : alpha - 1;
  for (auto& e : v) e = e * RatFunc(target / lead);
  out.span = v;
  return out;
}

}  // namespace cmreg
