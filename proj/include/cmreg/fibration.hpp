#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cmreg/error.hpp"
#include "cmreg/rational.hpp"

namespace cmreg {

inline bool is_prime(long long v) {
  require(v <= 1'000'000, ErrorKind::invalid_argument, "primality check is capped at 10^6");
  if (v < 2) return false;
  for (long long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline long long mod_floor(long long v, long long m) {
  const long long r = v % m;
  return r < 0 ? r + m : r;
}

/// The integers (p, l, a, b) of the surface family; c = p − b.
class FibrationParams {
 public:
  FibrationParams(long long p, long long l, long long a, long long b) : p_(p), l_(l), a_(a), b_(b) {
    require(is_prime(p), ErrorKind::invalid_argument, "p must be prime");
    require(is_prime(l), ErrorKind::invalid_argument, "l must be prime");
    require(p != l, ErrorKind::invalid_argument, "p and l must be distinct");
    require(0 < a && a < p, ErrorKind::invalid_argument, "a must satisfy 0 < a < p");
    require(0 < b && b < p, ErrorKind::invalid_argument, "b must satisfy 0 < b < p");
  }

  [[nodiscard]] long long p() const { return p_; }
  [[nodiscard]] long long l() const { return l_; }
  [[nodiscard]] long long a() const { return a_; }
  [[nodiscard]] long long b() const { return b_; }
  [[nodiscard]] long long c() const { return p_ - b_; }
  [[nodiscard]] long long lp() const { return l_ * p_; }

  void require_n(long long n) const {
    require(n >= 1 && n < p_, ErrorKind::invalid_argument, "n must lie in 1..p-1");
  }
  void require_h(long long h) const {
    require(std::gcd(mod_floor(h, lp()), lp()) == 1, ErrorKind::invalid_argument, "h must be a unit modulo lp");
  }

  [[nodiscard]] std::string label() const {
    return "p=" + std::to_string(p_) + " l=" + std::to_string(l_) + " a=" + std::to_string(a_) +
           " b=" + std::to_string(b_);
  }

  friend bool operator==(const FibrationParams&, const FibrationParams&) = default;

 private:
  long long p_, l_, a_, b_;
};

/// α = {na/p}, β = {nb/p}, γ = 1 − β, μ = m/l (not reduced).
struct FracParams {
  Rational alpha;
  Rational beta;
  Rational gamma;
  Rational mu;
};

inline FracParams frac_params(const FibrationParams& fp, long long n, long long m = 0) {
  fp.require_n(n);
  const Rational alpha = rat(mod_floor(n * fp.a(), fp.p()), fp.p());
  const Rational beta = rat(mod_floor(n * fp.b(), fp.p()), fp.p());
  return {alpha, beta, 1 - beta, rat(m, fp.l())};
}

/// Exponents of the form x^i(1−x)^j(t−x)^k dx / y^n.
struct FormExponents {
  long long i = 0;
  long long j = 0;
  long long k = 0;
};

/// The holomorphic choice i = ⌈(na+1)/p⌉ − 1 (likewise j with b, k with c).
inline FormExponents holomorphic_exponents(const FibrationParams& fp, long long n) {
  fp.require_n(n);
  auto e = [&](long long v) { return ceil_int(rat(n * v + 1, fp.p())) - 1; };
  return {e(fp.a()), e(fp.b()), e(fp.c())};
}

/// The second basis form η_n: one more power of (1 − x).
inline FormExponents eta_exponents(const FibrationParams& fp, long long n) {
  FormExponents e = holomorphic_exponents(fp, n);
  ++e.j;
  return e;
}

/// ⌊x·l⌋ and ⌈x·l⌉ for the floor/ceil bookkeeping of the Hodge tables.
inline long long floor_l(const Rational& x, long long l) { return floor_int(x * l); }
inline long long ceil_l(const Rational& x, long long l) { return ceil_int(x * l); }

/// Multiplicity-counted ε on ℤ/lpℤ.
inline int eps(const FibrationParams& fp, long long i) {
  const long long lp = fp.lp();
  const long long p = fp.p(), l = fp.l(), a = fp.a(), b = fp.b();
  const long long r = mod_floor(i, lp);
  int value = 0;
  for (long long plus : {l * b, p, l * (p - b), l * (b - a) + p})
    if (mod_floor(plus, lp) == r) ++value;
  for (long long minus : {l * b + p, l * (p - a) + p})
    if (mod_floor(minus, lp) == r) --value;
  return value;
}

inline std::vector<int> eps_table(const FibrationParams& fp) {
  std::vector<int> table(static_cast<std::size_t>(fp.lp()));
  for (long long i = 0; i < fp.lp(); ++i) table[static_cast<std::size_t>(i)] = eps(fp, i);
  return table;
}

/// p(h) = Σ ε(i)·{−hi/lp}, required to be an integer in {0,1,2}.
inline int hodge_position(const FibrationParams& fp, long long h) {
  fp.require_h(h);
  const long long lp = fp.lp();
  Rational sum(0);
  for (long long i = 0; i < lp; ++i) {
    const int e = eps(fp, i);
    if (e != 0) sum += Rational(e) * rat(mod_floor(-h * i, lp), lp);
  }
  if (!is_integer(sum) || sum < 0 || sum > 2)
    throw Error(ErrorKind::internal, "hodge_position: epsilon sum " + to_string(sum) + " is not in {0,1,2}");
  return floor_int(sum);
}

struct HodgeDims {
  long long f2 = 0;
  long long gr1 = 0;
  long long gr0 = 0;

  [[nodiscard]] long long total() const { return f2 + gr1 + gr0; }
  friend bool operator==(const HodgeDims&, const HodgeDims&) = default;
};

inline HodgeDims hodge_dims(const FibrationParams& fp, long long n) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const long long l = fp.l();
  const long long fa = floor_l(alpha, l);
  const long long fb = floor_l(1 - beta, l);
  HodgeDims d;
  d.f2 = std::min(fa, fb) - std::max(0LL, floor_l(alpha - beta, l));
  d.gr1 = (fa > fb ? fa - fb : fb - fa) + floor_l(alpha > beta ? alpha - beta : beta - alpha, l);
  d.gr0 = std::min(floor_l(1 - alpha, l), floor_l(beta, l)) - std::max(0LL, floor_l(beta - alpha, l));
  return d;
}

/// Exponents m of the bases {ω_{m,n}} of F² and F¹.
struct IndexSets {
  std::vector<long long> i1;
  std::vector<long long> i2;
};

inline IndexSets index_sets(const FibrationParams& fp, long long n) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const long long l = fp.l();
  const long long fa = floor_l(alpha, l);
  const long long fb = floor_l(1 - beta, l);
  IndexSets s;
  for (long long m = std::max(1LL, ceil_l(alpha - beta, l)); m <= std::min(fa, fb); ++m) s.i2.push_back(m);
  if (alpha < beta)
    for (long long m = -floor_l(beta - alpha, l); m <= -1; ++m) s.i1.push_back(m);
  for (long long m = 1; m <= std::max(fa, fb); ++m) s.i1.push_back(m);
  return s;
}

/// Hodge position read off from the index sets: 2 if m ∈ I²(n) mod l, 1 if m ∈ I¹(n) mod l, else 0.
inline int hodge_side(const FibrationParams& fp, long long h) {
  fp.require_h(h);
  const long long l = fp.l();
  const long long m = mod_floor(h, l);
  const long long n = mod_floor(h, fp.p());
  const IndexSets s = index_sets(fp, n);
  auto hits = [&](const std::vector<long long>& set) {
    return std::any_of(set.begin(), set.end(), [&](long long k) { return mod_floor(k, l) == m; });
  };
  if (hits(s.i2)) return 2;
  return hits(s.i1) ? 1 : 0;
}

/// Units of ℤ/lpℤ in increasing order.
inline std::vector<long long> char_indices(const FibrationParams& fp) {
  std::vector<long long> hs;
  for (long long h = 1; h < fp.lp(); ++h)
    if (std::gcd(h, fp.lp()) == 1) hs.push_back(h);
  return hs;
}

struct CmRankReport {
  bool pass = true;
  long long total = 0;
  std::optional<long long> offending_n;
};

inline CmRankReport cm_rank_check(const FibrationParams& fp) {
  CmRankReport r;
  for (long long n = 1; n < fp.p(); ++n) {
    const long long t = hodge_dims(fp, n).total();
    r.total += t;
    if (t != fp.l() - 1 && !r.offending_n) {
      r.pass = false;
      r.offending_n = n;
    }
  }
  if (r.total != (fp.l() - 1) * (fp.p() - 1)) r.pass = false;
  return r;
}

/// Twist k with Gr⁰ of the canonical extension ≅ O(k).
inline long long gr0_twist(const FibrationParams& fp, long long n) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const long long l = fp.l();
  const bool upper = floor_l(alpha, l) >= floor_l(1 - beta, l);
  if (upper) return alpha <= beta ? -ceil_l(1 - alpha, l) + floor_l(beta - alpha, l) : -ceil_l(1 - alpha, l);
  return alpha <= beta ? floor_l(beta - alpha, l) - ceil_l(beta, l) : -ceil_l(beta, l);
}

/// Exponents (i, j) with F¹ of the canonical extension = O(i)·t^j·ω_n.
struct HodgeLine {
  long long i = 0;
  long long j = 0;
  friend bool operator==(const HodgeLine&, const HodgeLine&) = default;
};

inline HodgeLine f1_hodge_line(const FibrationParams& fp, long long n) {
  const auto [alpha, beta, gamma, mu] = frac_params(fp, n);
  const long long l = fp.l();
  const long long fa = floor_l(alpha, l);
  const long long fb = floor_l(1 - beta, l);
  const long long shift = ceil_l(alpha - beta, l);
  const long long base = fa >= fb ? fb : fa;
  const HodgeLine line = alpha <= beta ? HodgeLine{base, 0} : HodgeLine{base - shift, shift};
  // i = ⌊αl⌋ − ⌈(α−β)l⌉ reaches −1 when p > l (e.g. α=3/5, β=1/5, l=3).
  if (line.i < -1 || line.i >= l) throw Error(ErrorKind::internal, "f1_hodge_line: degree outside [-1, l)");
  return line;
}

/// The sweep of (p, l) pairs with every admissible (a, b).
inline std::vector<FibrationParams> default_sweep() {
  static constexpr std::pair<long long, long long> kPairs[] = {{2, 3}, {2, 5}, {3, 5}, {5, 3}, {3, 7}, {5, 7}};
  std::vector<FibrationParams> cells;
  for (const auto& [p, l] : kPairs)
    for (long long a = 1; a < p; ++a)
      for (long long b = 1; b < p; ++b) cells.emplace_back(p, l, a, b);
  return cells;
}

}  // namespace cmreg
