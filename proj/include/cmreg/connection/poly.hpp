#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmreg/error.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/rational.hpp"

namespace cmreg {

/// Dense univariate polynomial over ℚ, coefficients in increasing degree, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(const Rational& constant) : c_{constant} { trim(); }  // NOLINT(google-explicit-constructor)
  Poly(long long constant) : Poly(Rational(constant)) {}     // NOLINT(google-explicit-constructor)

  static Poly monomial(const Rational& coeff, std::size_t degree) {
    std::vector<Rational> c(degree + 1);
    c[degree] = coeff;
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(1, 1); }
  /// c0 + c1·x.
  static Poly linear(const Rational& c0, const Rational& c1) { return Poly(std::vector<Rational>{c0, c1}); }

  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  /// −1 for the zero polynomial.
  [[nodiscard]] long long degree() const { return static_cast<long long>(c_.size()) - 1; }
  [[nodiscard]] Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  [[nodiscard]] const Rational& leading() const { return c_.back(); }
  [[nodiscard]] const std::vector<Rational>& coeffs() const { return c_; }

  [[nodiscard]] Poly derivative() const {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long long>(k));
    return Poly(std::move(d));
  }

  [[nodiscard]] Rational evaluate(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] Complex evaluate(Complex z) const {
    Complex acc(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + to_double(*it);
    return acc;
  }

  /// x^d·p(1/x) for d ≥ degree.
  [[nodiscard]] Poly reversed(std::size_t d) const {
    require(static_cast<long long>(d) >= degree(), ErrorKind::internal, "Poly::reversed: degree too small");
    std::vector<Rational> r(d + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) r[d - k] = c_[k];
    return Poly(std::move(r));
  }

  [[nodiscard]] Poly monic() const {
    require(!is_zero(), ErrorKind::internal, "Poly::monic: zero polynomial");
    std::vector<Rational> m(c_);
    for (auto& v : m) v /= c_.back();
    return Poly(std::move(m));
  }

  /// Multiplicity of x as a factor.
  [[nodiscard]] std::size_t valuation() const {
    std::size_t v = 0;
    while (v < c_.size() && c_[v] == 0) ++v;
    return v;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<Rational> c(a.c_);
    for (auto& v : c) v = -v;
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly&, const Poly&) = default;

  /// Euclidean division: a = q·b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    require(!b.is_zero(), ErrorKind::invalid_argument, "polynomial division by zero");
    std::vector<Rational> rem(a.c_);
    const std::size_t db = b.c_.size() - 1;
    if (rem.size() <= db) return {Poly(), a};
    std::vector<Rational> q(rem.size() - db);
    for (std::size_t k = rem.size(); k-- > db;) {
      const Rational f = rem[k] / b.c_.back();
      q[k - db] = f;
      for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
    }
    rem.resize(db);
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }

  /// Monic gcd; gcd(0, 0) = 0.
  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
  }

  [[nodiscard]] std::string to_string(std::string_view var = "t") const;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

inline std::string Poly::to_string(std::string_view var) const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rational& v = c_[k];
    if (v == 0) continue;
    const bool negative = v < 0;
    const Rational mag = negative ? Rational(-v) : v;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const bool unit = mag == 1 && k > 0;
    if (!unit) out += to_pretty(mag);
    if (k > 0) {
      if (!unit) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

/// Reduced quotient of polynomials with monic denominator.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(Poly num) : num_(std::move(num)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const Rational& c) : RatFunc(Poly(c)) {}      // NOLINT(google-explicit-constructor)
  RatFunc(long long c) : RatFunc(Poly(c)) {}            // NOLINT(google-explicit-constructor)
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  /// c·x^k for any integer k.
  static RatFunc monomial(const Rational& c, long long k) {
    if (k >= 0) return RatFunc(Poly::monomial(c, static_cast<std::size_t>(k)));
    return RatFunc(Poly(c), Poly::monomial(1, static_cast<std::size_t>(-k)));
  }

  [[nodiscard]] const Poly& num() const { return num_; }
  [[nodiscard]] const Poly& den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }

  [[nodiscard]] RatFunc derivative() const {
    return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
  }

  /// Value at x; the caller must ensure x is not a pole.
  [[nodiscard]] Rational evaluate(const Rational& x) const {
    const Rational d = den_.evaluate(x);
    require(d != 0, ErrorKind::pole, "rational function has a pole at " + cmreg::to_string(x));
    return num_.evaluate(x) / d;
  }
  [[nodiscard]] bool regular_at(const Rational& x) const { return den_.evaluate(x) != 0; }

  /// f(1/x).
  [[nodiscard]] RatFunc at_reciprocal() const {
    const auto dn = static_cast<std::size_t>(std::max(0LL, num_.degree()));
    const auto dd = static_cast<std::size_t>(den_.degree());
    Poly top = num_.is_zero() ? Poly() : num_.reversed(dn);
    Poly bottom = den_.reversed(dd);
    if (dd >= dn) {
      top = top * Poly::monomial(1, dd - dn);
    } else {
      bottom = bottom * Poly::monomial(1, dn - dd);
    }
    return {top, bottom};
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RatFunc operator-(const RatFunc& a) { return {-a.num_, a.den_}; }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    require(!b.is_zero(), ErrorKind::invalid_argument, "rational function division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  [[nodiscard]] std::string to_string(std::string_view var = "t") const {
    const std::string top = num_.to_string(var);
    if (den_ == Poly(1)) return top;
    auto terms = [](const Poly& q) {
      return std::count_if(q.coeffs().begin(), q.coeffs().end(), [](const Rational& v) { return v != 0; });
    };
    const std::string bottom = den_.to_string(var);
    const bool wrap_top = terms(num_) > 1 || top.find('/') != std::string::npos;
    return (wrap_top ? "(" + top + ")" : top) + "/" + (terms(den_) > 1 ? "(" + bottom + ")" : bottom);
  }

 private:
  void normalize() {
    require(!den_.is_zero(), ErrorKind::invalid_argument, "rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    const Poly g = gcd(num_, den_);
    num_ = divmod(num_, g).first;
    den_ = divmod(den_, g).first;
    const Rational lead = den_.leading();
    if (lead != 1) {
      num_ = num_ * Poly(Rational(1) / lead);
      den_ = den_.monic();
    }
  }

  Poly num_;
  Poly den_;
};

}  // namespace cmreg
