#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cmreg/error.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/rational.hpp"

namespace cmreg {

/// Working precision for series evaluation. `extended` uses a 113-bit software float.
enum class Precision { binary64, extended };

using ExtendedReal = boost::multiprecision::cpp_bin_float_quad;

struct SeriesConfig {
  double tol = 1e-13;        // direct summation, relative to max(1, |value|)
  double accel_tol = 1e-9;   // accepted error of the accelerated z = 1 evaluation
  std::size_t max_terms = 1'000'000;
  int levin_max_order = 20;
  Precision precision = Precision::binary64;
};

/// Parameters of pFq with exact rational entries.
struct PFQParams {
  std::vector<Rational> upper;
  std::vector<Rational> lower;

  /// s = Σ lower − Σ upper.
  [[nodiscard]] Rational margin() const {
    Rational s(0);
    for (const auto& b : lower) s += b;
    for (const auto& a : upper) s -= a;
    return s;
  }

  void validate() const {
    for (const auto& b : lower)
      require(!is_nonpositive_integer(b), ErrorKind::invalid_argument,
              "pfq: lower parameter " + to_string(b) + " is a nonpositive integer");
  }

  [[nodiscard]] bool terminating() const {
    return std::any_of(upper.begin(), upper.end(), [](const Rational& a) { return is_nonpositive_integer(a); });
  }
};

namespace detail {

template <class Real>
Real to_real(const Rational& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return to_double(x);
  } else {
    return Real(numerator(x)) / Real(denominator(x));
  }
}

template <class Real>
double to_double_real(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

template <class Real>
Real epsilon_of() {
  return std::numeric_limits<Real>::epsilon();
}

/// Term ratio t_{k+1}/t_k of the hypergeometric series, without the z factor.
template <class Real>
class TermRatio {
 public:
  explicit TermRatio(const PFQParams& params) {
    for (const auto& a : params.upper) upper_.push_back(to_real<Real>(a));
    for (const auto& b : params.lower) lower_.push_back(to_real<Real>(b));
  }

  Real operator()(std::size_t k) const {
    const Real kk = static_cast<double>(k);
    Real r = 1;
    for (const auto& a : upper_) r *= a + kk;
    for (const auto& b : lower_) r /= b + kk;
    return r / (kk + 1);
  }

 private:
  std::vector<Real> upper_;
  std::vector<Real> lower_;
};

/// Neumaier-compensated accumulator.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& x) {
    const Real t = sum_ + x;
    using std::abs;
    if (abs(sum_) >= abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

struct SeriesResult {
  double value;
  double err;
};

/// Direct summation for 0 <= z < 1 (or terminating series at any z).
template <class Real>
SeriesResult sum_direct(const PFQParams& params, const Real& z, const SeriesConfig& cfg) {
  using std::abs;
  const TermRatio<Real> ratio(params);
  CompensatedSum<Real> sum;
  Real term = 1;
  Real abs_total = 0;
  const Real zero = 0;
  const Real tol = cfg.tol;
  // Beyond this index the term ratio is monotone enough for a geometric tail bound.
  double settle = 2.0;
  for (const auto& a : params.upper) settle = std::max(settle, std::abs(to_double(a)) + 2.0);
  for (const auto& b : params.lower) settle = std::max(settle, std::abs(to_double(b)) + 2.0);

  for (std::size_t k = 0; k < cfg.max_terms; ++k) {
    sum.add(term);
    abs_total += abs(term);
    if (term == zero) {
      const Real v = sum.value();
      return {to_double_real(v), to_double_real(Real(4) * epsilon_of<Real>() * abs_total)};
    }
    const Real r = ratio(k) * z;
    const Real next = term * r;
    if (static_cast<double>(k) > settle) {
      Real rb = abs(r);
      if (rb < z) rb = z;
      if (rb < Real(1)) {
        const Real tail = abs(next) / (Real(1) - rb);
        const Real scale = std::max(Real(1), abs(sum.value()));
        if (tail <= tol * scale * Real(0.1)) {
          const Real v = sum.value();
          return {to_double_real(v), to_double_real(tail + Real(4) * epsilon_of<Real>() * abs_total)};
        }
      }
    }
    term = next;
  }
  throw Error(ErrorKind::nonconvergence, "pfq: series did not converge within the iteration cap");
}

/// Levin u-transform of the series at z = 1, starting index 0, orders 1..max_order.
/// The estimate with the smallest successive difference is returned, err = 4·|difference|.
template <class Real>
SeriesResult levin_at_one(const PFQParams& params, const SeriesConfig& cfg) {
  using std::abs;
  using std::pow;
  const int kmax = cfg.levin_max_order;
  const TermRatio<Real> ratio(params);
  std::vector<Real> terms(static_cast<std::size_t>(kmax) + 1);
  std::vector<Real> partial(terms.size());
  terms[0] = 1;
  for (std::size_t k = 1; k < terms.size(); ++k) terms[k] = terms[k - 1] * ratio(k - 1);
  CompensatedSum<Real> acc;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    acc.add(terms[k]);
    partial[k] = acc.value();
  }

  auto transform = [&](int order) {
    Real num = 0;
    Real den = 0;
    Real binom = 1;
    for (int j = 0; j <= order; ++j) {
      const Real omega = Real(j + 1) * terms[static_cast<std::size_t>(j)];
      const Real weight = binom * pow(Real(j + 1) / Real(order + 1), order - 1) / omega;
      const Real signed_weight = (j % 2 == 0) ? weight : Real(-weight);
      num += signed_weight * partial[static_cast<std::size_t>(j)];
      den += signed_weight;
      binom = binom * Real(order - j) / Real(j + 1);
    }
    return num / den;
  };

  Real prev = transform(1);
  Real best = prev;
  Real best_diff = std::numeric_limits<Real>::infinity();
  for (int order = 2; order <= kmax; ++order) {
    const Real cur = transform(order);
    const Real diff = abs(cur - prev);
    if (diff < best_diff) {
      best_diff = diff;
      best = cur;
    }
    prev = cur;
  }
  const Real err = Real(4) * best_diff + Real(8) * epsilon_of<Real>() * abs(best);
  return {to_double_real(best), to_double_real(err)};
}

template <class Real>
SeriesResult pfq_impl(const PFQParams& params, double z, const SeriesConfig& cfg) {
  if (z == 1.0 && !params.terminating()) return levin_at_one<Real>(params, cfg);
  return sum_direct<Real>(params, Real(z), cfg);
}

}  // namespace detail

/// pFq(upper; lower; z) for z in [0, 1]. At z = 1 the series is accelerated.
inline NumValue pfq(const PFQParams& params, double z, const SeriesConfig& cfg = {}) {
  params.validate();
  require(z >= 0.0 && z <= 1.0, ErrorKind::invalid_argument, "pfq: z must lie in [0, 1]");
  if (z == 1.0 && !params.terminating())
    require(params.margin() > 0, ErrorKind::divergence, "pfq: divergent at z = 1 (margin <= 0)");
  const auto r = cfg.precision == Precision::extended ? detail::pfq_impl<ExtendedReal>(params, z, cfg)
                                                      : detail::pfq_impl<double>(params, z, cfg);
  if (z == 1.0 && r.err > cfg.accel_tol * std::max(1.0, std::abs(r.value)))
    throw Error(ErrorKind::nonconvergence, "pfq: acceleration did not reach the requested tolerance");
  return {r.value, r.err};
}

}  // namespace cmreg
