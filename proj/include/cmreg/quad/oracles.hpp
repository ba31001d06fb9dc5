#pragma once

#include <algorithm>
#include <cmath>

#include "cmreg/error.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/quad/jacobi.hpp"
#include "cmreg/rational.hpp"

// Brute-force period integrals. Nothing here calls the hypergeometric code: the integrands are the
// differential forms themselves, restricted to the vanishing cycles.

namespace cmreg {

enum class Cycle { delta0, delta1 };
enum class Thimble { Delta0, Delta1 };
enum class Form { omega, eta };

inline FormExponents form_exponents(const FibrationParams& fp, long long n, Form form) {
  return form == Form::omega ? holomorphic_exponents(fp, n) : eta_exponents(fp, n);
}

namespace detail {

/// The real exponents a' = na/p − i, b' = nb/p − j, c' = nc/p − k of x, 1 − x and t − x.
struct LocalExponents {
  double at_zero;
  double at_one;
  double at_t;
};

inline LocalExponents local_exponents(const FibrationParams& fp, long long n, const FormExponents& e) {
  const auto shifted = [&](long long v, long long idx) { return to_double(rat(n * v, fp.p()) - idx); };
  return {shifted(fp.a(), e.i), shifted(fp.b(), e.j), shifted(fp.c(), e.k)};
}

/// Branch factor on δ₁, where y = ε^c·(x^a(1−x)^b(x−t)^c)^{1/p}: (t−x)^k/y^n picks up (−1)^k·ε^{−cn}.
inline Complex delta1_branch(const FibrationParams& fp, long long n, const FormExponents& e) {
  const double sign_k = (e.k % 2 == 0) ? 1.0 : -1.0;
  const long long power = -fp.c() * n;
  if (fp.p() == 2) {
    static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return sign_k * kIPowers[mod_floor(power, 4)];
  }
  return {sign_k * (mod_floor(power, 2) == 0 ? 1.0 : -1.0), 0.0};
}

/// ∫_{δ₀} with x = t·s: t^{1−a'−c'}∫ s^{−a'}(1−s)^{−c'}(1−ts)^{−b'} ds. `tc` is 1 − t.
/// Without `prefactor` the power of t in front is dropped.
inline NumValue delta0_integral(const LocalExponents& x, double t, double tc, const QuadConfig& cfg,
                                bool prefactor = true) {
  auto kernel = [&](double s, double sc) { return std::pow(sc + tc * s, -x.at_one); };
  const NumValue inner = jacobi_quad(kernel, JacobiWeight{-x.at_zero, -x.at_t}, cfg);
  return prefactor ? NumValue(std::pow(t, 1.0 - x.at_zero - x.at_t)) * inner : inner;
}

/// ∫₀¹ s^{w.at_zero}(1−s)^{w.at_one}·g(s) ds for g with a near-singularity at distance ~`scale` left of 0.
/// Panels [scale·4^k, scale·4^{k+1}] resolve the layer; the endpoints carry Gauss–Jacobi weights.
template <typename G>
NumValue graded_quad(const G& g, const JacobiWeight& w, double scale) {
  auto sum = [&](int order) {
    const auto& near = gauss_jacobi_rule(order, JacobiWeight{w.at_zero, 0.0});
    const auto& mid = gauss_jacobi_rule(order, JacobiWeight{0.0, 0.0});
    const auto& far = gauss_jacobi_rule(order, JacobiWeight{0.0, w.at_one});
    double total = 0.0;
    const double h = std::min(scale, 0.5);
    for (std::size_t i = 0; i < near.x.size(); ++i) {
      const double s = h * near.x[i];
      total += std::pow(h, 1.0 + w.at_zero) * near.w[i] * std::pow(1.0 - s, w.at_one) * g(s);
    }
    for (double lo = h; lo < 0.5; lo *= 4.0) {
      const double hi = std::min(4.0 * lo, 0.5);
      for (std::size_t i = 0; i < mid.x.size(); ++i) {
        const double s = lo + (hi - lo) * mid.x[i];
        total += (hi - lo) * mid.w[i] * std::pow(s, w.at_zero) * std::pow(1.0 - s, w.at_one) * g(s);
      }
    }
    for (std::size_t i = 0; i < far.x.size(); ++i) {
      const double s = 0.5 * (1.0 + far.x[i]);
      total += std::pow(0.5, 1.0 + w.at_one) * far.w[i] * std::pow(s, w.at_zero) * g(s);
    }
    return total;
  };
  const double coarse = sum(20);
  const double fine = sum(30);
  return {fine, std::abs(fine - coarse) + 64.0 * kEps * std::abs(fine)};
}

/// ∫_{δ₁} without the branch factor, x = t + (1−t)s: (1−t)^{1−b'−c'}∫ s^{−c'}(1−s)^{−b'}(t+(1−t)s)^{−a'} ds.
inline NumValue delta1_integral(const LocalExponents& x, double t, double tc, const QuadConfig& cfg) {
  auto kernel = [&](double s, double) { return std::pow(t + tc * s, -x.at_zero); };
  const JacobiWeight weight{-x.at_t, -x.at_one};
  // For small t the kernel has a layer of width t at s = 0.
  const NumValue inner = t < 1e-4 ? graded_quad([&](double s) { return kernel(s, 1.0 - s); }, weight, t / tc)
                                  : jacobi_quad(kernel, weight, cfg);
  return NumValue(std::pow(tc, 1.0 - x.at_one - x.at_t)) * inner;
}

}  // namespace detail

/// ∫ over δ₀ (segment [0,t]) or δ₁ (segment [t,1]) of x^i(1−x)^j(t−x)^k dx/y^n by Gauss–Jacobi quadrature.
inline NumValue oracle_one_period(const FibrationParams& fp, long long n, const FormExponents& e, double t,
                                  Cycle cycle, const QuadConfig& cfg = {}) {
  require(t > 0.0 && t < 1.0, ErrorKind::invalid_argument, "oracle_one_period: t must lie in (0,1)");
  const auto x = detail::local_exponents(fp, n, e);
  require(x.at_zero < 1.0 && x.at_one < 1.0 && x.at_t < 1.0, ErrorKind::invalid_argument,
          "oracle_one_period: the form is not integrable on the cycle");
  if (cycle == Cycle::delta0) return detail::delta0_integral(x, t, 1.0 - t, cfg);
  return NumValue(detail::delta1_branch(fp, n, e)) * detail::delta1_integral(x, t, 1.0 - t, cfg);
}

/// Iterated integral ∫₀¹ t^{m−1}·(∫_{δ_s(t^l)} form) dt over the thimble Δ_s.
/// With `substitute`, the outer variable is u = t^l, further flattened by u = v^r so that the
/// algebraic behaviour u^{κ−1} at 0 becomes bounded. Otherwise the integral runs in t directly.
inline NumValue oracle_two_period(const FibrationParams& fp, long long m, long long n, Thimble thimble, Form form,
                                  double tol = 1e-10, bool substitute = true) {
  const FormExponents e = form_exponents(fp, n, form);
  const auto x = detail::local_exponents(fp, n, e);
  const double mu = to_double(rat(m, fp.l()));
  const auto l = static_cast<double>(fp.l());
  const QuadConfig inner_cfg{tol / 100.0, 16, 512};
  // Inner period ~ u^{power} at u = 0.
  const double pole = 1.0 - x.at_zero - x.at_t;
  const double power = thimble == Thimble::Delta0 ? pole : std::min(0.0, pole);
  const double kappa = mu + power;
  require(kappa > 0.0, ErrorKind::precondition, "oracle_two_period: outer integral diverges at 0");
  require(thimble == Thimble::Delta0 || mu > 0.0, ErrorKind::precondition,
          "oracle_two_period: the Delta1 iterated integral needs m > 0");

  // Inner period divided by u^{power}, continuous at u = 0 except in the logarithmic Δ₁ case.
  auto scaled_inner = [&](double u, double uc) {
    if (thimble == Thimble::Delta0) return detail::delta0_integral(x, u, uc, inner_cfg, false).re();
    if (u == 0.0) {
      if (pole == 0.0) return 0.0;
      if (pole > 0.0) return std::beta(pole, 1.0 - x.at_one);
      return std::tgamma(1.0 - x.at_t) * std::tgamma(-pole) / std::tgamma(x.at_zero);
    }
    return std::pow(u, -power) * detail::delta1_integral(x, u, uc, inner_cfg).re();
  };
  // The δ₀ period of ω grows like log(1/(1−u)); the slice 1−u < kCut is dropped and bounded below.
  constexpr double kCut = 1e-14;
  NumValue outer;
  if (substitute) {
    const double r = kappa < 1.0 ? 1.0 / kappa : 1.0;
    auto f = [&](double v, double vc) {
      const double u = std::pow(v, r);
      const double uc = r == 1.0 ? vc : -std::expm1(r * std::log1p(-vc));
      if (uc < kCut) return 0.0;
      const double jacobian = r * std::pow(v, r * kappa - 1.0);
      return jacobian == 0.0 ? 0.0 : jacobian * scaled_inner(u, uc);
    };
    outer = NumValue(1.0 / l) * tanh_sinh_quad(f, tol, 1);
  } else {
    auto f = [&](double t, double tc) {
      if (t == 0.0) return 0.0;
      const double u = std::pow(t, l);
      const double uc = -std::expm1(l * std::log1p(-tc));
      if (u == 0.0 || uc < kCut) return 0.0;
      return std::pow(t, l * kappa - 1.0) * scaled_inner(u, uc);
    };
    outer = tanh_sinh_quad(f, tol, 1);
  }
  outer.err += tol * outer.abs() + kCut * (1.0 - std::log(kCut)) * outer.abs();
  if (thimble == Thimble::Delta0) return outer;
  return NumValue(detail::delta1_branch(fp, n, e)) * outer;
}

}  // namespace cmreg
