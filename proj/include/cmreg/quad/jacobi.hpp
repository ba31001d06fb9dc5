#pragma once

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <concepts>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "cmreg/error.hpp"
#include "cmreg/numvalue.hpp"

namespace cmreg {

/// Weight x^{at_zero}·(1−x)^{at_one} on (0, 1).
struct JacobiWeight {
  double at_zero = 0.0;
  double at_one = 0.0;
};

/// Integrands receive x and its complement 1 − x, each accurate near its own endpoint.
template <class F>
concept EndpointIntegrand = std::invocable<const F&, double, double> &&
                            std::convertible_to<std::invoke_result_t<const F&, double, double>, double>;

struct QuadConfig {
  double tol = 1e-12;
  int min_order = 16;
  int max_order = 512;
};

namespace detail {

struct GaussRule {
  std::vector<double> x;   // nodes in (0,1)
  std::vector<double> xc;  // 1 − x
  std::vector<double> w;   // weights including the Jacobi weight
};

/// Golub–Welsch for the weight (1−y)^{a}(1+y)^{b} on (−1,1), mapped to (0,1).
inline GaussRule build_gauss_jacobi(int order, double a, double b) {
  Eigen::VectorXd diag(order);
  Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
  const double ab = a + b;
  for (int n = 0; n < order; ++n) {
    const double s = 2.0 * n + ab;
    diag(n) = (n == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int n = 1; n < order; ++n) {
    const double s = 2.0 * n + ab;
    const double num = 4.0 * n * (n + a) * (n + b) * (n + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    sub(n - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  GaussRule rule;
  rule.x.resize(static_cast<std::size_t>(order));
  rule.xc.resize(rule.x.size());
  rule.w.resize(rule.x.size());
  // Map y ∈ (−1,1) to x = (1+y)/2; the weight picks up a factor 2^{−(a+b+1)}.
  const double scale = std::exp(-(ab + 1.0) * std::log(2.0));
  for (int i = 0; i < order; ++i) {
    const double y = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    const auto k = static_cast<std::size_t>(i);
    rule.x[k] = 0.5 * (1.0 + y);
    rule.xc[k] = 0.5 * (1.0 - y);
    rule.w[k] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

/// Thread-safe memo of Gauss–Jacobi rules keyed by (order, weight).
inline const GaussRule& gauss_jacobi_rule(int order, const JacobiWeight& w) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{order, w.at_zero, w.at_one}];
  if (!slot) slot = std::make_unique<GaussRule>(build_gauss_jacobi(order, w.at_one, w.at_zero));
  return *slot;
}

/// Integrator instances per nesting level, so an integrand may itself call tanh_sinh_quad.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_integrator(int level) {
  thread_local std::array<boost::math::quadrature::tanh_sinh<double>, 2> integrators{
      boost::math::quadrature::tanh_sinh<double>(15), boost::math::quadrature::tanh_sinh<double>(15)};
  return integrators.at(static_cast<std::size_t>(level));
}

}  // namespace detail

/// Double-exponential quadrature of f(x, 1−x) over (0,1).
template <EndpointIntegrand F>
NumValue tanh_sinh_quad(const F& f, double tol, int level = 0) {
  // The integrator passes the signed distance to the nearest endpoint as its second argument.
  auto wrapped = [&f](double x, double xc) {
    return x < 0.5 ? f(x, 1.0 - x) : f(x, xc);
  };
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = detail::tanh_sinh_integrator(level).integrate(wrapped, 0.0, 1.0, tol, &err, &l1, &levels);
  if (!std::isfinite(value)) throw Error(ErrorKind::nonconvergence, "tanh-sinh quadrature produced a non-finite value");
  return {value, err + 4.0 * kEps * l1};
}

namespace detail {

/// Gauss–Jacobi with doubling orders; empty if successive orders never agree to cfg.tol.
template <EndpointIntegrand F>
std::optional<NumValue> try_gauss_jacobi(const F& f, const JacobiWeight& w, const QuadConfig& cfg) {
  auto apply = [&](int order) {
    const auto& rule = gauss_jacobi_rule(order, w);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(rule.x[i], rule.xc[i]);
    return sum;
  };
  double prev = apply(cfg.min_order);
  for (int order = 2 * cfg.min_order; order <= cfg.max_order; order *= 2) {
    const double cur = apply(order);
    const double diff = std::abs(cur - prev);
    if (std::isfinite(cur) && diff <= cfg.tol * std::max(1.0, std::abs(cur)))
      return NumValue{cur, diff + 8.0 * kEps * std::abs(cur)};
    prev = cur;
  }
  return std::nullopt;
}

/// Gauss–Jacobi, then tanh-sinh on the fully weighted integrand.
template <EndpointIntegrand F>
std::optional<NumValue> try_weighted(const F& f, const JacobiWeight& w, const QuadConfig& cfg) {
  if (auto r = try_gauss_jacobi(f, w, cfg)) return r;
  auto weighted = [&](double x, double xc) {
    const double v = f(x, xc);
    return v == 0.0 ? 0.0 : v * std::pow(x, w.at_zero) * std::pow(xc, w.at_one);
  };
  const NumValue r = tanh_sinh_quad(weighted, cfg.tol);
  if (r.err > 100.0 * cfg.tol * std::max(1.0, r.abs())) return std::nullopt;
  return r;
}

}  // namespace detail

/// ∫₀¹ f(x)·x^{w0}(1−x)^{w1} dx. Gauss–Jacobi with doubling orders; if that stalls, the halves
/// [0,½] and [½,1] are done separately so each keeps only its own endpoint weight.
template <EndpointIntegrand F>
NumValue jacobi_quad(const F& f, const JacobiWeight& w, const QuadConfig& cfg = {}) {
  require(w.at_zero > -1.0 && w.at_one > -1.0, ErrorKind::invalid_argument, "jacobi_quad: weight exponents must exceed -1");
  if (auto r = detail::try_gauss_jacobi(f, w, cfg)) return *r;
  // x = v/2 on the left, x = 1 − v/2 on the right (v measured from the endpoint).
  auto left = [&](double v, double) {
    const double x = 0.5 * v;
    return std::pow(1.0 - x, w.at_one) * f(x, 1.0 - x);
  };
  auto right = [&](double v, double) {
    const double xc = 0.5 * v;
    return std::pow(1.0 - xc, w.at_zero) * f(1.0 - xc, xc);
  };
  const auto lhs = detail::try_weighted(left, JacobiWeight{w.at_zero, 0.0}, cfg);
  const auto rhs = detail::try_weighted(right, JacobiWeight{w.at_one, 0.0}, cfg);
  if (!lhs || !rhs)
    throw Error(ErrorKind::nonconvergence, "jacobi_quad: neither Gauss-Jacobi nor tanh-sinh reached the tolerance");
  return NumValue(std::pow(0.5, 1.0 + w.at_zero)) * *lhs + NumValue(std::pow(0.5, 1.0 + w.at_one)) * *rhs;
}

}  // namespace cmreg
