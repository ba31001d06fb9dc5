#pragma once

#include "cmreg/error.hpp"
#include "cmreg/numvalue.hpp"
#include "cmreg/quad/jacobi.hpp"
#include "cmreg/rational.hpp"
#include "cmreg/specialfn/gamma.hpp"
#include "cmreg/specialfn/hyp2f1.hpp"

namespace cmreg {

/// ₃F₂(a,b,c;d,e;t) through Γ(e)/(Γ(c)Γ(e−c))·∫₀¹ ₂F₁(a,b;d;tx) x^{c−1}(1−x)^{e−c−1} dx.
inline NumValue pfq_integral_3f2(const Rational& a, const Rational& b, const Rational& c, const Rational& d,
                                 const Rational& e, double t, const QuadConfig& qcfg = {},
                                 const SeriesConfig& scfg = {}) {
  require(c > 0 && c < e, ErrorKind::invalid_argument, "pfq_integral_3f2: requires 0 < c < e");
  require(t >= 0.0 && t <= 1.0, ErrorKind::invalid_argument, "pfq_integral_3f2: t must lie in [0, 1]");
  if (t == 0.0) return {1.0, 0.0};
  const NumValue pref = gamma_ratio({e}, {c, e - c});
  auto integrand = [&](double x, double xc) {
    const double arg = t * x;
    const double comp = t == 1.0 ? xc : (1.0 - t) + t * xc;
    return hyp2f1(a, b, d, arg, comp, scfg).re();
  };
  const NumValue integral =
      jacobi_quad(integrand, JacobiWeight{to_double(c) - 1.0, to_double(e - c) - 1.0}, qcfg);
  return pref * integral;
}

}  // namespace cmreg
