#include <gtest/gtest.h>

#include <cmath>

#include "cmreg/periods.hpp"
#include "cmreg/quad/oracles.hpp"

using namespace cmreg;

namespace {

double beta_fn(double x, double y) { return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y); }

// ₃F₂(2/3,1/3,1/5;1,6/5;1) from mpmath.
constexpr double kRegulator3F2 = 1.06835499814269551607927177982;

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(EpsilonSign, Values) {
  EXPECT_EQ(eps_power(FibrationParams(2, 3, 1, 1), 1), Complex(0, 1));
  EXPECT_EQ(eps_power(FibrationParams(3, 5, 1, 1), 1), Complex(-1, 0));
  EXPECT_EQ(eps_p_beta(FibrationParams(2, 3, 1, 1), 1), Complex(0, 1));
}

TEST(OnePeriod, HolomorphicDelta0ClosedForm) {
  const FibrationParams fp(3, 5, 1, 2);
  const auto f = frac_params(fp, 1);
  const double a = to_double(f.alpha), b = to_double(f.beta), t = 0.37;
  const NumValue v = omega_periods(fp, 1, t).delta0;
  const double expected = beta_fn(1 - a, b) * std::pow(t, b - a) *
                          hyp2f1(1 - f.alpha, f.beta, 1 - f.alpha + f.beta, t).re();
  EXPECT_NEAR(v.re(), expected, 1e-12);
}

TEST(OnePeriod, AgreesWithOracle) {
  for (const FibrationParams& fp : {FibrationParams(2, 3, 1, 1), FibrationParams(3, 5, 1, 2), FibrationParams(5, 7, 2, 3)})
    for (long long n = 1; n < fp.p(); ++n)
      for (const Form form : {Form::omega, Form::eta}) {
        const FormExponents e = form_exponents(fp, n, form);
        EXPECT_LT(rel(one_period_delta0(fp, n, e, 0.37).value, oracle_one_period(fp, n, e, 0.37, Cycle::delta0).value), 1e-8);
        EXPECT_LT(rel(one_period_delta1(fp, n, e, 0.37).value, oracle_one_period(fp, n, e, 0.37, Cycle::delta1).value), 1e-8);
      }
}

TEST(OnePeriod, Delta0VanishesAtZeroWhenBetaExceedsAlpha) {
  const FibrationParams fp(3, 5, 1, 2);  // n=1: α = 1/3 < β = 2/3
  const double small = omega_periods(fp, 1, 1e-8).delta0.abs();
  const double smaller = omega_periods(fp, 1, 1e-10).delta0.abs();
  EXPECT_LT(smaller, small);
  EXPECT_NEAR(smaller / small, std::pow(1e-2, 1.0 / 3.0), 1e-3);
}

TEST(OnePeriod, Delta1RealForOddP) {
  for (const FibrationParams& fp : {FibrationParams(3, 5, 1, 1), FibrationParams(5, 3, 2, 4)})
    for (long long n = 1; n < fp.p(); ++n) {
      EXPECT_EQ(omega_periods(fp, n, 0.6).delta1.im(), 0.0);
      EXPECT_EQ(eta_periods(fp, n, 0.6).delta1.im(), 0.0);
    }
}

TEST(OnePeriod, EtaDelta1CarriesFactor) {
  // η's δ₁ period is (1−β)(1−t)·B(1−β,β)·₂F₁(α,2−β;2;1−t) up to the common phase.
  const FibrationParams fp(3, 7, 1, 2);
  const auto f = frac_params(fp, 1);
  const double t = 0.4;
  const NumValue eta1 = eta_periods(fp, 1, t).delta1;
  const double magnitude = (1 - to_double(f.beta)) * (1 - t) * beta_fn(1 - to_double(f.beta), to_double(f.beta)) *
                           hyp2f1(f.alpha, 2 - f.beta, Rational(2), 1 - t, t).re();
  EXPECT_NEAR(eta1.abs(), magnitude, 1e-12);
}

TEST(PeriodMatrix, NonsingularAndProductConstant) {
  for (const FibrationParams& fp : {FibrationParams(2, 5, 1, 1), FibrationParams(3, 5, 1, 2), FibrationParams(5, 7, 1, 3)}) {
    Complex prod3 = 1.0, prod7 = 1.0;
    for (long long n = 1; n < fp.p(); ++n) {
      for (const double t : {0.25, 0.5, 0.75}) EXPECT_GT(period_matrix(fp, n, t).det().abs(), 1e-6);
      prod3 *= period_matrix(fp, n, 0.3).det().value;
      prod7 *= period_matrix(fp, n, 0.7).det().value;
    }
    EXPECT_LT(std::abs(prod3 - prod7) / std::abs(prod3), 1e-6) << fp.label();
  }
}

TEST(DetLimit, MatchesExtrapolation) {
  for (const FibrationParams& fp : {FibrationParams(2, 3, 1, 1), FibrationParams(3, 7, 2, 1), FibrationParams(5, 3, 1, 4)})
    for (long long n = 1; n < fp.p(); ++n)
      EXPECT_LT(rel(extrapolated_det_limit(fp, n).value, det_limit(fp, n).value), 1e-5) << fp.label() << " n=" << n;
}

TEST(DetLimit, PhaseByParity) {
  // p odd: ε^{pβ} = ±1, but (1 − ζ_p^n)² keeps the limit off the real axis.
  const FibrationParams fp(3, 5, 1, 1);
  EXPECT_EQ(eps_p_beta(fp, 1), Complex(-1, 0));
  const Complex one_minus_zeta = 1.0 - std::polar(1.0, 2.0 * kPi / 3.0);
  const Complex expected = -one_minus_zeta * one_minus_zeta * (2.0 * kPi / std::sqrt(3.0)) / (2.0 / 3.0);
  EXPECT_LT(std::abs(det_limit(fp, 1).value - expected), 1e-12);
  // p = 2: ε^{pβ} = i and (1 − ζ₂)² = 4, so the limit is 4i·B(1/2,1/2)/(1/2) = 8πi.
  const NumValue even = det_limit(FibrationParams(2, 3, 1, 1), 1);
  EXPECT_NEAR(even.re(), 0.0, 1e-13);
  EXPECT_NEAR(even.im(), 8.0 * kPi, 1e-12);
}

TEST(TwoPeriod, Delta1LegendreValue) {
  const TwoPeriods d = two_period_delta1(FibrationParams(2, 3, 1, 1), 1, 1);
  const double b = beta_fn(0.5, 1.0 / 3.0);
  EXPECT_NEAR(d.omega.re(), 0.0, 1e-15);
  EXPECT_NEAR(d.omega.im(), -b * b / 3.0, 1e-12);
}

TEST(TwoPeriod, EtaOverOmegaRatio) {
  const FibrationParams fp(3, 7, 1, 2);
  const auto f = frac_params(fp, 1, 2);
  const TwoPeriods d = two_period_delta1(fp, 2, 1);
  EXPECT_NEAR(std::abs(d.eta.value / d.omega.value - to_double((1 - f.beta) / (1 - f.alpha + f.mu))), 0.0, 1e-14);
}

TEST(TwoPeriod, Delta1Precondition) {
  const FibrationParams fp(3, 5, 2, 1);  // n=1: α = 2/3, β = 1/3, so μ must exceed 1/3
  EXPECT_THROW(two_period_delta1(fp, 1, 1), Error);
  EXPECT_NO_THROW(two_period_delta1(fp, 2, 1));
}

TEST(TwoPeriod, Delta0ClosedForm) {
  const TwoPeriods d = two_period_delta0(FibrationParams(3, 5, 1, 1), 1, 1, regulator_series_config());
  EXPECT_NEAR(d.omega.re(), 2.0 * kPi / std::sqrt(3.0) * kRegulator3F2, 1e-11);
}

TEST(TwoPeriod, Delta0MarginIsOne) {
  const FibrationParams fp(5, 7, 2, 3);
  for (long long n = 1; n < fp.p(); ++n)
    for (long long m : index_sets(fp, n).i1) {
      const auto f = frac_params(fp, n, m);
      if (!(f.mu > f.alpha - f.beta)) continue;
      const Rational c = f.beta - f.alpha + f.mu;
      const PFQParams params{{1 - f.alpha, f.beta, c}, {1 - f.alpha + f.beta, c + 1}};
      EXPECT_EQ(params.margin(), Rational(1));
    }
}

TEST(TwoPeriod, AgreesWithOracles) {
  const FibrationParams fp(3, 5, 1, 2);
  for (long long n = 1; n < fp.p(); ++n)
    for (long long m : index_sets(fp, n).i1) {
      const auto f = frac_params(fp, n, m);
      if (!(f.mu > f.alpha - f.beta)) continue;
      const TwoPeriods d0 = two_period_delta0(fp, m, n);
      EXPECT_LT(rel(oracle_two_period(fp, m, n, Thimble::Delta0, Form::omega).value, d0.omega.value), 1e-7);
      EXPECT_LT(rel(oracle_two_period(fp, m, n, Thimble::Delta0, Form::eta).value, d0.eta.value), 1e-7);
      if (m <= 0) continue;
      const TwoPeriods d1 = two_period_delta1(fp, m, n);
      EXPECT_LT(rel(oracle_two_period(fp, m, n, Thimble::Delta1, Form::omega).value, d1.omega.value), 1e-7);
      EXPECT_LT(rel(oracle_two_period(fp, m, n, Thimble::Delta1, Form::eta).value, d1.eta.value), 1e-7);
    }
}

TEST(TwoPeriod, SeriesAgreesWithIntegralRoute) {
  const FibrationParams fp(5, 7, 1, 2);
  const TwoPeriods series = two_period_delta0(fp, 3, 3, regulator_series_config());
  const TwoPeriods integral = two_period_delta0_integral(fp, 3, 3);
  EXPECT_LT(rel(series.omega.value, integral.omega.value), 1e-8);
  EXPECT_LT(rel(series.eta.value, integral.eta.value), 1e-8);
}

TEST(PerGamma, LegendreValue) {
  const double g = std::tgamma(0.5) * std::tgamma(1.0 / 3.0) / std::tgamma(5.0 / 6.0);
  const FibrationParams fp(2, 3, 1, 1);
  EXPECT_NEAR(per_gamma_product(fp, 1).re(), g * g, 1e-11);
  EXPECT_NEAR((per_gamma_product(fp, 1) / per_bb_product(fp, 1)).re(), 1.0, 1e-12);
  EXPECT_EQ(predicted_shift(fp, 1), Rational(1));
}

TEST(PerGamma, ReflectionDuality) {
  for (const FibrationParams& fp : {FibrationParams(2, 5, 1, 1), FibrationParams(3, 7, 1, 2), FibrationParams(5, 7, 2, 3)})
    for (long long h : char_indices(fp)) EXPECT_NEAR(gamma_duality_ratio(fp, h).re(), 1.0, 1e-9) << fp.label() << " h=" << h;
}

TEST(PerBB, MatchesDelta1Modulus) {
  const FibrationParams fp(3, 5, 1, 1);
  for (long long h : char_indices(fp)) {
    const CharData cd = char_data(fp, h);
    if (!(cd.frac.mu > cd.frac.alpha - cd.frac.beta) || !(cd.frac.beta - cd.frac.alpha + cd.frac.mu < 1)) continue;
    const NumValue d1 = two_period_delta1(fp, cd.m, cd.n).omega;
    EXPECT_NEAR(per_bb_product(fp, h).abs(), fp.l() * d1.abs(), 1e-10);
  }
}

TEST(GrossDeligne, AllRowsPass) {
  for (const FibrationParams& fp : {FibrationParams(2, 3, 1, 1), FibrationParams(3, 5, 1, 1), FibrationParams(5, 7, 2, 3)})
    for (const auto& row : gross_deligne_check(fp)) {
      EXPECT_TRUE(row.hodge_ok) << fp.label() << " h=" << row.h;
      EXPECT_TRUE(row.period_ok) << fp.label() << " h=" << row.h << " deviation " << row.deviation;
      EXPECT_TRUE(row.root_of_unity_sign == 1 || row.root_of_unity_sign == -1);
    }
}
