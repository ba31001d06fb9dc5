#include <gtest/gtest.h>

#include <cmath>

#include "cmreg/periods.hpp"
#include "cmreg/quad/monodromy.hpp"
#include "cmreg/quad/oracles.hpp"
#include "cmreg/specialfn.hpp"

using namespace cmreg;

namespace {

auto constant_one = [](double, double) { return 1.0; };

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(JacobiQuad, BetaIntegrals) {
  EXPECT_NEAR(jacobi_quad(constant_one, JacobiWeight{0.0, 0.0}).re(), 1.0, 1e-14);
  EXPECT_NEAR(jacobi_quad(constant_one, JacobiWeight{-0.5, -0.5}).re(), kPi, 1e-13);
  EXPECT_NEAR(jacobi_quad(constant_one, JacobiWeight{-2.0 / 3.0, -1.0 / 3.0}).re(), 2.0 * kPi / std::sqrt(3.0), 1e-13);
}

TEST(JacobiQuad, SmoothIntegrandAgainstClosedForm) {
  // ∫ x^{-1/2} e^x dx over (0,1) = √π·erfi(1).
  const NumValue v = jacobi_quad([](double x, double) { return std::exp(x); }, JacobiWeight{-0.5, 0.0});
  EXPECT_NEAR(v.re(), 2.9253034918143632, 1e-12);
  EXPECT_LE(v.err, 1e-10);
}

TEST(JacobiQuad, FallsBackOnEndpointLogarithm) {
  // ∫ x^{-34/35}·(−log(1−x)) dx: the logarithm at 1 is not absorbed by the weight.
  const NumValue v = jacobi_quad([](double, double xc) { return -std::log(xc); }, JacobiWeight{-34.0 / 35.0, 0.0});
  // Expanding −log(1−x) gives Σ_k 1/(k(k + 1/35)) = 35·(ψ(36/35) + γ).
  EXPECT_NEAR(v.re(), 35.0 * (digamma(36.0 / 35.0).re() + 0.57721566490153286), 1e-8);
}

TEST(JacobiQuad, RejectsNonIntegrableWeight) {
  EXPECT_THROW(jacobi_quad(constant_one, JacobiWeight{-1.0, 0.0}), Error);
}

TEST(OracleOnePeriod, MatchesClosedForms) {
  const FibrationParams fp(3, 5, 1, 1);
  const FormExponents omega = form_exponents(fp, 1, Form::omega);
  const FormExponents eta = form_exponents(fp, 1, Form::eta);
  EXPECT_LT(rel(oracle_one_period(fp, 1, omega, 0.37, Cycle::delta0).value, one_period_delta0(fp, 1, omega, 0.37).value), 1e-8);
  EXPECT_LT(rel(oracle_one_period(fp, 1, eta, 0.37, Cycle::delta0).value, one_period_delta0(fp, 1, eta, 0.37).value), 1e-8);
  EXPECT_LT(rel(oracle_one_period(fp, 1, omega, 0.37, Cycle::delta1).value, one_period_delta1(fp, 1, omega, 0.37).value), 1e-8);
}

TEST(OracleOnePeriod, SmallTScaling) {
  const FibrationParams fp(3, 5, 1, 2);  // n=1: α = 1/3, β = 2/3
  const double t = 1e-3;
  const NumValue v = oracle_one_period(fp, 1, form_exponents(fp, 1, Form::omega), t, Cycle::delta0);
  const double b = std::tgamma(2.0 / 3.0) * std::tgamma(2.0 / 3.0) / std::tgamma(4.0 / 3.0);
  EXPECT_NEAR(v.re() / std::pow(t, 1.0 / 3.0), b, 1e-3 * b);
}

TEST(OracleTwoPeriod, SubstitutionConsistency) {
  for (const FibrationParams& fp : {FibrationParams(3, 5, 1, 1), FibrationParams(3, 5, 1, 2)})
    for (long long n = 1; n < fp.p(); ++n)
      for (long long m : index_sets(fp, n).i1) {
        const auto f = frac_params(fp, n, m);
        if (!(f.mu > f.alpha - f.beta)) continue;
        for (const Thimble th : {Thimble::Delta0, Thimble::Delta1}) {
          if (th == Thimble::Delta1 && m <= 0) continue;
          const NumValue sub = oracle_two_period(fp, m, n, th, Form::omega, 1e-10, true);
          const NumValue direct = oracle_two_period(fp, m, n, th, Form::omega, 1e-10, false);
          EXPECT_LT(rel(sub.value, direct.value), 1e-8) << fp.label() << " m=" << m << " n=" << n;
        }
      }
}

TEST(OracleTwoPeriod, Preconditions) {
  const FibrationParams fp(3, 5, 1, 2);  // n=1: α < β, I¹ contains m = −1
  EXPECT_THROW(oracle_two_period(fp, -1, 1, Thimble::Delta1, Form::omega), Error);
  EXPECT_NO_THROW(oracle_two_period(fp, -1, 1, Thimble::Delta0, Form::omega, 1e-8));
}

TEST(Monodromy, CalibrationReproducesBuildConstant) {
  const auto sign = calibrate_monodromy_sign();
  ASSERT_TRUE(sign.has_value());
  EXPECT_EQ(*sign, kMonodromySign);
}

TEST(Monodromy, ZetaLoopsUnipotent) {
  const FibrationParams fp(3, 7, 1, 2);
  for (long long n = 1; n < fp.p(); ++n)
    for (const auto& row : monodromy_check(fp, n).rows)
      if (row.target.point == SingularPoint::zeta) {
        EXPECT_LT(row.unipotent_defect, 1e-6) << row.target.label();
      }
}

TEST(Monodromy, ZeroAndInfinitySpectra) {
  for (const FibrationParams& fp : {FibrationParams(3, 5, 1, 2), FibrationParams(5, 3, 2, 1), FibrationParams(2, 5, 1, 1)})
    for (long long n = 1; n < fp.p(); ++n)
      for (const auto& row : monodromy_check(fp, n).rows) {
        if (row.target.point == SingularPoint::zeta) continue;
        EXPECT_LT(row.spectrum_deviation, 1e-6) << fp.label() << " " << row.target.label();
        EXPECT_LT(row.modulus_defect, 1e-6);
      }
}

TEST(Monodromy, ZeroLoopEigenvaluesWhenAlphaDiffersFromBeta) {
  const FibrationParams fp(3, 5, 1, 2);  // n=1: α = 1/3, β = 2/3, {(β−α)l} = 2/3
  const CMat2 m = monodromy(fp, 1, default_loop(fp, {SingularPoint::zero, 0}));
  const Complex expected = std::exp(Complex(0.0, 2.0 * kPi * kMonodromySign * 2.0 / 3.0));
  const auto eig = eigenvalues(m);
  const double direct = std::min(std::abs(eig[0] - 1.0) + std::abs(eig[1] - expected),
                                 std::abs(eig[1] - 1.0) + std::abs(eig[0] - expected));
  EXPECT_LT(direct, 1e-6);
}

TEST(Monodromy, DeterminantMatchesResidueTrace) {
  const FibrationParams fp(5, 7, 2, 3);
  for (long long n = 1; n < fp.p(); ++n)
    for (const LoopTarget& target : loop_targets(fp)) {
      const RatMat2 res = residue_matrix(fp, n, target.point);
      const double tr = to_double(res[0][0] + res[1][1]);
      const Complex expected = std::exp(Complex(0.0, 2.0 * kPi * kMonodromySign * tr));
      EXPECT_LT(std::abs(monodromy(fp, n, default_loop(fp, target)).determinant() - expected), 1e-6) << target.label();
    }
}

TEST(Monodromy, CompositeRelation) {
  for (const FibrationParams& fp : {FibrationParams(2, 3, 1, 1), FibrationParams(3, 5, 1, 2), FibrationParams(5, 7, 1, 4)})
    for (long long n = 1; n < fp.p(); ++n) EXPECT_LT(monodromy_check(fp, n).composite_defect, 1e-5) << fp.label();
}

TEST(Monodromy, StepUnderflowThroughSingularity) {
  try {
    monodromy(FibrationParams(3, 5, 1, 1), 1, LoopPath{0.0, 1.0, 8, Chart::t});
    FAIL() << "expected a nonconvergence error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::nonconvergence);
  }
}
