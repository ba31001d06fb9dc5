#include <gtest/gtest.h>

#include "cmreg/connection.hpp"

using namespace cmreg;

namespace {

RatMat2 rmat(Rational a, Rational b, Rational c, Rational d) { return {{{a, b}, {c, d}}}; }

Rational trace_at(const Mat2& m, const Rational& t) { return m[0][0].evaluate(t) + m[1][1].evaluate(t); }

}  // namespace

TEST(Poly, ArithmeticAndDivision) {
  const Poly x = Poly::x();
  const Poly p = x * x - Poly(1);
  const auto [q, r] = divmod(p, x - Poly(1));
  EXPECT_EQ(q, x + Poly(1));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(gcd(p, x * x + x * 2 + Poly(1)), x + Poly(1));
  EXPECT_EQ(p.derivative(), x * 2);
  EXPECT_EQ(p.evaluate(rat(1, 2)), rat(-3, 4));
}

TEST(RatFunc, ReducedCanonicalForm) {
  const Poly x = Poly::x();
  const RatFunc f(x * x - Poly(1), (x - Poly(1)) * 3);
  EXPECT_EQ(f.den(), Poly(1));
  EXPECT_EQ(f.num(), (x + Poly(1)) * rat(1, 3));
  const RatFunc g = RatFunc(1) / RatFunc(Poly::linear(2, 4));
  EXPECT_EQ(g.den().leading(), Rational(1));
  EXPECT_EQ(g.evaluate(Rational(1)), rat(1, 6));
  EXPECT_EQ(g.derivative().evaluate(Rational(0)), rat(-1, 1));
}

TEST(GmMatrixBase, ResidueAtZeroForHalfHalf) {
  const ConnMat a = gm_matrix_base(rat(1, 2), rat(1, 2));
  RatMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a.entries[i][j].evaluate(Rational(0));
  EXPECT_EQ(r, rmat(rat(-1, 2), rat(-1, 2), rat(1, 2), rat(1, 2)));
}

TEST(GmMatrixBase, TraceIsBetaMinusAlpha) {
  const Rational alpha = rat(2, 5), beta = rat(1, 3);
  const ConnMat a = gm_matrix_base(alpha, beta);
  for (const Rational& t : {rat(1, 7), rat(3, 4), rat(-5, 2)}) EXPECT_EQ(trace_at(a.entries, t), beta - alpha);
}

TEST(GmMatrixBase, PolesOnlyAtZeroOneInfinity) {
  const ConnMat a = gm_matrix_base(rat(2, 5), rat(1, 3));
  for (const auto& row : a.entries)
    for (const auto& e : row) {
      Poly rest = divmod(e.den(), Poly::monomial(1, e.den().valuation())).first;
      while (rest.degree() > 0) {
        const auto [q, r] = divmod(rest, Poly::linear(-1, 1));
        ASSERT_TRUE(r.is_zero());
        rest = q;
      }
    }
}

TEST(GmMatrix, ChartChangeConsistency) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n) {
      EXPECT_EQ(change_chart(gm_matrix(fp, n, Chart::t)).entries, gm_matrix(fp, n, Chart::s).entries) << fp.label();
      EXPECT_TRUE(poles_within_divisor(gm_matrix(fp, n, Chart::t), fp.l()));
      EXPECT_TRUE(poles_within_divisor(gm_matrix(fp, n, Chart::s), fp.l()));
    }
}

TEST(GmMatrix, RenderedForm) {
  const ConnMat a = gm_matrix(FibrationParams(3, 5, 1, 1), 1, Chart::t);
  EXPECT_EQ(a.to_string(), "[[-10/3, -10/3], [(-10/3)/(t^5 - 1), 10/3]]");
}

TEST(GaugeTransform, IdentityAndDiagonal) {
  const ConnMat a = gm_matrix(FibrationParams(3, 5, 1, 2), 1, Chart::t);
  EXPECT_EQ(gauge_transform(a, GaugeMat(diag(1, 1))).entries, a.entries);

  const long long k = 3;
  const GaugeMat p(diag(1, RatFunc::monomial(1, k)));
  const Mat2 expected = inverse(p.entries()) * a.entries * p.entries() + diag(0, Rational(k));
  EXPECT_EQ(gauge_transform(a, p).entries, expected);
}

TEST(GaugeTransform, RejectsSingularGauge) {
  EXPECT_THROW(GaugeMat(Mat2{{{RatFunc(1), RatFunc(1)}, {RatFunc(1), RatFunc(1)}}}), Error);
}

TEST(CanonicalBasis, Examples) {
  const FibrationParams fp(3, 5, 1, 1);
  EXPECT_EQ(canonical_basis_matrix(fp, 1, SingularPoint::zeta).entries(), diag(1, 1));
  EXPECT_EQ(canonical_basis_matrix(fp, 1, SingularPoint::zero).entries(), diag(1, 1));
  // α + β = 1 at (3,5,1,2), n=1: α = 1/3, β = 2/3.
  const FibrationParams sym(3, 5, 1, 2);
  const long long fa = floor_l(rat(1, 3), 5);
  EXPECT_EQ(canonical_basis_matrix(sym, 1, SingularPoint::infinity).entries(),
            diag(RatFunc::monomial(1, fa), RatFunc::monomial(1, fa - 5)));
}

TEST(Residues, ClosedFormExamples) {
  const FibrationParams fp(3, 5, 1, 1);  // α = β = 1/3
  EXPECT_EQ(residue_matrix(fp, 1, SingularPoint::zeta), rmat(0, 0, rat(-2, 3), 0));
  EXPECT_EQ(residue_matrix(fp, 1, SingularPoint::zero), rmat(rat(-10, 3), rat(-10, 3), rat(10, 3), rat(10, 3)));
  EXPECT_EQ(residue_matrix(fp, 1, SingularPoint::infinity), rmat(rat(1, 3), 0, 0, rat(2, 3)));

  const FibrationParams skew(3, 5, 1, 2);  // n=1: α = 1/3, β = 2/3
  EXPECT_EQ(residue_matrix(skew, 1, SingularPoint::zero), rmat(0, 0, 0, frac(rat(5, 3))));
}

TEST(Residues, EveryCellMatchesTable) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n)
      for (const SingularPoint pt : kSingularPoints) {
        EXPECT_EQ(residue_matrix(fp, n, pt), residue_table(fp, n, pt)) << fp.label() << " n=" << n << " " << to_string(pt);
        EXPECT_TRUE(poles_within_divisor(gauged_connection(fp, n, pt), fp.l()));
      }
}

TEST(Residues, InfinityChartInvariance) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n)
      EXPECT_EQ(residue_at_infinity_via_t(fp, n), residue_table(fp, n, SingularPoint::infinity)) << fp.label();
}

TEST(ResidueSpectrum, UnitIntervalAndShapes) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n) {
      const auto f = frac_params(fp, n);
      for (const auto& row : residue_spectrum_check(fp, n)) {
        ASSERT_TRUE(row.spectrum.has_value());
        EXPECT_TRUE(row.in_unit_interval) << fp.label() << " " << to_string(row.point);
        const auto& s = *row.spectrum;
        if (row.point == SingularPoint::zeta) {
          EXPECT_EQ(s, (std::array<Rational, 2>{0, 0}));
        }
        if (row.point == SingularPoint::infinity) {
          auto expected = std::array<Rational, 2>{frac((1 - f.beta) * fp.l()), frac(f.alpha * fp.l())};
          if (expected[1] < expected[0]) std::swap(expected[0], expected[1]);
          EXPECT_EQ(s, expected);
        }
      }
    }
}

TEST(NSubspace, Codimensions) {
  for (const FibrationParams& fp : {FibrationParams(3, 5, 1, 1), FibrationParams(3, 5, 1, 2), FibrationParams(5, 7, 2, 4)})
    for (long long n = 1; n < fp.p(); ++n) {
      EXPECT_EQ(n_subspace(fp, n, SingularPoint::infinity).codim, 0);
      EXPECT_EQ(n_subspace(fp, n, SingularPoint::zeta).codim, 1);
      EXPECT_EQ(n_subspace(fp, n, SingularPoint::zero).codim, 1);
    }
}

TEST(F1HodgeLine, Examples) {
  EXPECT_EQ(f1_hodge_line(FibrationParams(3, 5, 1, 1), 1), (HodgeLine{1, 0}));
  EXPECT_EQ(f1_hodge_line(FibrationParams(2, 3, 1, 1), 1), (HodgeLine{1, 0}));
  // p > l lets the degree drop to −1.
  EXPECT_EQ(f1_hodge_line(FibrationParams(5, 3, 1, 2), 3).i, -1);
}
