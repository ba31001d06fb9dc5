#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cmreg/fibration.hpp"

using namespace cmreg;

TEST(FibrationParams, Validation) {
  EXPECT_NO_THROW(FibrationParams(3, 5, 1, 1));
  EXPECT_THROW(FibrationParams(4, 5, 1, 1), Error);
  EXPECT_THROW(FibrationParams(3, 9, 1, 1), Error);
  EXPECT_THROW(FibrationParams(3, 3, 1, 1), Error);
  EXPECT_THROW(FibrationParams(3, 5, 0, 1), Error);
  EXPECT_THROW(FibrationParams(3, 5, 1, 3), Error);
  EXPECT_EQ(FibrationParams(5, 7, 2, 3).c(), 2);
}

TEST(FibrationParams, PrimeMessage) {
  try {
    FibrationParams(4, 5, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()), "p must be prime");
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
}

TEST(FracParams, Examples) {
  const auto a = frac_params(FibrationParams(3, 5, 1, 1), 1, 1);
  EXPECT_EQ(a.alpha, rat(1, 3));
  EXPECT_EQ(a.beta, rat(1, 3));
  EXPECT_EQ(a.gamma, rat(2, 3));
  EXPECT_EQ(a.mu, rat(1, 5));

  const auto b = frac_params(FibrationParams(2, 3, 1, 1), 1, 1);
  EXPECT_EQ(b.alpha, rat(1, 2));
  EXPECT_EQ(b.beta, rat(1, 2));
  EXPECT_EQ(b.mu, rat(1, 3));

  const auto c = frac_params(FibrationParams(5, 3, 2, 1), 3);
  EXPECT_EQ(c.alpha, rat(1, 5));
  EXPECT_EQ(c.beta, rat(3, 5));
}

TEST(FracParams, ConjugateSymmetry) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n) {
      const auto x = frac_params(fp, n);
      const auto y = frac_params(fp, fp.p() - n);
      EXPECT_EQ(x.alpha + y.alpha, Rational(1));
      EXPECT_EQ(x.beta + y.beta, Rational(1));
      EXPECT_EQ(is_integer((x.alpha - x.beta) * fp.l()), x.alpha == x.beta);
    }
}

TEST(Eps, ThreeFiveExample) {
  const FibrationParams fp(3, 5, 1, 1);
  EXPECT_EQ(eps(fp, 5), 1);
  // p and l(b − a) + p coincide when a = b.
  EXPECT_EQ(eps(fp, 3), 2);
  EXPECT_EQ(eps(fp, 10), 1);
  EXPECT_EQ(eps(fp, 8), -1);
  EXPECT_EQ(eps(fp, 13), -1);
}

TEST(Eps, CoincidentClassesCountWithMultiplicity) {
  const FibrationParams fp(2, 3, 1, 1);
  const auto table = eps_table(fp);
  EXPECT_EQ(table, (std::vector<int>{0, 0, 2, 2, 0, -2}));
}

TEST(Eps, SumIsTwoAndAvoidsZero) {
  for (const auto& fp : default_sweep()) {
    const auto table = eps_table(fp);
    EXPECT_EQ(std::accumulate(table.begin(), table.end(), 0), 2) << fp.label();
    EXPECT_EQ(table[0], 0) << fp.label();
  }
}

TEST(HodgePosition, LegendreFamily) {
  const FibrationParams fp(2, 3, 1, 1);
  EXPECT_EQ(hodge_position(fp, 1), 2);
  EXPECT_EQ(hodge_position(fp, 5), 0);
  EXPECT_THROW(hodge_position(fp, 3), Error);
}

TEST(HodgePosition, DualityAndIndexSetConsistency) {
  for (const auto& fp : default_sweep())
    for (long long h : char_indices(fp)) {
      const int ph = hodge_position(fp, h);
      EXPECT_GE(ph, 0);
      EXPECT_LE(ph, 2);
      EXPECT_EQ(ph + hodge_position(fp, -h), 2) << fp.label() << " h=" << h;
      EXPECT_EQ(ph, hodge_side(fp, h)) << fp.label() << " h=" << h;
    }
}

TEST(HodgeDims, Examples) {
  EXPECT_EQ(hodge_dims(FibrationParams(3, 5, 1, 1), 1), (HodgeDims{1, 2, 1}));
  EXPECT_EQ(hodge_dims(FibrationParams(2, 3, 1, 1), 1).gr1, 0);
}

TEST(HodgeDims, SumAndConjugation) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n) {
      const HodgeDims d = hodge_dims(fp, n);
      EXPECT_EQ(d.total(), fp.l() - 1) << fp.label() << " n=" << n;
      EXPECT_EQ(d.f2, hodge_dims(fp, fp.p() - n).gr0) << fp.label() << " n=" << n;
      EXPECT_GE(d.f2, 0);
      EXPECT_GE(d.gr1, 0);
      EXPECT_GE(d.gr0, 0);
    }
}

TEST(IndexSets, Examples) {
  const IndexSets a = index_sets(FibrationParams(3, 5, 1, 1), 1);
  EXPECT_EQ(a.i1, (std::vector<long long>{1, 2, 3}));
  EXPECT_EQ(a.i2, (std::vector<long long>{1}));
  const IndexSets b = index_sets(FibrationParams(2, 3, 1, 1), 1);
  EXPECT_EQ(b.i1, (std::vector<long long>{1}));
  EXPECT_EQ(b.i2, (std::vector<long long>{1}));
}

TEST(IndexSets, CardinalitiesAndStructure) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n) {
      const IndexSets s = index_sets(fp, n);
      const HodgeDims d = hodge_dims(fp, n);
      EXPECT_EQ(static_cast<long long>(s.i2.size()), d.f2);
      EXPECT_EQ(static_cast<long long>(s.i1.size()), d.f2 + d.gr1);
      EXPECT_TRUE(std::is_sorted(s.i1.begin(), s.i1.end()));
      EXPECT_TRUE(std::includes(s.i1.begin(), s.i1.end(), s.i2.begin(), s.i2.end()));
      std::set<long long> residues;
      for (long long m : s.i1) {
        EXPECT_NE(mod_floor(m, fp.l()), 0);
        residues.insert(mod_floor(m, fp.l()));
      }
      EXPECT_EQ(residues.size(), s.i1.size());
    }
}

TEST(CmRank, Examples) {
  const auto a = cm_rank_check(FibrationParams(3, 5, 1, 1));
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.total, 8);
  const auto b = cm_rank_check(FibrationParams(2, 3, 1, 1));
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(b.total, 2);
  const auto c = cm_rank_check(FibrationParams(5, 3, 2, 3));
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.total, 8);
}

TEST(CanonicalExtension, TwistsMatchGradedDimensions) {
  for (const auto& fp : default_sweep())
    for (long long n = 1; n < fp.p(); ++n) {
      const auto f = frac_params(fp, n);
      const HodgeDims d = hodge_dims(fp, n);
      const HodgeLine line = f1_hodge_line(fp, n);
      const long long k = gr0_twist(fp, n);
      EXPECT_EQ(d.gr0, -k - 1) << fp.label() << " n=" << n;
      EXPECT_EQ(d.gr1, fp.l() + k - line.i - (f.alpha > f.beta ? 1 : 0)) << fp.label() << " n=" << n;
    }
}

TEST(DefaultSweep, CoversAllAdmissibleCells) {
  const auto cells = default_sweep();
  EXPECT_EQ(cells.size(), 42u);
  EXPECT_EQ(cells.front(), FibrationParams(2, 3, 1, 1));
  EXPECT_EQ(cells.back(), FibrationParams(5, 7, 4, 4));
}
