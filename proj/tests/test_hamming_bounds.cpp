#include <gtest/gtest.h>

#include <sstream>

#include "adqec/error.hpp"
#include "adqec/hamming_bounds.hpp"
#include "oracles.hpp"

using namespace adqec;

TEST(HammingBounds, BinomialMatchesSmallOracle) {
  for (int n = 0; n <= 40; ++n) {
    for (int k = -1; k <= n + 1; ++k) EXPECT_EQ(binomial(n, k), BigInt(oracle::binom_small(n, k)));
  }
  EXPECT_EQ(binomial(100, 50).str(), "100891344545564193334812497256");
}

TEST(HammingBounds, ZetaExamples) {
  EXPECT_EQ(zeta(2, 2, 3), 3);
  EXPECT_EQ(zeta(5, 0, 4), 1);
  for (int n = 1; n <= 20; ++n) {
    for (int a = 0; a <= n; ++a) EXPECT_EQ(zeta(n, a, 2), binomial(n, a));
  }
  EXPECT_THROW(zeta(3, 4, 2), Error);
  EXPECT_THROW(zeta(3, -1, 2), Error);
}

TEST(HammingBounds, ZetaRoutesAgreeWithCounting) {
  for (int q = 2; q <= 5; ++q) {
    for (int n = 1; n <= 20; ++n) {
      for (int a = 0; a <= n * (q - 1); ++a) {
        const BigInt s = zeta_inclusion_exclusion(n, a, q);
        EXPECT_EQ(s, zeta_polynomial(n, a, q));
        if (n <= 8) EXPECT_EQ(s, BigInt(oracle::zeta_count(n, a, q)));
      }
    }
  }
}

TEST(HammingBounds, CombinatorialIdentity) {
  for (int n = 1; n <= 20; ++n) {
    for (int a = 0; a <= n; ++a) {
      BigInt sum = 0;
      for (int i = 0; i <= n; ++i) {
        const BigInt term = binomial(n, i) * binomial(a - 2 * i + n - 1, n - 1);
        sum += (i % 2 == 0) ? term : BigInt(-term);
      }
      EXPECT_EQ(sum, binomial(n, a));
    }
  }
}

TEST(HammingBounds, ReportExamples) {
  const BoundReport r311 = check_bound(3, 1, 1);
  EXPECT_TRUE(r311.saturated);
  EXPECT_EQ(r311.lhs, 8);
  const BoundReport r512 = check_bound(5, 1, 2);
  EXPECT_TRUE(r512.saturated);
  const BoundReport r411 = check_bound(4, 1, 1);
  EXPECT_TRUE(r411.satisfied);
  EXPECT_FALSE(r411.saturated);
  EXPECT_EQ(r411.lhs, 16);
  EXPECT_EQ(r411.rhs, 10);
  EXPECT_TRUE(check_bound(7, 2, 1).satisfied);
  EXPECT_FALSE(check_bound(7, 2, 1).saturated);
  EXPECT_TRUE(check_bound(11, 2, 2).satisfied);
  EXPECT_TRUE(check_bound(15, 3, 1).satisfied);
  EXPECT_FALSE(check_bound(2, 1, 1).satisfied);
}

TEST(HammingBounds, QuditBound) {
  // Two qutrits encoding a qubit against single damping: 9 >= (1 + 2) 2.
  const BoundReport r = check_bound(2, 1, 1, 3, 2);
  EXPECT_TRUE(r.satisfied);
  EXPECT_EQ(r.rhs, 6);
  EXPECT_THROW(check_bound(2, 1, 5, 3, 2), Error);
}

TEST(HammingBounds, FamilyOptimality) {
  const auto reports = verify_family_optimality(10);
  ASSERT_EQ(reports.size(), 10u);
  for (const auto& r : reports) EXPECT_TRUE(r.saturated) << "t = " << r.t;
  EXPECT_EQ(reports[2].rhs, 2 * (1 + 7 + 21 + 35));
}

TEST(HammingBounds, ConstructedCodesSatisfyBound) {
  // Family codes (k, t) have n = 2^k (t + 1) - 1.
  for (auto [k, t] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
    const int n = (1 << k) * (t + 1) - 1;
    EXPECT_TRUE(check_bound(n, k, t).satisfied) << n << "," << k << "," << t;
  }
}

TEST(HammingBounds, Serialisation) {
  const std::vector<BoundReport> reports{check_bound(3, 1, 1)};
  std::ostringstream out;
  write_csv(out, reports);
  EXPECT_EQ(out.str(), "n,k,t,q_p,q_l,lhs,rhs,satisfied,saturated\n3,1,1,2,2,8,8,true,true\n");
  EXPECT_NE(to_json(reports).find("\"lhs\":\"8\""), std::string::npos);
}
