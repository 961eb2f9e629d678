#include <gtest/gtest.h>

#include <random>

#include "rootsum/oracle.hpp"

using namespace rootsum;

namespace {

const char* kFracSum10 = "3.46827818620410015703947955564411318948820104";

bool within(const Float& a, const Float& b, const Float& tol) { return !(abs(a - b) > tol); }

}  // namespace

TEST(BruteFloorSum, Examples) {
  EXPECT_EQ(brute_floor_sum(Natural(7), 2), Natural(11));
  EXPECT_EQ(brute_floor_sum(Natural(1), 5), Natural(1));
  EXPECT_EQ(brute_floor_sum(Natural(30), 3), Natural(57));
  EXPECT_EQ(brute_floor_sum(Natural(0), 3), Natural(0));
}

TEST(BruteFloorSum, RunLengthEqualsLiteralLoop) {
  for (unsigned m = 2; m <= 5; ++m) {
    scan_floor_sums(50000, m, [&](std::uint64_t n, const Natural& total) {
      if (n % 97 == 0 || n < 300) {
        ASSERT_EQ(brute_floor_sum(Natural::from_u64(n), m), total) << n;
      }
    });
  }
}

TEST(BruteFloorSum, MatchesClosedFormExhaustively) {
  for (unsigned m = 2; m <= 5; ++m) {
    scan_floor_sums(200000, m, [&](std::uint64_t n, const Natural& total) {
      ASSERT_EQ(floor_root_sum(Natural::from_u64(n), m).total, total) << "n=" << n << " m=" << m;
    });
  }
}

TEST(BruteFloorSum, MatchesClosedFormSampledToOneMillion) {
  std::mt19937_64 rng(99);
  for (unsigned m = 2; m <= 5; ++m) {
    for (int i = 0; i < 200; ++i) {
      const Natural n = Natural::from_u64(1 + rng() % 1000000);
      EXPECT_EQ(brute_floor_sum(n, m), floor_root_sum(n, m).total);
    }
  }
}

TEST(BruteFloorSum, BudgetIsEnforced) {
  OracleConfig cfg;
  cfg.budget = Natural(1000);
  EXPECT_THROW(brute_floor_sum(Natural(1001), 2, cfg), BudgetExceeded);
  EXPECT_NO_THROW(brute_floor_sum(Natural(1000), 2, cfg));
  EXPECT_THROW(brute_frac_sum(Natural(1001), 2, 64, cfg), BudgetExceeded);
}

TEST(BruteFracSum, Examples) {
  const auto s10 = brute_frac_sum(Natural(10), 2, 128);
  EXPECT_TRUE(within(s10.value, Float::from_string(kFracSum10, 200), s10.error));
  // {sqrt 2} + {sqrt 3}
  const auto s4 = brute_frac_sum(Natural(4), 2, 128);
  const Float two_terms = frac_part(Natural(2), 2, 200).value + frac_part(Natural(3), 2, 200).value;
  EXPECT_TRUE(within(s4.value, two_terms, s4.error));
  EXPECT_NEAR(s4.value.to_double(), 1.14626437, 1e-8);
  EXPECT_TRUE(brute_frac_sum(Natural(1), 2, 64).value.is_zero());
}

TEST(BruteFracSum, ErrorBoundFormula) {
  const auto s = brute_frac_sum(Natural(5000), 3, 100);
  Float expected(mpz_class(5000), 64);
  mpfr_mul_2si(expected.get(), expected.get(), -99, MPFR_RNDU);
  EXPECT_EQ(s.error, expected);
  const auto hi = brute_frac_sum(Natural(5000), 3, 200);
  EXPECT_TRUE(within(s.value, hi.value, s.error));
}

TEST(BruteFracSum, CheckpointsAgreeWithSingleRuns) {
  const std::vector<Natural> ns{Natural(1), Natural(10), Natural(33000), Natural(70001)};
  const auto at = brute_frac_sums_at(ns, 2, 128);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto single = brute_frac_sum(ns[i], 2, 128);
    EXPECT_TRUE(within(at[i].value, single.value, single.error + at[i].error)) << i;
  }
  EXPECT_THROW(brute_frac_sums_at({Natural(5), Natural(5)}, 2, 64), std::invalid_argument);
}

TEST(OracleSums, FracPlusFloorIsPowerSum) {
  for (unsigned m = 2; m <= 5; ++m) {
    for (unsigned long n : {1ul, 2ul, 100ul, 12345ul, 300000ul}) {
      const auto s = oracle_sums(Natural(n), m, 128);
      EXPECT_EQ(s.floor_sum, floor_root_sum(Natural(n), m).total);
    }
  }
}

TEST(OracleSums, MeanTendsToOneHalf) {
  const auto s = brute_frac_sum(Natural(1000000), 2, 64);
  EXPECT_LT(std::abs(s.value.to_double() / 1e6 - 0.5), 1e-2);
}

TEST(CountFracBelow, FullIntervalFormulaOvercounts) {
  const auto r = count_frac_below(Natural(10), Rat(1));
  EXPECT_EQ(r.direct_count, Natural(90));
  EXPECT_EQ(r.formula_value, Natural(108));
  EXPECT_FALSE(r.agrees);
}

TEST(CountFracBelow, HalfIntervalSmallCase) {
  // k = 2..8: {sqrt k} = .414 .732 0 .236 .449 .646 .828 -> 2, 5, 6 fall in (0, 1/2)
  const auto r = count_frac_below(Natural(3), Rat(1, 2));
  EXPECT_EQ(r.direct_count, Natural(3));
  // formula: j=1: 1 + floor(5/4) = 2; j=2: 1 + floor(9/4) = 3
  EXPECT_EQ(r.formula_value, Natural(5));
}

TEST(CountFracBelow, TinyIntervalCountsNothing) {
  const auto r = count_frac_below(Natural(2), make_rat(1, mpz_class("1000000000000")));
  EXPECT_EQ(r.direct_count, Natural(0));
}

TEST(CountFracBelow, DirectCountMatchesFloatingEvaluation) {
  for (const Rat& x : {Rat(1, 3), Rat(7, 10), Rat(1, 100)}) {
    const auto r = count_frac_below(Natural(40), x);
    std::uint64_t c = 0;
    for (unsigned long k = 1; k <= 1600; ++k) {
      const auto f = frac_part(Natural(k), 2, 80);
      if (!f.value.is_zero() && f.value < Float(x, 80)) ++c;
    }
    EXPECT_EQ(r.direct_count, Natural(c));
  }
}

TEST(CountFracBelow, RejectsBadArguments) {
  EXPECT_THROW(count_frac_below(Natural(1), Rat(1, 2)), std::invalid_argument);
  EXPECT_THROW(count_frac_below(Natural(5), Rat(0)), std::invalid_argument);
  EXPECT_THROW(count_frac_below(Natural(5), Rat(3, 2)), std::invalid_argument);
}
