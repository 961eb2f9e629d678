#include <gtest/gtest.h>

#include "rootsum/series.hpp"

using namespace rootsum;

namespace {

// alpha (alpha - 1) ... (alpha - j + 1), built without binom_rational.
Rat falling(const Rat& alpha, unsigned j) {
  Rat out(1);
  for (unsigned i = 0; i < j; ++i) out *= alpha - Rat(i);
  out.canonicalize();
  return out;
}

}  // namespace

TEST(BinomRational, Examples) {
  EXPECT_EQ(binom_rational(Rat(1, 2), 0), Rat(1));
  EXPECT_EQ(binom_rational(Rat(1, 2), 2), Rat(-1, 8));
  EXPECT_EQ(binom_rational(Rat(1, 3), 3), Rat(5, 81));
  EXPECT_EQ(binom_rational(Rat(7), 3), Rat(35));
  EXPECT_EQ(binom_rational(Rat(3), 5), Rat(0));
}

TEST(BinomRational, TimesFactorialIsFallingFactorial) {
  for (const Rat& alpha : {Rat(1, 2), Rat(1, 3), Rat(-5, 7), Rat(11, 4)}) {
    for (unsigned j = 0; j <= 15; ++j) {
      EXPECT_EQ(binom_rational(alpha, j) * Rat(factorial(j)), falling(alpha, j));
    }
  }
}

TEST(BinomRational, SquareRootSeriesClosedForm) {
  // C(1/2, j) = (-1)^(j+1) (2j+1)! / (4^j (j!)^2 (4j^2 - 1))
  for (unsigned j = 0; j <= 12; ++j) {
    const mpz_class den = ipow(mpz_class(4), j) * factorial(j) * factorial(j);
    Rat expected = make_rat(factorial(2 * j + 1), den) / Rat(4 * static_cast<long>(j * j) - 1);
    if (j % 2 == 0) expected = -expected;
    EXPECT_EQ(binom_rational(Rat(1, 2), j), expected) << "j=" << j;
    // derivative of sqrt at 1 is j! C(1/2, j) = (-1)^(j+1) (2j+1)! / (4^j j! (4j^2-1))
    Rat deriv = make_rat(factorial(2 * j + 1), ipow(mpz_class(4), j) * factorial(j)) /
                Rat(4 * static_cast<long>(j * j) - 1);
    if (j % 2 == 0) deriv = -deriv;
    EXPECT_EQ(binom_rational(Rat(1, 2), j) * Rat(factorial(j)), deriv);
  }
}

TEST(EmCorrection, Examples) {
  EXPECT_EQ(em_correction_coeff(2, 1), (ExpansionTerm{Rat(1, 24), Rat(-1, 2)}));
  EXPECT_EQ(em_correction_coeff(2, 2), (ExpansionTerm{Rat(-1, 1920), Rat(-5, 2)}));
  EXPECT_EQ(em_correction_coeff(3, 1), (ExpansionTerm{Rat(1, 36), Rat(-2, 3)}));
  EXPECT_EQ(em_correction_coeff(2, 4).coeff, Rat(-11, 163840));
  EXPECT_EQ(em_correction_coeff(5, 2).coeff, Rat(-1, 2500));
}

TEST(EmCorrection, MatchesDerivativeForm) {
  // B_2k / (2k)! * f^(2k-1)(n) with f^(j)(x) = falling(1/m, j) x^(1/m - j)
  for (unsigned m = 2; m <= 6; ++m) {
    for (unsigned k = 1; k <= 8; ++k) {
      Rat expected = bernoulli(2 * k) / Rat(factorial(2 * k)) * falling(Rat(1, m), 2 * k - 1);
      expected.canonicalize();
      const auto t = em_correction_coeff(m, k);
      EXPECT_EQ(t.coeff, expected);
      EXPECT_EQ(t.exponent, Rat(1, m) - Rat(2 * k - 1));
    }
  }
}

TEST(PaperForm, Examples) {
  EXPECT_EQ(em_coeff_sqrt_paperform(1), Rat(1, 24));
  EXPECT_EQ(em_coeff_sqrt_paperform(2), Rat(-1, 1920));
  EXPECT_EQ(em_coeff_sqrt_paperform(3), Rat(1, 9216));
}

TEST(PaperForm, EqualsGenericCoefficient) {
  for (unsigned k = 1; k <= 10; ++k) {
    EXPECT_EQ(em_coeff_sqrt_paperform(k), em_correction_coeff(2, k).coeff) << "k=" << k;
  }
}

TEST(Expansion, BuildExamples) {
  const auto e21 = build_power_sum_expansion(2, 1);
  ASSERT_EQ(e21.leading_terms.size(), 2u);
  EXPECT_EQ(e21.leading_terms[0], (ExpansionTerm{Rat(2, 3), Rat(3, 2)}));
  EXPECT_EQ(e21.leading_terms[1], (ExpansionTerm{Rat(1, 2), Rat(1, 2)}));
  EXPECT_EQ(e21.zeta_arg, Rat(-1, 2));
  ASSERT_EQ(e21.correction_terms.size(), 1u);
  EXPECT_EQ(e21.correction_terms[0], (ExpansionTerm{Rat(1, 24), Rat(-1, 2)}));

  const auto e22 = build_power_sum_expansion(2, 2);
  ASSERT_EQ(e22.correction_terms.size(), 2u);
  EXPECT_EQ(e22.correction_terms[1], (ExpansionTerm{Rat(-1, 1920), Rat(-5, 2)}));

  const auto e31 = build_power_sum_expansion(3, 1);
  EXPECT_EQ(e31.leading_terms[0], (ExpansionTerm{Rat(3, 4), Rat(4, 3)}));
  EXPECT_EQ(e31.leading_terms[1], (ExpansionTerm{Rat(1, 2), Rat(1, 3)}));
  EXPECT_EQ(e31.zeta_arg, Rat(-1, 3));
  EXPECT_EQ(e31.correction_terms[0], (ExpansionTerm{Rat(1, 36), Rat(-2, 3)}));
}

TEST(Expansion, ExponentsStrictlyDecreaseByIntegerSteps) {
  for (unsigned m = 2; m <= 7; ++m) {
    const auto e = build_power_sum_expansion(m, 9);
    const auto terms = e.all_terms();
    for (std::size_t i = 1; i < terms.size(); ++i) {
      EXPECT_LT(terms[i].exponent, terms[i - 1].exponent);
      EXPECT_NE(sgn(terms[i].coeff), 0);
    }
    for (std::size_t i = 1; i < e.correction_terms.size(); ++i) {
      const Rat gap = e.correction_terms[i - 1].exponent - e.correction_terms[i].exponent;
      EXPECT_EQ(gap, Rat(2));
    }
  }
}

TEST(Expansion, PaperFormBuildMatchesGeneric) {
  for (unsigned p = 1; p <= 10; ++p) EXPECT_EQ(build_sqrt_expansion_paperform(p), build_power_sum_expansion(2, p));
}

TEST(Expansion, JsonShape) {
  const auto j = to_json(build_power_sum_expansion(2, 1));
  EXPECT_EQ(j.dump(),
            R"({"m":2,"p":1,"terms":[{"num":2,"den":3,"exp_num":3,"exp_den":2},)"
            R"({"num":1,"den":2,"exp_num":1,"exp_den":2},{"num":1,"den":24,"exp_num":-1,"exp_den":2}],)"
            R"("zeta_arg_num":-1,"zeta_arg_den":2})");
}

TEST(Expansion, JsonRoundTrip) {
  for (unsigned m = 2; m <= 6; ++m) {
    for (unsigned p : {1u, 4u, 25u}) {  // p = 25 pushes coefficients past 64 bits
      const auto e = build_power_sum_expansion(m, p);
      EXPECT_EQ(expansion_from_json(nlohmann::ordered_json::parse(to_json(e).dump())), e);
    }
  }
}

TEST(Expansion, JsonRejectsWrongTermCount) {
  auto j = to_json(build_power_sum_expansion(3, 2));
  j["p"] = 5;
  EXPECT_THROW(expansion_from_json(j), std::invalid_argument);
}
