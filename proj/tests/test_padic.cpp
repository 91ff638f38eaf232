#include <gtest/gtest.h>

#include "nonarch/padic.hpp"
#include "support.hpp"

using namespace nonarch;
using nonarch::testing::Rng;
namespace tst = nonarch::testing;

TEST(Valuation, Examples) {
  EXPECT_EQ(val(FieldSpec(3), Scalar(18)), Valuation(2));
  EXPECT_TRUE(val(FieldSpec(5), Scalar(0)).is_infinite());
  EXPECT_EQ(val(FieldSpec(2), Scalar(3, 4)), Valuation(-2));
}

TEST(Valuation, InfinityOrdersLast) {
  EXPECT_LT(Valuation(1000), Valuation::infinity());
  EXPECT_TRUE((Valuation(2) + Valuation::infinity()).is_infinite());
  EXPECT_EQ(Valuation(2) + Valuation(-5), Valuation(-3));
}

TEST(AbsExp, Examples) {
  const FieldSpec f(3);
  EXPECT_EQ(abs_exp(f, Scalar(1, 3)), ExtRational(1));
  EXPECT_EQ(abs_exp(f, Scalar(1)), ExtRational(0));
  EXPECT_TRUE(abs_exp(f, Scalar(0)).is_neg_inf());
  EXPECT_EQ(abs_value(f, Scalar(9, 2)), Scalar(1, 9));
}

TEST(FieldOps, Examples) {
  EXPECT_EQ(add(Scalar(1, 2), Scalar(1, 3)), Scalar(5, 6));
  EXPECT_EQ(inv(Scalar(3, 7)), Scalar(7, 3));
  EXPECT_EQ(pow(Scalar(2), -3), Scalar(1, 8));
  EXPECT_EQ(sub(Scalar(1), Scalar(1, 4)), Scalar(3, 4));
  EXPECT_EQ(mul(Scalar(2, 3), Scalar(9, 4)), Scalar(3, 2));
}

TEST(FieldOps, DivisionByZeroIsDomainError) {
  EXPECT_THROW(Scalar(0).inv(), nonarch::domain_error);
  EXPECT_THROW(Scalar(1) / Scalar(0), nonarch::domain_error);
  EXPECT_THROW(Scalar(0).pow(-1), nonarch::domain_error);
}

TEST(Scalar, LowestTermsAndParsing) {
  const Scalar s(6, -4);
  EXPECT_EQ(s.num(), -3);
  EXPECT_EQ(s.den(), 2);
  EXPECT_EQ(s.str(), "-3/2");
  EXPECT_EQ(Scalar(4, 2).str(), "2");
  EXPECT_EQ(Scalar::parse("-10/4"), Scalar(-5, 2));
  EXPECT_EQ(Scalar::parse("+7"), Scalar(7));
  EXPECT_THROW(Scalar::parse("1/0"), validation_error);
  EXPECT_THROW(Scalar::parse("x"), validation_error);
  EXPECT_THROW(Scalar::parse("1/"), validation_error);
  EXPECT_THROW(Scalar::parse(""), validation_error);
}

TEST(Scalar, FloorCeil) {
  EXPECT_EQ(Scalar(7, 2).floor(), 3);
  EXPECT_EQ(Scalar(-7, 2).floor(), -4);
  EXPECT_EQ(Scalar(-7, 2).ceil(), -3);
  EXPECT_EQ(Scalar(4).ceil(), 4);
}

TEST(ExtRational, OrderAndParse) {
  EXPECT_LT(ExtRational::neg_inf(), ExtRational(-1000));
  EXPECT_LT(ExtRational(1000), ExtRational::pos_inf());
  EXPECT_EQ(ExtRational::parse("inf"), ExtRational::pos_inf());
  EXPECT_EQ(ExtRational::parse("-inf").str(), "-inf");
  EXPECT_EQ(ExtRational::parse("3/6"), ExtRational(Scalar(1, 2)));
  EXPECT_TRUE((-ExtRational::pos_inf()).is_neg_inf());
}

TEST(FieldSpec, RejectsNonPrimes) {
  EXPECT_THROW(FieldSpec(1), validation_error);
  EXPECT_THROW(FieldSpec(9), validation_error);
  EXPECT_THROW(FieldSpec(1000003), validation_error);
  EXPECT_NO_THROW(FieldSpec(999983));
  EXPECT_NO_THROW(FieldSpec(2));
}

TEST(Residue, CanonicalRepresentatives) {
  const FieldSpec f(3);
  EXPECT_EQ(residue_rep(f, Scalar(10), 2), Scalar(1));
  EXPECT_EQ(residue_rep(f, Scalar(-1), 2), Scalar(8));
  EXPECT_EQ(residue_rep(f, Scalar(1, 2), 1), Scalar(2));  // 1/2 = 2 mod 3
  EXPECT_EQ(residue_rep(f, Scalar(1, 3), 1), Scalar(1, 3));
  EXPECT_EQ(residue_rep(f, Scalar(1, 3) + 9, 1), Scalar(1, 3));
  EXPECT_EQ(residue_rep(f, Scalar(27), 2), Scalar(0));
}

TEST(Residue, DifferenceLiesInIdeal) {
  Rng rng(11);
  for (long p : {2, 3, 5, 7}) {
    const FieldSpec f(p);
    for (int i = 0; i < 300; ++i) {
      const Scalar x = tst::random_scalar(rng, f, -3, 3);
      const long level = rng.uniform(-2, 3);
      const Scalar r = residue_rep(f, x, level);
      const Valuation v = val(f, x - r);
      EXPECT_TRUE(v.is_infinite() || v.value() >= level);
      EXPECT_EQ(residue_rep(f, r, level), r);
    }
  }
}

TEST(Digits, Display) {
  const FieldSpec f(3);
  EXPECT_EQ(padic_digits(f, Scalar(5), 3), "...012");
  EXPECT_EQ(padic_digits(f, Scalar(0)), "0");
  EXPECT_EQ(padic_digits(f, Scalar(-1), 3), "...222");
}

TEST(ValuationProperties, UltrametricAndMultiplicative) {
  Rng rng(7);
  for (long p : {2, 3, 5}) {
    const FieldSpec f(p);
    for (int i = 0; i < 10000 / 3; ++i) {
      const Scalar x = tst::random_scalar(rng, f, -4, 4);
      const Scalar y = tst::random_scalar(rng, f, -4, 4);
      const Valuation vx = val(f, x), vy = val(f, y), vs = val(f, x + y);
      EXPECT_GE(vs, std::min(vx, vy));
      if (vx != vy) EXPECT_EQ(vs, std::min(vx, vy));
      EXPECT_EQ(val(f, x * y), vx + vy);
    }
  }
}
