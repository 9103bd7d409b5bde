#include <gtest/gtest.h>

#include <random>

#include <twloop/scalar.hpp>

using namespace twloop;

namespace {

// Independent model of Q(z3): a + b z  ->  a I + b C, C the companion matrix of z^2+z+1.
struct Mat2 {
  Rational a, b, c, d;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

Mat2 model(const Scalar& s) {
  // C = [[0,-1],[1,-1]]
  const Rational& a = s.re();
  const Rational& b = s.zc();
  return {a, -b, b, a - b};
}

Scalar random_scalar(std::mt19937_64& rng, int m) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  Rational a = make_rational(num(rng), den(rng)), b = make_rational(num(rng), den(rng));
  return m == 3 ? Scalar(3, a, b) : Scalar(a);
}

}  // namespace

TEST(Scalars, Zeta3Squared) {
  Scalar z = Scalar::zeta(3);
  EXPECT_EQ(z * z, Scalar(-1) - z);
  EXPECT_EQ((z * z).str(), parse_scalar("-1-1*z", 3).str());
}

TEST(Scalars, OnePlusZetaSquared) {
  Scalar z = Scalar::zeta(3);
  Scalar x = Scalar(1) + z;
  EXPECT_EQ(x * x, z);
  EXPECT_EQ(model(x) * model(x), model(z));
}

TEST(Scalars, Zeta2) {
  Scalar z = Scalar::zeta(2);
  EXPECT_EQ(z, Scalar(-1));
  EXPECT_EQ(z * z, Scalar(1));
}

TEST(Scalars, ZetaPowerExamples) {
  EXPECT_EQ(zeta_power(3, 3), Scalar(1));
  EXPECT_EQ(zeta_power(2, 5), Scalar(-1));
  EXPECT_EQ(zeta_power(3, 2), Scalar(-1) - Scalar::zeta(3));
}

TEST(Scalars, ZetaPowerPeriodic) {
  for (int m = 1; m <= 3; ++m)
    for (long e = -100; e <= 100; ++e) {
      long r = ((e % m) + m) % m;
      ASSERT_EQ(zeta_power(m, e), zeta_power(m, r)) << m << " " << e;
      ASSERT_EQ(zeta_power(m, e), Scalar::zeta(m).pow(e));
    }
}

TEST(Scalars, ArithOps) {
  Scalar x = parse_scalar("1/2+1*z", 3), y = parse_scalar("3", 3);
  EXPECT_EQ(scalar_arith(x, y, Op::add), x + y);
  EXPECT_EQ(scalar_arith(x, y, Op::div) * y, x);
  EXPECT_THROW(scalar_arith(x, Scalar(0).with_order(3), Op::div), std::domain_error);
  EXPECT_THROW(scalar_arith(x, parse_scalar("3", 2), Op::add), std::invalid_argument);
}

TEST(ScalarsProperty, FieldAxiomsAgainstMatrixModel) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    Scalar x = random_scalar(rng, 3), y = random_scalar(rng, 3), w = random_scalar(rng, 3);
    ASSERT_EQ((x * y) * w, x * (y * w));
    ASSERT_EQ(x * (y + w), x * y + x * w);
    ASSERT_EQ(x * y, y * x);
    ASSERT_EQ(model(x * y), model(x) * model(y));
    ASSERT_EQ(model(x + y), model(x) + model(y));
    if (!x.is_zero()) {
      ASSERT_EQ(x * x.inverse(), Scalar(1));
      ASSERT_EQ(model(x.inverse()) * model(x), model(Scalar(1)));
    }
  }
}

TEST(ScalarsProperty, RationalFieldAxioms) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Scalar x = random_scalar(rng, 1), y = random_scalar(rng, 1);
    ASSERT_TRUE((x * y).is_rational());
    ASSERT_EQ(x - y + y, x);
    if (!y.is_zero()) ASSERT_EQ(x / y * y, x);
  }
}

TEST(ScalarsProperty, CanonicalFormRoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    int m = 1 + static_cast<int>(rng() % 3);
    Scalar x = random_scalar(rng, m == 3 ? 3 : 1).with_order(m);
    Scalar back = parse_scalar(x.str(), m);
    ASSERT_EQ(back, x) << x.str();
    ASSERT_EQ(back.str(), x.str());
    ASSERT_EQ(back.hash(), x.hash());
  }
  // equal values built differently normalize to the same text
  Scalar a = Scalar(3, make_rational(2, 4), Rational(0));
  Scalar b = parse_scalar("1/2", 3);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Scalars, ParseErrors) {
  EXPECT_THROW(parse_scalar("1/0", 3), std::exception);
  EXPECT_THROW(parse_scalar("abc", 3), std::exception);
  EXPECT_THROW(parse_scalar("", 3), std::exception);
}
