#include <gtest/gtest.h>

#include <random>

#include "simcat/dyadic.hpp"
#include "simcat/error.hpp"

using simcat::Dyadic;

TEST(Dyadic, CanonicalForm) {
  Dyadic a(6, 2);  // 6/4 = 3/2
  EXPECT_EQ(a.numerator(), 3);
  EXPECT_EQ(a.exponent(), 1);
  Dyadic z(0, 5);
  EXPECT_EQ(z.exponent(), 0);
  EXPECT_EQ(z, Dyadic(0));
  EXPECT_EQ(Dyadic(4, 2), Dyadic(1));
  EXPECT_EQ(Dyadic(3, -2), Dyadic(12));
}

TEST(Dyadic, Arithmetic) {
  Dyadic half(1, 1);
  Dyadic quarter(1, 2);
  EXPECT_EQ(half + quarter, Dyadic(3, 2));
  EXPECT_EQ(half - quarter, quarter);
  EXPECT_EQ(half * quarter, Dyadic(1, 3));
  EXPECT_EQ(-half + half, Dyadic(0));
  EXPECT_EQ(half.ldexp(1), Dyadic(1));
  EXPECT_EQ(Dyadic(3).ldexp(-3), Dyadic(3, 3));
  EXPECT_EQ(Dyadic::pow2(-2), quarter);
  EXPECT_EQ(Dyadic::pow2(3), Dyadic(8));
}

TEST(Dyadic, Ordering) {
  EXPECT_LT(Dyadic(1, 2), Dyadic(1, 1));
  EXPECT_LT(Dyadic(-1), Dyadic(-1, 1));
  EXPECT_GT(Dyadic(5, 2), Dyadic(1));
  EXPECT_EQ(Dyadic(-3, 1).sign(), -1);
}

TEST(Dyadic, ScaledTo) {
  EXPECT_EQ(Dyadic(3, 2).scaled_to(4), 12);
  EXPECT_EQ(Dyadic(-1).scaled_to(3), -8);
}

TEST(Dyadic, TextRoundTrip) {
  EXPECT_EQ(Dyadic(3, 2).to_string(), "3/2^2");
  EXPECT_EQ(Dyadic(-5).to_string(), "-5");
  EXPECT_EQ(Dyadic::parse("3/2^2"), Dyadic(3, 2));
  EXPECT_EQ(Dyadic::parse("-6/8"), Dyadic(-3, 2));
  EXPECT_EQ(Dyadic::parse("7"), Dyadic(7));
  EXPECT_THROW(Dyadic::parse("1/3"), simcat::Error);
  EXPECT_THROW(Dyadic::parse("x"), simcat::Error);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Dyadic d(static_cast<std::int64_t>(rng() % 2001) - 1000, static_cast<int>(rng() % 20));
    EXPECT_EQ(Dyadic::parse(d.to_string()), d) << d.to_string();
  }
}

TEST(Dyadic, OverflowIsReported) {
  Dyadic big(std::int64_t{1} << 62);
  EXPECT_THROW(big * big, simcat::OverflowError);
  EXPECT_THROW(big + big, simcat::OverflowError);
}

TEST(Dyadic, FieldLawsOnSamples) {
  std::mt19937_64 rng(11);
  auto sample = [&] {
    return Dyadic(static_cast<std::int64_t>(rng() % 201) - 100, static_cast<int>(rng() % 8));
  };
  for (int i = 0; i < 300; ++i) {
    Dyadic a = sample(), b = sample(), c = sample();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a - a, Dyadic(0));
  }
}
