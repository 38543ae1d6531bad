#include <gtest/gtest.h>

#include <random>

#include "sunits/integer.hpp"

using namespace sunits;

namespace {

std::map<Integer, unsigned> trial_factor(long n) {
  std::map<Integer, unsigned> out;
  if (n < 0) n = -n;
  for (long q = 2; q * q <= n; ++q)
    while (n % q == 0) {
      ++out[Integer(q)];
      n /= q;
    }
  if (n > 1) ++out[Integer(n)];
  return out;
}

}  // namespace

TEST(Integer, ParseRational) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational(" 4/-8 "), Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Integer, ToString) {
  EXPECT_EQ(to_string(Rational(3, 2)), "3/2");
  EXPECT_EQ(to_string(Rational(-4)), "-4");
}

TEST(Integer, Valuation) {
  EXPECT_EQ(valuation(Rational(12), Integer(2)), 2);
  EXPECT_EQ(valuation(Rational(5, 24), Integer(2)), -3);
  EXPECT_EQ(valuation(Rational(7), Integer(3)), 0);
}

TEST(Integer, FactorMatchesTrialDivision) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    long n = static_cast<long>(rng() % 2000000) + 2;
    EXPECT_EQ(factor(Integer(n)), trial_factor(n)) << n;
  }
}

TEST(Integer, FactorLargeSemiprime) {
  Integer p("1000000007"), q("998244353");
  auto f = factor(p * q * 8);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[Integer(2)], 3u);
  EXPECT_EQ(f[p], 1u);
  EXPECT_EQ(f[q], 1u);
}

TEST(Integer, PrimesUpTo) {
  auto ps = primes_up_to(100);
  EXPECT_EQ(ps.size(), 25u);
  EXPECT_EQ(ps.back(), 97u);
  EXPECT_EQ(next_prime(Integer(97)), Integer(101));
}

TEST(Integer, Divisors) {
  auto d = divisors(Integer(12));
  EXPECT_EQ(d, (std::vector<Integer>{1, 2, 3, 4, 6, 12}));
}

TEST(Integer, ExactRoot) {
  EXPECT_EQ(exact_root(Integer(7776), 5), Integer(6));
  EXPECT_FALSE(exact_root(Integer(7777), 5).has_value());
  EXPECT_EQ(exact_root(Rational(-32, 243), 5), Rational(-2, 3));
  EXPECT_FALSE(exact_root(Rational(-4), 2).has_value());
}

TEST(Integer, Powers) {
  EXPECT_EQ(ipow(Integer(3), 4), Integer(81));
  EXPECT_EQ(rpow(Rational(2, 3), -2), Rational(9, 4));
}
