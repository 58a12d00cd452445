#include "ellcoop/scalars.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace ellcoop;
using ellcoop::testing::random_rational;

TEST(Valuation, Examples)
{
    EXPECT_EQ(valuation(Rational(18), 3), (Valuation{2, false}));
    EXPECT_EQ(valuation(Rational(5, 3), 3), (Valuation{-1, false}));
    EXPECT_TRUE(valuation(Rational(0), 5).infinite);
    EXPECT_THROW(valuation(Rational(4), 6), std::invalid_argument);
}

TEST(Valuation, Integrality)
{
    EXPECT_TRUE(is_p_integral(Rational(7, 4), 3));
    EXPECT_FALSE(is_p_integral(Rational(1, 3), 3));
    EXPECT_TRUE(is_p_integral(Rational(0), 3));
}

TEST(Valuation, AdditiveAndUltrametric)
{
    for (int i = 0; i < 10000; ++i) {
        const unsigned long p = i % 2 ? 3 : 5;
        const Rational a = random_rational(500, 500);
        const Rational b = random_rational(500, 500);
        const Valuation va = valuation(a, p);
        const Valuation vb = valuation(b, p);
        EXPECT_EQ(valuation(Rational(a * b), p), va + vb);
        EXPECT_GE(valuation(Rational(a + b), p), std::min(va, vb));
    }
}

TEST(Rational, FieldAxiomsAndCanonicalForm)
{
    for (int i = 0; i < 2000; ++i) {
        const Rational a = random_rational();
        const Rational b = random_rational();
        const Rational c = random_rational();
        EXPECT_EQ(Rational((a + b) + c), Rational(a + (b + c)));
        EXPECT_EQ(Rational(a * (b + c)), Rational(a * b + a * c));
        if (a != 0)
            EXPECT_EQ(Rational(a * (1 / a)), Rational(1));
        Rational d = a;
        d.canonicalize();
        EXPECT_EQ(d, a);
        EXPECT_EQ(parse_rational(to_string(a)), a);
    }
}

TEST(Rational, ParseAndPrint)
{
    EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
    EXPECT_EQ(to_string(parse_rational("-0.25")), "-1/4");
    EXPECT_EQ(to_string(parse_rational("0/7")), "0");
    EXPECT_EQ(to_string(parse_rational("010/09")), "10/9");
    EXPECT_EQ(to_string(parse_rational("0.125")), "1/8");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
    EXPECT_THROW(parse_rational("."), std::invalid_argument);
}

TEST(Rational, ReductionModP)
{
    EXPECT_EQ(reduce_mod_p(Rational(-1), 3), Rational(2));
    EXPECT_EQ(reduce_mod_p(Rational(1, 2), 3), Rational(2));
    EXPECT_THROW(reduce_mod_p(Rational(1, 3), 3), std::domain_error);
}

TEST(Scalars, FactorialValuation)
{
    // Brute force against the product.
    for (unsigned long p : {3ul, 5ul, 7ul}) {
        Integer f = 1;
        for (unsigned long n = 1; n <= 60; ++n) {
            f *= n;
            EXPECT_EQ(legendre_factorial_valuation(n, p), valuation_of_integer(f, p)) << n << " " << p;
        }
    }
    EXPECT_EQ(binomial(9, 3), 84);
    EXPECT_EQ(ipow(3, 4), 81);
    EXPECT_EQ(power_of(3, -2), Rational(1, 9));
}

TEST(Scalars, OddPrimeCheck)
{
    EXPECT_NO_THROW(require_odd_prime(3));
    EXPECT_THROW(require_odd_prime(2), std::invalid_argument);
    EXPECT_THROW(require_odd_prime(9), std::invalid_argument);
}
