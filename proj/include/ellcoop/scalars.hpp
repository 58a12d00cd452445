#pragma once

// Exact rational scalars with p-adic valuation. Z_(p) is the subset of
// Rational with non-negative valuation; F_p values are integer Rationals in
// [0, p) produced by reduce_mod_p.

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace ellcoop {

using Integer = mpz_class;
using Rational = mpq_class;

// Exponent of p in a rational number; infinite for zero.
struct Valuation
{
    long value = 0;
    bool infinite = false;

    static Valuation infinity() { return {0, true}; }

    bool operator==(const Valuation& other) const
    {
        return infinite == other.infinite && (infinite || value == other.value);
    }
    std::strong_ordering operator<=>(const Valuation& other) const
    {
        if (infinite || other.infinite)
            return infinite <=> other.infinite;
        return value <=> other.value;
    }
    Valuation operator+(const Valuation& other) const
    {
        if (infinite || other.infinite)
            return infinity();
        return {value + other.value, false};
    }
    std::string to_string() const;
};

bool is_prime(unsigned long n);
// Throws std::invalid_argument unless p is an odd prime.
void require_odd_prime(unsigned long p);

// Exponent of p in a nonzero integer (p need not be checked for primality).
long valuation_of_integer(const Integer& n, unsigned long p);

// Throws std::invalid_argument if p is not prime.
Valuation valuation(const Rational& q, unsigned long p);
bool is_p_integral(const Rational& q, unsigned long p);

// Least non-negative residue of a p-integral rational; throws std::domain_error
// if p divides the denominator.
Rational reduce_mod_p(const Rational& q, unsigned long p);

// p^k as a Rational, k may be negative.
Rational power_of(unsigned long p, long k);
Integer binomial(unsigned long n, unsigned long k);
// Legendre's formula for the exponent of p in n!.
long legendre_factorial_valuation(unsigned long n, unsigned long p);
Integer ipow(unsigned long base, unsigned long exp);

// Accepts "12", "-3/4" and "1.25". Throws std::invalid_argument on bad input.
Rational parse_rational(std::string_view text);
// "a" for integers, "a/b" otherwise; parse_rational inverts it exactly.
std::string to_string(const Rational& q);

}  // namespace ellcoop
