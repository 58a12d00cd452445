#include "ellcoop/scalars.hpp"

#include <stdexcept>

namespace ellcoop {

std::string Valuation::to_string() const
{
    return infinite ? std::string("inf") : std::to_string(value);
}

bool is_prime(unsigned long n)
{
    if (n < 2)
        return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

void require_odd_prime(unsigned long p)
{
    if (p == 2 || !is_prime(p))
        throw std::invalid_argument("expected an odd prime, got " + std::to_string(p));
}

long valuation_of_integer(const Integer& n, unsigned long p)
{
    if (n == 0)
        throw std::domain_error("valuation of zero integer");
    Integer m = abs(n);
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

Valuation valuation(const Rational& q, unsigned long p)
{
    if (!is_prime(p))
        throw std::invalid_argument("valuation: " + std::to_string(p) + " is not prime");
    if (q == 0)
        return Valuation::infinity();
    const Integer num = q.get_num();
    const Integer den = q.get_den();
    if (mpz_divisible_ui_p(num.get_mpz_t(), p))
        return {valuation_of_integer(num, p), false};
    if (mpz_divisible_ui_p(den.get_mpz_t(), p))
        return {-valuation_of_integer(den, p), false};
    return {0, false};
}

bool is_p_integral(const Rational& q, unsigned long p)
{
    if (!is_prime(p))
        throw std::invalid_argument("is_p_integral: " + std::to_string(p) + " is not prime");
    return !mpz_divisible_ui_p(q.get_den_mpz_t(), p);
}

Rational reduce_mod_p(const Rational& q, unsigned long p)
{
    if (mpz_divisible_ui_p(q.get_den_mpz_t(), p))
        throw std::domain_error("reduce_mod_p: " + to_string(q) + " is not p-integral");
    const Integer modulus = p;
    Integer num = q.get_num();
    Integer den = q.get_den();
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
    Integer r = num * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    return Rational(r);
}

Integer ipow(unsigned long base, unsigned long exp)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

Rational power_of(unsigned long p, long k)
{
    if (k >= 0)
        return Rational(ipow(p, static_cast<unsigned long>(k)));
    return Rational(Integer(1), ipow(p, static_cast<unsigned long>(-k)));
}

Integer binomial(unsigned long n, unsigned long k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

long legendre_factorial_valuation(unsigned long n, unsigned long p)
{
    long v = 0;
    for (unsigned long q = p; q <= n; q *= p) {
        v += static_cast<long>(n / q);
        if (q > n / p)
            break;
    }
    return v;
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    bool negative = false;
    std::string_view body = s;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational q;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed rational: " + std::string(text));
        Integer d{std::string(den), 10};
        if (d == 0)
            throw std::invalid_argument("zero denominator: " + std::string(text));
        q = Rational(Integer(std::string(num), 10), d);
    }
    else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            throw std::invalid_argument("malformed decimal: " + std::string(text));
        if (frac.empty() && whole.empty())
            throw std::invalid_argument("malformed decimal: " + std::string(text));
        Integer scaled{std::string(whole) + std::string(frac), 10};
        q = Rational(scaled, ipow(10, frac.size()));
    }
    else {
        if (!all_digits(body))
            throw std::invalid_argument("malformed integer: " + std::string(text));
        q = Rational(Integer(std::string(body), 10));
    }
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q)
{
    return q.get_str();
}

}  // namespace ellcoop
