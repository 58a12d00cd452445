#include "ellcoop/bp.hpp"

#include <stdexcept>

namespace ellcoop {

unsigned long geometric_exponent(unsigned long p, unsigned n)
{
    unsigned long e = 0;
    unsigned long q = 1;
    for (unsigned i = 0; i < n; ++i) {
        e += q;
        q *= p;
    }
    return e;
}

namespace {

unsigned long upow(unsigned long p, unsigned k)
{
    unsigned long r = 1;
    for (unsigned i = 0; i < k; ++i)
        r *= p;
    return r;
}

TablePtr make_table(const std::vector<std::pair<std::string, int>>& gens)
{
    auto t = std::make_shared<GeneratorTable>();
    for (const auto& [name, degree] : gens)
        t->add({name, degree, Parity::Even, 0});
    return t;
}

}  // namespace

FormulaContext::FormulaContext(unsigned long p, unsigned max_index) : p_(p), max_index_(max_index)
{
    require_odd_prime(p);
    if (max_index < 1)
        throw std::invalid_argument("max_index must be at least 1");
    std::vector<std::pair<std::string, int>> l, v, t;
    for (unsigned k = 1; k <= max_index; ++k) {
        const int d = generator_degree(k);
        l.emplace_back("l" + std::to_string(k), d);
        v.emplace_back("v" + std::to_string(k), d);
        t.emplace_back("t" + std::to_string(k), d);
    }
    auto concat = [](auto a, const auto& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    bp_ = make_table(l);
    bp_v_ = make_table(v);
    bpbp_ = make_table(concat(l, t));
    bpbp_v_ = make_table(concat(v, t));
    ellbp_ = make_table(concat(std::vector<std::pair<std::string, int>>{{"u", u_degree()}}, t));
    const std::size_t slots = max_index + 1;
    hazewinkel_.resize(slots);
    ell_in_v_.resize(slots);
    eta_r_ell_.resize(slots);
    eta_r_v_.resize(slots);
    eta_r_v_integral_.resize(slots);
    ell_image_v_.resize(slots);
    ell_image_eta_.resize(slots);
}

unsigned FormulaContext::index_bound(unsigned long p, int max_degree)
{
    unsigned n = 1;
    while (2 * static_cast<long>(upow(p, n + 1)) - 2 <= max_degree)
        ++n;
    return n;
}

int FormulaContext::generator_degree(unsigned k) const
{
    return static_cast<int>(2 * upow(p_, k) - 2);
}

void FormulaContext::check_index(unsigned n, unsigned lo) const
{
    if (n < lo || n > max_index_)
        throw std::out_of_range("index " + std::to_string(n) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(max_index_) + "]");
}

Element FormulaContext::t(unsigned k, const TablePtr& table) const
{
    if (k == 0)
        return Element::constant(table, 1);
    return Element::generator(table, "t" + std::to_string(k));
}

Element FormulaContext::u() const
{
    return Element::generator(ellbp_, "u");
}

const Element& FormulaContext::hazewinkel(unsigned n) const
{
    check_index(n, 1);
    std::lock_guard lock(mutex_);
    if (!hazewinkel_[n]) {
        Element v = Element::generator(bp_, "l" + std::to_string(n)) * Rational(p_);
        for (unsigned j = 1; j < n; ++j)
            v -= Element::generator(bp_, "l" + std::to_string(j)) * hazewinkel(n - j).pow(upow(p_, j));
        hazewinkel_[n] = std::move(v);
    }
    return *hazewinkel_[n];
}

const Element& FormulaContext::ell_in_v(unsigned n) const
{
    check_index(n, 1);
    std::lock_guard lock(mutex_);
    if (!ell_in_v_[n]) {
        Element l = Element::generator(bp_v_, "v" + std::to_string(n));
        for (unsigned j = 1; j < n; ++j)
            l += ell_in_v(j) * Element::generator(bp_v_, "v" + std::to_string(n - j)).pow(upow(p_, j));
        l *= Rational(1, p_);
        ell_in_v_[n] = std::move(l);
    }
    return *ell_in_v_[n];
}

const Element& FormulaContext::eta_r_ell(unsigned n) const
{
    if (n > max_index_)
        throw std::out_of_range("index " + std::to_string(n) + " exceeds max_index");
    std::lock_guard lock(mutex_);
    if (!eta_r_ell_[n]) {
        Element e(bpbp_);
        for (unsigned j = 0; j <= n; ++j) {
            Element l = j == 0 ? Element::constant(bpbp_, 1) : Element::generator(bpbp_, "l" + std::to_string(j));
            e += l * t(n - j, bpbp_).pow(upow(p_, j));
        }
        eta_r_ell_[n] = std::move(e);
    }
    return *eta_r_ell_[n];
}

const Element& FormulaContext::eta_r_v(unsigned n) const
{
    check_index(n, 1);
    std::lock_guard lock(mutex_);
    if (!eta_r_v_[n]) {
        Element v = eta_r_ell(n) * Rational(p_);
        for (unsigned j = 1; j < n; ++j)
            v -= eta_r_ell(j) * eta_r_v(n - j).pow(upow(p_, j));
        eta_r_v_[n] = std::move(v);
    }
    return *eta_r_v_[n];
}

const Element& FormulaContext::eta_r_v_integral_form(unsigned n) const
{
    check_index(n, 1);
    std::lock_guard lock(mutex_);
    if (!eta_r_v_integral_[n]) {
        std::map<std::string, Element> assignment;
        for (unsigned k = 1; k <= max_index_; ++k) {
            assignment.emplace("l" + std::to_string(k), rebase(ell_in_v(k), bpbp_v_));
            assignment.emplace("t" + std::to_string(k), Element::generator(bpbp_v_, "t" + std::to_string(k)));
        }
        eta_r_v_integral_[n] = RingMap(bpbp_, bpbp_v_, assignment).apply(eta_r_v(n));
    }
    return *eta_r_v_integral_[n];
}

Element FormulaContext::sigma_ell(unsigned j) const
{
    return Element::monomial(ellbp_, Monomial::generator(0, static_cast<std::uint32_t>(geometric_exponent(p_, j))),
                             power_of(p_, -static_cast<long>(j)));
}

const Element& FormulaContext::ell_image_eta_r_ell(unsigned n) const
{
    if (n > max_index_)
        throw std::out_of_range("index " + std::to_string(n) + " exceeds max_index");
    std::lock_guard lock(mutex_);
    if (!ell_image_eta_[n]) {
        Element e(ellbp_);
        for (unsigned j = 0; j <= n; ++j)
            e += sigma_ell(j) * t(n - j, ellbp_).pow(upow(p_, j));
        ell_image_eta_[n] = std::move(e);
    }
    return *ell_image_eta_[n];
}

const Element& FormulaContext::ell_image_v(unsigned n) const
{
    check_index(n, 1);
    std::lock_guard lock(mutex_);
    if (!ell_image_v_[n]) {
        Element v = ell_image_eta_r_ell(n) * Rational(p_);
        for (unsigned j = 1; j < n; ++j)
            v -= ell_image_eta_r_ell(j) * ell_image_v(n - j).pow(upow(p_, j));
        if (!is_p_integral(v, p_))
            throw std::logic_error("ell(v" + std::to_string(n) + ") is not p-integral");
        ell_image_v_[n] = std::move(v);
    }
    return *ell_image_v_[n];
}

Element FormulaContext::ell_image_v_expanded_recursion(unsigned n) const
{
    check_index(n, 1);
    const Element u = this->u();
    const Element v1 = u + t(1, ellbp_) * Rational(p_);
    if (n == 1)
        return v1;
    std::vector<Element> lower{Element(ellbp_), v1};
    for (unsigned k = 2; k < n; ++k)
        lower.push_back(ell_image_v_expanded_recursion(k));
    const Element v1_top = v1.pow(upow(p_, n - 1));
    Element r = t(n, ellbp_) * Rational(p_) + u * t(n - 1, ellbp_).pow(p_) - v1_top * t(n - 1, ellbp_);
    for (unsigned i = 1; i + 1 <= n; ++i) {
        Element inner = u.pow(upow(p_, i)) * t(n - 1 - i, ellbp_).pow(upow(p_, i + 1)) -
                        v1_top * t(n - 1 - i, ellbp_).pow(upow(p_, i));
        r += u.pow(geometric_exponent(p_, i)) * inner * power_of(p_, -static_cast<long>(i));
    }
    for (unsigned i = 1; i + 2 <= n; ++i) {
        const Element power = lower[n - i].pow(upow(p_, i));
        r -= t(i, ellbp_) * power;
        for (unsigned j = 1; j <= i; ++j)
            r -= u.pow(geometric_exponent(p_, j)) * t(i - j, ellbp_).pow(upow(p_, j)) * power *
                 power_of(p_, -static_cast<long>(j));
    }
    return r;
}

std::pair<Element, Element> FormulaContext::correction_terms(unsigned n) const
{
    check_index(n, 2);
    const Element u = this->u();
    const Element lead = t(n, ellbp_) * Rational(p_) + u * t(n - 1, ellbp_).pow(p_) -
                         u.pow(upow(p_, n - 1)) * t(n - 1, ellbp_);
    const Element rest = ell_image_v(n) - lead;
    Element::Terms u_free, with_u;
    const std::size_t t_n = ellbp_->index_of("t" + std::to_string(n));
    for (const auto& [m, c] : rest.terms()) {
        if (m.exponent(t_n) != 0)
            throw std::logic_error("correction terms: remainder involves t" + std::to_string(n));
        (m.exponent(0) == 0 ? u_free : with_u).emplace(m, c);
    }
    Element s1 = Element(ellbp_, std::move(u_free)) * Rational(1, p_);
    auto s2 = divide_by_monomial(Element(ellbp_, std::move(with_u)), Monomial::generator(0));
    if (!s2 || !is_p_integral(s1, p_) || !is_p_integral(*s2, p_))
        throw std::logic_error("correction terms for n=" + std::to_string(n) + " are not p-integral");
    return {s1, *s2};
}

Element FormulaContext::ell_image_congruence_rhs(unsigned n) const
{
    check_index(n, 2);
    const Element u = this->u();
    const unsigned long top = upow(p_, n - 1);
    Element r = t(n, ellbp_) * Rational(p_) -
                t(1, ellbp_).pow(top) * t(n - 1, ellbp_) * Rational(ipow(p_, top)) +
                u * t(n - 1, ellbp_).pow(p_) - u.pow(top) * t(n - 1, ellbp_);
    for (unsigned i = 1; i + 2 <= n; ++i) {
        Element inner = u.pow(upow(p_, i)) * t(n - 1 - i, ellbp_).pow(upow(p_, i + 1)) -
                        u.pow(top) * t(n - 1 - i, ellbp_).pow(upow(p_, i));
        r += u.pow(geometric_exponent(p_, i)) * inner * power_of(p_, -static_cast<long>(i));
    }
    for (unsigned i = 1; i + 2 <= n; ++i) {
        const Element power = ell_image_v(n - i).pow(upow(p_, i));
        r -= t(i, ellbp_) * power;
        for (unsigned j = 1; j <= i; ++j)
            r -= u.pow(geometric_exponent(p_, j)) * t(i - j, ellbp_).pow(upow(p_, j)) * power *
                 power_of(p_, -static_cast<long>(j));
    }
    return r;
}

bool FormulaContext::in_pu_ideal(const Element& f) const
{
    if (f.table() != ellbp_)
        throw std::invalid_argument("in_pu_ideal expects an element of ell_*BP");
    for (const auto& [m, c] : f.terms()) {
        if (m.exponent(0) == 0)
            return false;
        if (valuation(c, p_) < Valuation{1, false})
            return false;
    }
    return true;
}

Element FormulaContext::reduced_w(unsigned n) const
{
    auto w = divide_by_monomial(reduce_mod_p(ell_image_v(n), p_), Monomial::generator(0));
    if (!w)
        throw std::logic_error("ell(v" + std::to_string(n) + ") mod p is not divisible by u");
    return *w;
}

UPower FormulaContext::rational_ell_n(unsigned n) const
{
    return {geometric_exponent(p_, n), -static_cast<long>(n)};
}

UPower FormulaContext::ell_monomial_image(const std::vector<unsigned>& exponents) const
{
    UPower r;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        const unsigned k = static_cast<unsigned>(i + 1);
        r.u_exponent += exponents[i] * geometric_exponent(p_, k);
        r.p_exponent -= static_cast<long>(exponents[i]) * k;
    }
    if (static_cast<unsigned long>(-r.p_exponent) > r.u_exponent)
        throw std::logic_error("l-monomial image has p-adic exponent beyond its u exponent");
    return r;
}

}  // namespace ellcoop
