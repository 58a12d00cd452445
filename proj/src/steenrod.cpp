#include "ellcoop/steenrod.hpp"

#include <functional>
#include <optional>
#include <stdexcept>

namespace ellcoop {

namespace {

// Residue in (-p/2, p/2).
Rational balanced(const Rational& c, unsigned long p)
{
    Rational r = reduce_mod_p(c, p);
    if (2 * r > Rational(p))
        r -= Rational(p);
    return r;
}

Element balanced(const Element& a, unsigned long p)
{
    Element::Terms terms;
    for (const auto& [m, c] : a.terms()) {
        Rational r = balanced(c, p);
        if (r != 0)
            terms.emplace(m, r);
    }
    return Element(a.table(), std::move(terms));
}

long upow(unsigned long p, int k)
{
    long r = 1;
    for (int i = 0; i < k; ++i)
        r *= static_cast<long>(p);
    return r;
}

int parity_of(const GeneratorTable& table, const Monomial& m)
{
    int odd = 0;
    for (std::size_t i = 0; i < m.exponents().size(); ++i)
        if (table[i].parity == Parity::Odd)
            odd += static_cast<int>(m.exponents()[i]);
    return odd & 1;
}

}  // namespace

SteenrodAlgebra::SteenrodAlgebra(unsigned long p, int degree_bound) : p_(p), bound_(degree_bound)
{
    require_odd_prime(p);
    auto table = std::make_shared<GeneratorTable>();
    for (int n = 1; 2 * upow(p, n) - 2 <= degree_bound; ++n, ++zetas_)
        table->add({"z" + std::to_string(n), static_cast<int>(2 * upow(p, n) - 2), Parity::Even, 0});
    for (int n = 0; 2 * upow(p, n) - 1 <= degree_bound; ++n, ++taus_)
        table->add({"t" + std::to_string(n), static_cast<int>(2 * upow(p, n) - 1), Parity::Odd, 0});
    table_ = table;
}

Element SteenrodAlgebra::zeta(int n) const
{
    if (n == 0)
        return Element::constant(table_, 1);
    if (n < 0 || n > zetas_)
        throw std::out_of_range("zeta_" + std::to_string(n) + " outside the degree bound");
    return Element::generator(table_, "z" + std::to_string(n));
}

Element SteenrodAlgebra::tau(int n) const
{
    if (n < 0 || n >= taus_)
        throw std::out_of_range("taubar_" + std::to_string(n) + " outside the degree bound");
    return Element::generator(table_, "t" + std::to_string(n));
}

Element SteenrodAlgebra::tau_product(const std::vector<int>& indices) const
{
    Element r = Element::constant(table_, 1);
    for (int i : indices)
        r = r * tau(i);
    return r;
}

Element SteenrodAlgebra::reduce(const Element& a) const
{
    return balanced(a, p_);
}

bool SteenrodAlgebra::in_b(const Element& a) const
{
    const std::size_t t0 = table_->index_of("t0");
    const std::size_t t1 = table_->index_of("t1");
    for (const auto& [m, c] : a.terms())
        if (m.exponent(t0) || m.exponent(t1))
            return false;
    return true;
}

Tensor::Tensor(TablePtr table, std::size_t arity, unsigned long p) : table_(std::move(table)), arity_(arity), p_(p) {}

void Tensor::add(const Key& key, const Rational& c)
{
    if (key.size() != arity_)
        throw std::invalid_argument("tensor key has wrong arity");
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted)
        it->second += c;
    it->second = balanced(it->second, p_);
    if (it->second == 0)
        terms_.erase(it);
}

Tensor& Tensor::operator+=(const Tensor& other)
{
    for (const auto& [k, c] : other.terms_)
        add(k, c);
    return *this;
}

Tensor Tensor::operator*(const Tensor& other) const
{
    if (arity_ != other.arity_ || table_ != other.table_)
        throw std::invalid_argument("tensor product of incompatible tensors");
    Tensor r(table_, arity_, p_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : other.terms_) {
            int sign = 1;
            // (-1)^{|a_i||b_j|} for i > j.
            for (std::size_t i = 0; i < arity_; ++i)
                if (parity_of(*table_, ka[i]))
                    for (std::size_t j = 0; j < i; ++j)
                        if (parity_of(*table_, kb[j]))
                            sign = -sign;
            Key key(arity_);
            bool zero = false;
            for (std::size_t i = 0; i < arity_ && !zero; ++i) {
                const int s = multiply_monomials(*table_, ka[i], kb[i], key[i]);
                if (s == 0)
                    zero = true;
                sign *= s;
            }
            if (zero)
                continue;
            r.add(key, Rational(ca * cb * sign));
        }
    }
    return r;
}

std::string Tensor::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string s;
    for (const auto& [k, c] : terms_) {
        if (!s.empty())
            s += " + ";
        s += ellcoop::to_string(c);
        for (std::size_t i = 0; i < k.size(); ++i)
            s += (i ? " (x) " : "*") + monomial_to_string(*table_, k[i]);
    }
    return s;
}

namespace {

Tensor generator_coaction(const SteenrodAlgebra& alg, std::size_t index)
{
    const auto& table = *alg.table();
    const std::string& name = table[index].name;
    const int n = std::stoi(name.substr(1));
    Tensor r(alg.table(), 2, alg.p());
    auto mono = [&](const Element& e) {
        if (e.size() != 1)
            throw std::logic_error("expected a monomial");
        return e.terms().begin()->first;
    };
    if (name[0] == 'z') {
        for (int i = 0; i <= n; ++i)
            r.add({mono(alg.zeta(i)), mono(alg.zeta(n - i).pow(static_cast<unsigned long>(upow(alg.p(), i))))}, 1);
    }
    else {
        r.add({Monomial(), mono(alg.tau(n))}, 1);
        for (int i = 0; i <= n; ++i)
            r.add({mono(alg.tau(i)), mono(alg.zeta(n - i).pow(static_cast<unsigned long>(upow(alg.p(), i))))}, 1);
    }
    return r;
}

Tensor monomial_coaction(const SteenrodAlgebra& alg, const Monomial& m, std::vector<std::optional<Tensor>>& cache)
{
    Tensor r(alg.table(), 2, alg.p());
    r.add({Monomial(), Monomial()}, 1);
    for (std::size_t i = 0; i < m.exponents().size(); ++i) {
        for (std::uint32_t e = 0; e < m.exponents()[i]; ++e) {
            if (!cache[i])
                cache[i] = generator_coaction(alg, i);
            r = r * *cache[i];
        }
    }
    return r;
}

}  // namespace

Tensor coaction(const SteenrodAlgebra& alg, const Element& x)
{
    if (x.table() != alg.table())
        throw std::invalid_argument("coaction: element not over the Steenrod table");
    std::vector<std::optional<Tensor>> cache(alg.table()->size());
    Tensor r(alg.table(), 2, alg.p());
    for (const auto& [m, c] : x.terms()) {
        Tensor t = monomial_coaction(alg, m, cache);
        for (const auto& [k, v] : t.terms())
            r.add(k, Rational(v * c));
    }
    return r;
}

Tensor apply_coaction(const SteenrodAlgebra& alg, const Tensor& t, std::size_t position)
{
    if (position >= t.arity())
        throw std::out_of_range("apply_coaction: position out of range");
    std::vector<std::optional<Tensor>> cache(alg.table()->size());
    Tensor r(alg.table(), t.arity() + 1, alg.p());
    for (const auto& [key, c] : t.terms()) {
        const Tensor psi = monomial_coaction(alg, key[position], cache);
        for (const auto& [k2, v] : psi.terms()) {
            Tensor::Key out;
            for (std::size_t i = 0; i < key.size(); ++i) {
                if (i == position) {
                    out.push_back(k2[0]);
                    out.push_back(k2[1]);
                }
                else {
                    out.push_back(key[i]);
                }
            }
            r.add(out, Rational(c * v));
        }
    }
    return r;
}

Tensor as_tensor(const SteenrodAlgebra& alg, const Element& x)
{
    Tensor r(alg.table(), 1, alg.p());
    for (const auto& [m, c] : x.terms())
        r.add({m}, c);
    return r;
}

Element counit_left(const SteenrodAlgebra& alg, const Tensor& t)
{
    if (t.arity() != 2)
        throw std::invalid_argument("counit_left expects a 2-tensor");
    Element::Terms terms;
    for (const auto& [k, c] : t.terms())
        if (k[0].is_one())
            terms.emplace(k[1], c);
    return Element(alg.table(), std::move(terms));
}

namespace {

ECoaction project(const SteenrodAlgebra& alg, const Tensor& psi)
{
    const TablePtr& table = alg.table();
    const Monomial a = Monomial::generator(table->index_of("t0"));
    const Monomial b = Monomial::generator(table->index_of("t1"));
    Monomial ab;
    multiply_monomials(*table, a, b, ab);
    Element::Terms one, alpha, beta, beta_alpha;
    for (const auto& [k, c] : psi.terms()) {
        if (k[0].is_one())
            one.emplace(k[1], c);
        else if (k[0] == a)
            alpha.emplace(k[1], c);
        else if (k[0] == b)
            beta.emplace(k[1], c);
        else if (k[0] == ab)  // stored as taubar_0 taubar_1 = alpha beta = -beta alpha
            beta_alpha.emplace(k[1], balanced(Rational(-c), alg.p()));
    }
    return {Element(table, std::move(one)), Element(table, std::move(alpha)), Element(table, std::move(beta)),
            Element(table, std::move(beta_alpha))};
}

}  // namespace

ECoaction e_coaction(const SteenrodAlgebra& alg, const Element& x)
{
    if (!alg.in_b(x))
        throw std::invalid_argument("e_coaction: element is not in B_*");
    return project(alg, coaction(alg, x));
}

Element q_action(const SteenrodAlgebra& alg, int i, const Element& x)
{
    if (i != 0 && i != 1)
        throw std::invalid_argument("q_action: only Q_0 and Q_1 are supported");
    const TablePtr& table = alg.table();
    std::vector<Element> values;
    for (std::size_t g = 0; g < table->size(); ++g) {
        const ECoaction e = project(alg, coaction(alg, Element::monomial(table, Monomial::generator(g))));
        values.push_back(i == 0 ? e.alpha : e.beta);
    }
    Element result(table);
    for (const auto& [m, c] : x.terms()) {
        // Expand the monomial as an ordered product of generators.
        std::vector<std::size_t> factors;
        for (std::size_t g = 0; g < m.exponents().size(); ++g)
            for (std::uint32_t e = 0; e < m.exponents()[g]; ++e)
                factors.push_back(g);
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (values[factors[j]].is_zero())
                continue;
            Element prefix = Element::constant(table, c);
            int odd = 0;
            for (std::size_t k = 0; k < j; ++k) {
                prefix = prefix * Element::monomial(table, Monomial::generator(factors[k]));
                if ((*table)[factors[k]].parity == Parity::Odd)
                    ++odd;
            }
            Element term = prefix * values[factors[j]];
            for (std::size_t k = j + 1; k < factors.size(); ++k)
                term = term * Element::monomial(table, Monomial::generator(factors[k]));
            if (odd & 1)
                result -= term;
            else
                result += term;
        }
    }
    return alg.reduce(result);
}

ParallelogramBottom parallelogram_bottom(const SteenrodAlgebra& alg, const std::vector<int>& indices)
{
    if (indices.empty())
        throw std::invalid_argument("parallelogram_bottom needs at least one index");
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 2)
            throw std::invalid_argument("parallelogram_bottom: indices must be at least 2");
        if (k && indices[k] <= indices[k - 1])
            throw std::invalid_argument("parallelogram_bottom: indices must be strictly increasing");
    }
    const Element x = alg.tau_product(indices);
    const Element derivation = q_action(alg, 1, q_action(alg, 0, x));
    Element closed(alg.table());
    const unsigned long p = alg.p();
    for (std::size_t r = 1; r < indices.size(); ++r) {
        for (std::size_t t = 0; t < r; ++t) {
            std::vector<int> rest;
            for (std::size_t k = 0; k < indices.size(); ++k)
                if (k != r && k != t)
                    rest.push_back(indices[k]);
            const Element bracket = alg.zeta(indices[r]) * alg.zeta(indices[t] - 1).pow(p) -
                                    alg.zeta(indices[t]) * alg.zeta(indices[r] - 1).pow(p);
            // (-1)^{r+t} with 1-based positions.
            const Element term = bracket * alg.tau_product(rest);
            if ((r + t) % 2 == 0)
                closed += term;
            else
                closed -= term;
        }
    }
    closed = alg.reduce(closed);
    ParallelogramBottom out{derivation, closed, 1};
    if (derivation == closed)
        out.sign = 1;
    else if (derivation == alg.reduce(-closed))
        out.sign = -1;
    else
        throw std::logic_error("Q1Q0 derivation and closed form differ by more than a sign");
    return out;
}

std::vector<TorsionClass> torsion_basis(unsigned long p, int max_degree)
{
    const SteenrodAlgebra alg(p, max_degree + 2 * static_cast<int>(p));
    const TablePtr& table = alg.table();
    // Candidate index sets: subsets of {2, ..., tau_count-1} with |I| >= 2 and
    // deg Q1Q0(taubar_I) <= max_degree.
    std::vector<int> pool;
    for (int n = 2; n < alg.tau_count(); ++n)
        pool.push_back(n);
    std::vector<std::pair<std::vector<int>, Element>> bottoms;
    const int shift = 2 * static_cast<int>(p);
    std::vector<int> current;
    auto tau_degree = [&](int n) { return static_cast<int>(2 * upow(p, n) - 1); };
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int degree) {
        if (current.size() >= 2 && degree - shift <= max_degree) {
            Element b = parallelogram_bottom(alg, current).derivation;
            if (!b.is_zero())
                bottoms.emplace_back(current, std::move(b));
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            const int d = degree + tau_degree(pool[i]);
            // Degrees only grow; every extension needs d - shift <= max_degree.
            if (d - shift > max_degree)
                break;
            current.push_back(pool[i]);
            rec(i + 1, d);
            current.pop_back();
        }
    };
    rec(0, 0);

    // Bucket candidates by degree.
    std::map<int, std::vector<TorsionClass>> by_degree;
    for (const auto& [idx, b] : bottoms) {
        const int db = b.bidegree()->internal;
        for (int d = 0; db + d <= max_degree; ++d) {
            for (const auto& m : monomial_basis(*table, 0, d)) {
                bool zeta_only = true;
                for (std::size_t g = 0; g < m.exponents().size(); ++g)
                    if (m.exponents()[g] && (*table)[g].parity == Parity::Odd)
                        zeta_only = false;
                if (!zeta_only)
                    continue;
                Element e = alg.reduce(Element::monomial(table, m) * b);
                if (!e.is_zero())
                    by_degree[db + d].push_back({db + d, idx, m, std::move(e)});
            }
        }
    }

    std::vector<TorsionClass> out;
    for (auto& [degree, candidates] : by_degree) {
        // Incremental Gaussian elimination over F_p; rows keyed by pivot monomial.
        std::vector<std::pair<Monomial, Element::Terms>> rows;
        for (auto& cand : candidates) {
            Element::Terms v = cand.element.terms();
            for (const auto& [pivot, row] : rows) {
                auto it = v.find(pivot);
                if (it == v.end())
                    continue;
                const Rational f = it->second;
                for (const auto& [m, c] : row) {
                    auto [jt, inserted] = v.emplace(m, 0);
                    jt->second = balanced(Rational(jt->second - f * c), p);
                    if (jt->second == 0)
                        v.erase(jt);
                }
            }
            if (v.empty())
                continue;
            const Monomial pivot = v.rbegin()->first;
            const Rational inv = reduce_mod_p(Rational(1 / v.rbegin()->second), p);
            for (auto& [m, c] : v)
                c = balanced(Rational(c * inv), p);
            rows.emplace_back(pivot, std::move(v));
            out.push_back(std::move(cand));
        }
    }
    return out;
}

nlohmann::json to_json(const std::vector<TorsionClass>& basis, unsigned long p, int max_degree)
{
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : basis) {
        const GeneratorTable& table = *c.element.table();
        classes.push_back({{"degree", c.degree},
                           {"indices", c.indices},
                           {"multiplier", monomial_to_string(table, c.multiplier)},
                           {"element", c.element.to_string()}});
    }
    return {{"p", p}, {"max_degree", max_degree}, {"count", basis.size()}, {"classes", classes}};
}

}  // namespace ellcoop
