#include "ellcoop/galg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ellcoop {

GeneratorTable::GeneratorTable(std::vector<Generator> gens)
{
    for (auto& g : gens)
        add(std::move(g));
}

std::size_t GeneratorTable::add(Generator g)
{
    if (g.name.empty())
        throw std::invalid_argument("generator name must be nonempty");
    if (index_.count(g.name))
        throw std::invalid_argument("duplicate generator name: " + g.name);
    if (g.parity == Parity::Even && g.degree <= 0 && g.homological_degree == 0)
        throw std::invalid_argument("even generator " + g.name + " needs positive degree");
    if (g.degree < 0 || g.homological_degree < 0)
        throw std::invalid_argument("negative degree for generator " + g.name);
    if (g.homological_degree > 0 && g.parity != Parity::Odd)
        throw std::invalid_argument("homological generators must be exterior: " + g.name);
    index_.emplace(g.name, gens_.size());
    gens_.push_back(std::move(g));
    return gens_.size() - 1;
}

std::optional<std::size_t> GeneratorTable::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t GeneratorTable::index_of(std::string_view name) const
{
    auto i = find(name);
    if (!i)
        throw std::invalid_argument("unknown generator: " + std::string(name));
    return *i;
}

Monomial::Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps))
{
    while (!exps_.empty() && exps_.back() == 0)
        exps_.pop_back();
}

Monomial Monomial::generator(std::size_t index, std::uint32_t exp)
{
    std::vector<std::uint32_t> e(index + 1, 0);
    e[index] = exp;
    return Monomial(std::move(e));
}

int Monomial::internal_degree(const GeneratorTable& table) const
{
    int d = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        d += static_cast<int>(exps_[i]) * table[i].degree;
    return d;
}

int Monomial::homological_degree(const GeneratorTable& table) const
{
    int d = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        d += static_cast<int>(exps_[i]) * table[i].homological_degree;
    return d;
}

bool Monomial::divides(const Monomial& other) const
{
    if (exps_.size() > other.exps_.size())
        return false;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] > other.exps_[i])
            return false;
    return true;
}

Monomial Monomial::cofactor_in(const Monomial& other) const
{
    std::vector<std::uint32_t> e = other.exps_;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        e[i] -= exps_[i];
    return Monomial(std::move(e));
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (auto e : m.exponents()) {
        h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

int multiply_monomials(const GeneratorTable& table, const Monomial& a, const Monomial& b, Monomial& out)
{
    const auto& ea = a.exponents();
    const auto& eb = b.exponents();
    std::vector<std::uint32_t> e(std::max(ea.size(), eb.size()), 0);
    int sign = 1;
    // Number of odd generators of a with index greater than the current one.
    int odd_after = 0;
    for (std::size_t i = 0; i < ea.size(); ++i)
        if (ea[i] && table[i].parity == Parity::Odd)
            ++odd_after;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const std::uint32_t x = i < ea.size() ? ea[i] : 0;
        const std::uint32_t y = i < eb.size() ? eb[i] : 0;
        if (table[i].parity == Parity::Odd) {
            if (x)
                --odd_after;
            if (x && y)
                return 0;
            if (y && (odd_after & 1))
                sign = -sign;
        }
        e[i] = x + y;
    }
    out = Monomial(std::move(e));
    return sign;
}

std::string monomial_to_string(const GeneratorTable& table, const Monomial& m)
{
    if (m.is_one())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < m.exponents().size(); ++i) {
        const auto e = m.exponents()[i];
        if (!e)
            continue;
        if (!s.empty())
            s += '*';
        s += table[i].name;
        if (e > 1)
            s += '^' + std::to_string(e);
    }
    return s;
}

Element::Element(TablePtr table) : table_(std::move(table))
{
    if (!table_)
        throw std::invalid_argument("element requires a generator table");
}

Element::Element(TablePtr table, Terms terms) : Element(std::move(table))
{
    for (auto& [m, c] : terms)
        if (c != 0)
            terms_.emplace(m, c);
}

Element Element::constant(TablePtr table, const Rational& c)
{
    Element e(std::move(table));
    if (c != 0)
        e.terms_.emplace(Monomial(), c);
    return e;
}

Element Element::generator(TablePtr table, std::string_view name)
{
    const auto i = table->index_of(name);
    return monomial(std::move(table), Monomial::generator(i), 1);
}

Element Element::monomial(TablePtr table, const Monomial& m, const Rational& c)
{
    Element e(std::move(table));
    if (c != 0)
        e.terms_.emplace(m, c);
    return e;
}

Rational Element::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<Bidegree> Element::bidegree() const
{
    std::optional<Bidegree> d;
    for (const auto& [m, c] : terms_) {
        Bidegree b{m.internal_degree(*table_), m.homological_degree(*table_)};
        if (d && *d != b)
            return std::nullopt;
        d = b;
    }
    return d;
}

int Element::max_internal_degree() const
{
    int d = -1;
    for (const auto& [m, c] : terms_)
        d = std::max(d, m.internal_degree(*table_));
    return d;
}

void Element::check_table(const Element& other) const
{
    if (table_ != other.table_)
        throw std::invalid_argument("elements over different generator tables");
}

Element& Element::operator+=(const Element& other)
{
    check_table(other);
    for (const auto& [m, c] : other.terms_) {
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

Element& Element::operator-=(const Element& other)
{
    check_table(other);
    for (const auto& [m, c] : other.terms_) {
        auto [it, inserted] = terms_.emplace(m, -c);
        if (!inserted) {
            it->second -= c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

Element& Element::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, x] : terms_)
        x *= c;
    return *this;
}

Element Element::operator-() const
{
    Element r = *this;
    for (auto& [m, x] : r.terms_)
        x = -x;
    return r;
}

Element operator*(const Element& a, const Element& b)
{
    a.check_table(b);
    const GeneratorTable& table = *a.table_;
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    Monomial m;
    Rational prod;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            const int sign = multiply_monomials(table, ma, mb, m);
            if (!sign)
                continue;
            prod = ca * cb;
            if (sign < 0)
                prod = -prod;
            auto [it, inserted] = acc.try_emplace(m, prod);
            if (!inserted)
                it->second += prod;
        }
    }
    Element r(a.table_);
    for (auto& [mon, c] : acc)
        if (c != 0)
            r.terms_.emplace(mon, std::move(c));
    return r;
}

bool Element::operator==(const Element& other) const
{
    return table_ == other.table_ && terms_ == other.terms_;
}

Element Element::pow(unsigned long n) const
{
    Element result = constant(table_, 1);
    Element base = *this;
    while (n) {
        if (n & 1)
            result = result * base;
        n >>= 1;
        if (n)
            base = base * base;
    }
    return result;
}

std::string Element::to_string() const
{
    if (terms_.empty())
        return "0";
    // Ascending (homological degree, internal degree, exponent vector).
    std::vector<const Terms::value_type*> order;
    for (const auto& term : terms_)
        order.push_back(&term);
    std::stable_sort(order.begin(), order.end(), [&](auto* x, auto* y) {
        const Bidegree bx{x->first.internal_degree(*table_), x->first.homological_degree(*table_)};
        const Bidegree by{y->first.internal_degree(*table_), y->first.homological_degree(*table_)};
        if (bx.homological != by.homological)
            return bx.homological < by.homological;
        return bx.internal < by.internal;
    });
    std::string s;
    bool first = true;
    for (const auto* term : order) {
        const auto& [m, c] = *term;
        Rational mag = abs(c);
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        first = false;
        if (m.is_one())
            s += ellcoop::to_string(mag);
        else if (mag == 1)
            s += monomial_to_string(*table_, m);
        else
            s += ellcoop::to_string(mag) + "*" + monomial_to_string(*table_, m);
    }
    return s;
}

Element truncate(const Element& a, int max_degree)
{
    Element::Terms kept;
    for (const auto& [m, c] : a.terms())
        if (m.internal_degree(*a.table()) <= max_degree)
            kept.emplace(m, c);
    return Element(a.table(), std::move(kept));
}

Element reduce_mod_p(const Element& a, unsigned long p)
{
    Element::Terms reduced;
    for (const auto& [m, c] : a.terms())
        reduced.emplace(m, reduce_mod_p(c, p));
    return Element(a.table(), std::move(reduced));
}

bool is_p_integral(const Element& a, unsigned long p)
{
    for (const auto& [m, c] : a.terms())
        if (!is_p_integral(c, p))
            return false;
    return true;
}

Valuation min_valuation(const Element& a, unsigned long p)
{
    Valuation v = Valuation::infinity();
    for (const auto& [m, c] : a.terms())
        v = std::min(v, valuation(c, p));
    return v;
}

Element rebase(const Element& a, const TablePtr& target)
{
    const auto& src = *a.table();
    // Only generators that occur need a counterpart in the target.
    std::vector<std::optional<std::size_t>> where(src.size());
    Element::Terms terms;
    for (const auto& [m, c] : a.terms()) {
        std::vector<std::uint32_t> e(target->size(), 0);
        for (std::size_t i = 0; i < m.exponents().size(); ++i) {
            if (m.exponents()[i] == 0)
                continue;
            if (!where[i])
                where[i] = target->index_of(src[i].name);
            e[*where[i]] = m.exponents()[i];
        }
        terms.emplace(Monomial(std::move(e)), c);
    }
    return Element(target, std::move(terms));
}

std::optional<Element> divide_by_monomial(const Element& a, const Monomial& m)
{
    Element::Terms terms;
    for (const auto& [mono, c] : a.terms()) {
        if (!m.divides(mono))
            return std::nullopt;
        terms.emplace(m.cofactor_in(mono), c);
    }
    return Element(a.table(), std::move(terms));
}

std::optional<Element> exact_quotient(const Element& a, const Element& b)
{
    if (a.table() != b.table())
        throw std::invalid_argument("exact_quotient: elements over different tables");
    for (const auto& g : a.table()->generators())
        if (g.parity == Parity::Odd)
            throw std::invalid_argument("exact_quotient: exterior generators are not supported");
    if (b.is_zero())
        throw std::domain_error("exact_quotient: division by zero");
    const auto& [lead_m, lead_c] = *b.terms().rbegin();
    Element q(a.table());
    Element r = a;
    while (!r.is_zero()) {
        const auto& [m, c] = *r.terms().rbegin();
        if (!lead_m.divides(m))
            return std::nullopt;
        Element step = Element::monomial(a.table(), lead_m.cofactor_in(m), c / lead_c);
        q += step;
        r -= step * b;
    }
    return q;
}

RingMap::RingMap(TablePtr source, TablePtr target, std::vector<Element> images, std::optional<unsigned long> modulus)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)), modulus_(modulus)
{
}

RingMap::RingMap(TablePtr source, TablePtr target, const std::map<std::string, Element>& assignment)
    : source_(std::move(source)), target_(std::move(target))
{
    for (const auto& g : source_->generators()) {
        auto it = assignment.find(g.name);
        if (it == assignment.end())
            throw std::invalid_argument("ring map: no image for generator " + g.name);
        const Element& img = it->second;
        if (img.table() != target_)
            throw std::invalid_argument("ring map: image of " + g.name + " not over target table");
        if (!img.is_zero()) {
            auto bd = img.bidegree();
            if (!bd || bd->internal != g.degree || bd->homological != g.homological_degree)
                throw std::invalid_argument("ring map: image of " + g.name + " has wrong degree");
            for (const auto& [m, c] : img.terms()) {
                int odd = 0;
                for (std::size_t i = 0; i < m.exponents().size(); ++i)
                    if ((*target_)[i].parity == Parity::Odd)
                        odd += static_cast<int>(m.exponents()[i]);
                if ((odd & 1) != (g.parity == Parity::Odd ? 1 : 0))
                    throw std::invalid_argument("ring map: image of " + g.name + " has wrong parity");
            }
        }
        images_.push_back(img);
    }
}

RingMap RingMap::reduction_mod_p(TablePtr table, unsigned long p)
{
    std::vector<Element> images;
    for (std::size_t i = 0; i < table->size(); ++i)
        images.push_back(Element::monomial(table, Monomial::generator(i)));
    return RingMap(table, table, std::move(images), p);
}

Element RingMap::apply(const Element& a) const
{
    if (a.table() != source_)
        throw std::invalid_argument("ring map applied to element over a different table");
    // powers[i][k] caches images_[i]^k.
    std::vector<std::vector<Element>> powers(source_->size());
    auto power = [&](std::size_t i, std::uint32_t k) -> const Element& {
        auto& cache = powers[i];
        if (cache.empty())
            cache.push_back(Element::constant(target_, 1));
        while (cache.size() <= k)
            cache.push_back(cache.back() * images_[i]);
        return cache[k];
    };
    Element result(target_);
    for (const auto& [m, c] : a.terms()) {
        Element term = Element::constant(target_, c);
        for (std::size_t i = 0; i < m.exponents().size() && !term.is_zero(); ++i)
            if (m.exponents()[i])
                term = term * power(i, m.exponents()[i]);
        result += term;
    }
    if (modulus_)
        result = reduce_mod_p(result, *modulus_);
    return result;
}

std::vector<Monomial> monomial_basis(const GeneratorTable& table, int s, int t)
{
    std::vector<Monomial> out;
    if (s < 0 || t < 0)
        return out;
    const std::size_t n = table.size();
    std::vector<std::uint32_t> exps(n, 0);
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int deg_left, int hdeg_left) {
        if (i == n) {
            if (deg_left == 0 && hdeg_left == 0)
                out.emplace_back(exps);
            return;
        }
        const Generator& g = table[i];
        std::uint32_t max_e = 0;
        if (g.parity == Parity::Odd) {
            max_e = 1;
        }
        else {
            max_e = g.degree > 0 ? static_cast<std::uint32_t>(deg_left / g.degree) : 0;
        }
        for (std::uint32_t e = max_e + 1; e-- > 0;) {
            const int dd = static_cast<int>(e) * g.degree;
            const int hh = static_cast<int>(e) * g.homological_degree;
            if (dd > deg_left || hh > hdeg_left)
                continue;
            exps[i] = e;
            rec(i + 1, deg_left - dd, hdeg_left - hh);
        }
        exps[i] = 0;
    };
    rec(0, t, s);
    return out;
}

nlohmann::json to_json(const GeneratorTable& table)
{
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : table.generators())
        gens.push_back({{"name", g.name},
                        {"degree", g.degree},
                        {"parity", g.parity == Parity::Odd ? "odd" : "even"},
                        {"homological_degree", g.homological_degree}});
    return {{"generators", gens}};
}

GeneratorTable table_from_json(const nlohmann::json& j)
{
    GeneratorTable t;
    for (const auto& g : j.at("generators"))
        t.add({g.at("name").get<std::string>(), g.at("degree").get<int>(),
               g.at("parity").get<std::string>() == "odd" ? Parity::Odd : Parity::Even,
               g.value("homological_degree", 0)});
    return t;
}

nlohmann::json to_json(const Element& a)
{
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
        nlohmann::json mono = nlohmann::json::object();
        const auto& e = it->first.exponents();
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i])
                mono[(*a.table())[i].name] = e[i];
        terms.push_back({{"coeff", to_string(it->second)}, {"monomial", mono}});
    }
    return terms;
}

Element element_from_json(const nlohmann::json& j, const TablePtr& table)
{
    Element::Terms terms;
    for (const auto& term : j) {
        std::vector<std::uint32_t> e(table->size(), 0);
        for (const auto& [name, exp] : term.at("monomial").items())
            e[table->index_of(name)] = exp.get<std::uint32_t>();
        Monomial m(std::move(e));
        Rational c = parse_rational(term.at("coeff").get<std::string>());
        auto [it, inserted] = terms.emplace(m, c);
        if (!inserted)
            it->second += c;
    }
    return Element(table, std::move(terms));
}

}  // namespace ellcoop
