#pragma once

// Graded-commutative algebra kernel: sparse elements of rings generated by
// even (polynomial) and odd (exterior) generators over Q.

#include "ellcoop/scalars.hpp"

#include <json.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ellcoop {

enum class Parity { Even, Odd };

struct Generator
{
    std::string name;
    int degree = 0;  // internal degree
    Parity parity = Parity::Even;
    int homological_degree = 0;
};

class GeneratorTable
{
public:
    GeneratorTable() = default;
    explicit GeneratorTable(std::vector<Generator> gens);

    // Appends a generator and returns its index. Names must be unique and even
    // generators must have positive internal degree.
    std::size_t add(Generator g);

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }
    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;

private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, std::size_t> index_;
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

struct Bidegree
{
    int internal = 0;
    int homological = 0;
    auto operator<=>(const Bidegree&) const = default;
};

// Dense exponent vector indexed by generator position, trailing zeros trimmed
// so that equal monomials have equal representations.
class Monomial
{
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::uint32_t> exps);
    static Monomial generator(std::size_t index, std::uint32_t exp = 1);

    std::uint32_t exponent(std::size_t i) const { return i < exps_.size() ? exps_[i] : 0; }
    const std::vector<std::uint32_t>& exponents() const { return exps_; }
    bool is_one() const { return exps_.empty(); }

    int internal_degree(const GeneratorTable& table) const;
    int homological_degree(const GeneratorTable& table) const;
    bool divides(const Monomial& other) const;
    // Exponent-wise difference; requires divides(other) on the caller side.
    Monomial cofactor_in(const Monomial& other) const;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

private:
    std::vector<std::uint32_t> exps_;
};

struct MonomialHash
{
    std::size_t operator()(const Monomial& m) const noexcept;
};

// Graded-commutative product of two monomials. Returns the Koszul sign
// (+1/-1), or 0 when an odd generator would appear twice.
int multiply_monomials(const GeneratorTable& table, const Monomial& a, const Monomial& b, Monomial& out);

std::string monomial_to_string(const GeneratorTable& table, const Monomial& m);

class Element
{
public:
    using Terms = std::map<Monomial, Rational>;

    explicit Element(TablePtr table);
    Element(TablePtr table, Terms terms);

    static Element constant(TablePtr table, const Rational& c);
    static Element generator(TablePtr table, std::string_view name);
    static Element monomial(TablePtr table, const Monomial& m, const Rational& c = 1);

    const TablePtr& table() const { return table_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(const Monomial& m) const;

    // Bidegree of a nonzero homogeneous element.
    std::optional<Bidegree> bidegree() const;
    int max_internal_degree() const;

    Element& operator+=(const Element& other);
    Element& operator-=(const Element& other);
    Element& operator*=(const Rational& c);
    Element operator-() const;
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Element& a, const Element& b);
    friend Element operator*(Element a, const Rational& c) { return a *= c; }
    friend Element operator*(const Rational& c, Element a) { return a *= c; }
    bool operator==(const Element& other) const;

    Element pow(unsigned long n) const;
    // Text form such as "3*u^2*t1 - 1/3*t2"; terms ordered by degree, then
    // ascending exponent vector.
    std::string to_string() const;

private:
    void check_table(const Element& other) const;

    TablePtr table_;
    Terms terms_;
};

Element truncate(const Element& a, int max_degree);
// Coefficientwise least non-negative residues; requires p-integral coefficients.
Element reduce_mod_p(const Element& a, unsigned long p);
// True iff every coefficient is p-integral.
bool is_p_integral(const Element& a, unsigned long p);
// Minimum coefficient valuation (infinite for zero).
Valuation min_valuation(const Element& a, unsigned long p);
// Re-expresses an element over another table by generator name; every
// generator occurring in a must exist in the target.
Element rebase(const Element& a, const TablePtr& target);
// a / m when every term of a is divisible by the monomial m.
std::optional<Element> divide_by_monomial(const Element& a, const Monomial& m);
// Exact quotient a / b in a polynomial ring over Q (even generators only),
// by division with respect to lexicographic order; nullopt if b does not divide a.
std::optional<Element> exact_quotient(const Element& a, const Element& b);

class RingMap
{
public:
    // Every generator of the source table must be assigned. Nonzero images
    // must be homogeneous of the generator's internal degree and parity.
    RingMap(TablePtr source, TablePtr target, const std::map<std::string, Element>& assignment);

    // Identity on generators followed by reduction of coefficients mod p.
    static RingMap reduction_mod_p(TablePtr table, unsigned long p);

    const TablePtr& source() const { return source_; }
    const TablePtr& target() const { return target_; }
    const Element& image(std::size_t index) const { return images_[index]; }

    Element apply(const Element& a) const;

private:
    RingMap(TablePtr source, TablePtr target, std::vector<Element> images, std::optional<unsigned long> modulus);

    TablePtr source_;
    TablePtr target_;
    std::vector<Element> images_;
    std::optional<unsigned long> modulus_;
};

// All monomials of bidegree (s, t) in descending lexicographic order of the
// exponent vectors (table order).
std::vector<Monomial> monomial_basis(const GeneratorTable& table, int s, int t);

nlohmann::json to_json(const GeneratorTable& table);
GeneratorTable table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Element& a);
Element element_from_json(const nlohmann::json& j, const TablePtr& table);

}  // namespace ellcoop
