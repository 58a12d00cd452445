#include "ellcoop/koszul.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ellcoop {

std::string case_name(KoszulCase c)
{
    switch (c) {
    case KoszulCase::Ell:
        return "ell";
    case KoszulCase::EllBar:
        return "ellbar";
    case KoszulCase::HQ:
        return "hq";
    case KoszulCase::HFp:
        return "hfp";
    }
    return "?";
}

KoszulCase parse_case(std::string_view name)
{
    if (name == "ell")
        return KoszulCase::Ell;
    if (name == "ellbar")
        return KoszulCase::EllBar;
    if (name == "hq")
        return KoszulCase::HQ;
    if (name == "hfp")
        return KoszulCase::HFp;
    throw std::invalid_argument("unknown case: " + std::string(name) + " (expected ell, ellbar, hq or hfp)");
}

std::size_t KoszulSpec::position_of_label(int r) const
{
    auto it = std::find(labels.begin(), labels.end(), r);
    if (it == labels.end())
        throw std::invalid_argument("no exterior generator with label " + std::to_string(r));
    return static_cast<std::size_t>(it - labels.begin());
}

const Element& KoszulSpec::w_of(int r) const
{
    if (!scale)
        throw std::invalid_argument("spec " + label + " is not scaled");
    return w[position_of_label(r)];
}

namespace {

Element normalized(const Element& a, const Coefficients& coeffs)
{
    switch (coeffs.kind) {
    case Coefficients::Kind::ModP:
        return reduce_mod_p(a, coeffs.p);
    case Coefficients::Kind::LocalP:
        if (!is_p_integral(a, coeffs.p))
            throw std::domain_error("element " + a.to_string() + " is not p-integral");
        return a;
    case Coefficients::Kind::Rationals:
        return a;
    }
    return a;
}

KoszulSpec make_spec_impl(std::string label, const TablePtr& base, const std::optional<Element>& x,
                          const std::vector<ExteriorGenerator>& gens, const Coefficients& coeffs, int max_degree,
                          const std::string& prefix)
{
    for (const auto& g : base->generators())
        if (g.parity != Parity::Even || g.homological_degree != 0)
            throw std::invalid_argument("Koszul base ring must be polynomial");
    KoszulSpec spec;
    spec.label = std::move(label);
    spec.coeffs = coeffs;
    spec.max_degree = max_degree;
    spec.base_size = base->size();
    auto table = std::make_shared<GeneratorTable>(*base);
    int x_degree = 0;
    if (x) {
        auto bd = x->bidegree();
        if (!bd || bd->homological != 0)
            throw std::invalid_argument("scaling element must be nonzero and homogeneous");
        x_degree = bd->internal;
    }
    std::vector<const ExteriorGenerator*> kept;
    std::set<int> seen;
    for (const auto& g : gens) {
        if (!seen.insert(g.label).second)
            throw std::invalid_argument("duplicate exterior label " + std::to_string(g.label));
        if (g.image.table() != base)
            throw std::invalid_argument("exterior image not over the base table");
        if (!g.image.is_zero()) {
            auto bd = g.image.bidegree();
            if (!bd || bd->internal + x_degree != g.degree)
                throw std::invalid_argument("differential image for label " + std::to_string(g.label) +
                                            " has degree mismatch");
        }
        if (g.degree > max_degree)
            continue;
        table->add({prefix + std::to_string(g.label), g.degree, Parity::Odd, 1});
        kept.push_back(&g);
    }
    spec.table = table;
    std::optional<Element> scale;
    if (x)
        scale = normalized(rebase(*x, spec.table), coeffs);
    for (const auto* g : kept) {
        spec.labels.push_back(g->label);
        Element img = normalized(rebase(g->image, spec.table), coeffs);
        if (scale) {
            spec.w.push_back(img);
            img = normalized(*scale * img, coeffs);
        }
        spec.images.push_back(std::move(img));
    }
    spec.scale = scale;
    return spec;
}

}  // namespace

KoszulSpec make_koszul_spec(std::string label, const TablePtr& base, const std::vector<ExteriorGenerator>& gens,
                            const Coefficients& coeffs, int max_degree, const std::string& prefix)
{
    return make_spec_impl(std::move(label), base, std::nullopt, gens, coeffs, max_degree, prefix);
}

KoszulSpec make_scaled_spec(std::string label, const TablePtr& base, const Element& x,
                            const std::vector<ExteriorGenerator>& gens, const Coefficients& coeffs, int max_degree,
                            const std::string& prefix)
{
    return make_spec_impl(std::move(label), base, x, gens, coeffs, max_degree, prefix);
}

KoszulSpec case_spec(const FormulaContext& ctx, KoszulCase c, int max_degree)
{
    const unsigned long p = ctx.p();
    const unsigned top = std::min(ctx.max_index(), FormulaContext::index_bound(p, max_degree));
    std::vector<ExteriorGenerator> gens;
    switch (c) {
    case KoszulCase::Ell:
        for (unsigned r = 2; r <= top; ++r)
            gens.push_back({static_cast<int>(r), ctx.generator_degree(r), ctx.ell_image_v(r)});
        return make_koszul_spec("ell", ctx.ellbp(), gens, Coefficients::local(p), max_degree);
    case KoszulCase::EllBar:
        for (unsigned r = 2; r <= top; ++r)
            gens.push_back({static_cast<int>(r), ctx.generator_degree(r), ctx.reduced_w(r)});
        return make_scaled_spec("ellbar", ctx.ellbp(), ctx.u(), gens, Coefficients::mod_p(p), max_degree);
    case KoszulCase::HQ:
        for (unsigned r = 2; r <= top; ++r)
            gens.push_back({static_cast<int>(r), ctx.generator_degree(r), ctx.hazewinkel(r)});
        return make_koszul_spec("hq", ctx.bp(), gens, Coefficients::rationals(), max_degree);
    case KoszulCase::HFp:
        for (unsigned r = 2; r <= top; ++r)
            gens.push_back({static_cast<int>(r), ctx.generator_degree(r), reduce_mod_p(ctx.hazewinkel(r), p)});
        return make_koszul_spec("hfp", ctx.bp(), gens, Coefficients::mod_p(p), max_degree);
    }
    throw std::invalid_argument("unknown Koszul case");
}

KoszulSpec synthetic_spec(unsigned long p, int w_count, bool with_y, int max_degree, std::optional<Coefficients> coeffs)
{
    require_odd_prime(p);
    auto base = std::make_shared<GeneratorTable>();
    base->add({"x", 2, Parity::Even, 0});
    for (int r = 1; r <= w_count; ++r)
        base->add({"w" + std::to_string(r), 2 * r, Parity::Even, 0});
    if (with_y)
        base->add({"y", 4, Parity::Even, 0});
    TablePtr table = base;
    std::vector<ExteriorGenerator> gens;
    for (int r = 1; r <= w_count; ++r)
        gens.push_back({r, 2 + 2 * r, Element::generator(table, "w" + std::to_string(r))});
    return make_scaled_spec("synthetic", table, Element::generator(table, "x"), gens,
                            coeffs.value_or(Coefficients::local(p)), max_degree);
}

std::size_t ChainSlice::dim(int s) const
{
    if (s < 0 || s > top_degree())
        return 0;
    return bases[s].size();
}

SparseMatrix ChainSlice::boundary(int s) const
{
    if (s >= 1 && s <= top_degree())
        return boundaries[s];
    return SparseMatrix(dim(s - 1), dim(s));
}

std::unordered_map<Monomial, std::size_t, MonomialHash> index_basis(const std::vector<Monomial>& basis)
{
    std::unordered_map<Monomial, std::size_t, MonomialHash> index;
    index.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        index.emplace(basis[i], i);
    return index;
}

namespace {

// Leibniz expansion of d on one monomial; calls emit(monomial, coefficient).
template <class Emit>
void differentiate_monomial(const KoszulSpec& spec, const Monomial& m, const Rational& c, Emit&& emit)
{
    const auto& e = m.exponents();
    int seen = 0;
    for (std::size_t k = 0; k < spec.labels.size(); ++k) {
        const std::size_t idx = spec.base_size + k;
        if (idx >= e.size() || e[idx] == 0)
            continue;
        const bool negative = (seen++ & 1) != 0;
        std::vector<std::uint32_t> rest = e;
        rest[idx] = 0;
        for (const auto& [mi, ci] : spec.images[k].terms()) {
            std::vector<std::uint32_t> out = rest;
            if (out.size() < mi.exponents().size())
                out.resize(mi.exponents().size(), 0);
            for (std::size_t i = 0; i < mi.exponents().size(); ++i)
                out[i] += mi.exponents()[i];
            Rational v = c * ci;
            if (negative)
                v = -v;
            emit(Monomial(std::move(out)), v);
        }
    }
}

}  // namespace

ChainSlice build(const KoszulSpec& spec, int t)
{
    if (t > spec.max_degree)
        throw std::invalid_argument("slice degree " + std::to_string(t) + " exceeds the truncation " +
                                    std::to_string(spec.max_degree));
    ChainSlice slice;
    slice.t = t;
    const int top = static_cast<int>(spec.exterior_count());
    for (int s = 0; s <= top; ++s)
        slice.bases.push_back(monomial_basis(*spec.table, s, t));
    while (slice.bases.size() > 1 && slice.bases.back().empty())
        slice.bases.pop_back();
    slice.boundaries.emplace_back(0, slice.bases[0].size());
    for (int s = 1; s <= slice.top_degree(); ++s) {
        const auto& source = slice.bases[s];
        const auto& target = slice.bases[s - 1];
        auto index = index_basis(target);
        SparseMatrix d(target.size(), source.size());
        for (std::size_t j = 0; j < source.size(); ++j) {
            differentiate_monomial(spec, source[j], Rational(1), [&](const Monomial& m, const Rational& v) {
                auto it = index.find(m);
                if (it == index.end())
                    throw std::logic_error("differential left the target basis");
                d.add(it->second, j, v);
            });
        }
        d.normalize(spec.coeffs);
        slice.boundaries.push_back(std::move(d));
    }
    return slice;
}

Element differential(const KoszulSpec& spec, const Element& a)
{
    if (a.table() != spec.table)
        throw std::invalid_argument("differential: element not over the spec's table");
    Element::Terms acc;
    for (const auto& [m, c] : a.terms()) {
        differentiate_monomial(spec, m, c, [&](Monomial mono, const Rational& v) {
            auto [it, inserted] = acc.emplace(std::move(mono), v);
            if (!inserted)
                it->second += v;
        });
    }
    Element r(spec.table, std::move(acc));
    if (spec.coeffs.kind == Coefficients::Kind::ModP)
        return reduce_mod_p(r, spec.coeffs.p);
    return r;
}

Vector coordinates(const Element& a, const std::vector<Monomial>& basis, const Coefficients& coeffs)
{
    auto index = index_basis(basis);
    Vector v(basis.size());
    for (const auto& [m, c] : a.terms()) {
        auto it = index.find(m);
        if (it == index.end())
            throw std::invalid_argument("element term " + monomial_to_string(*a.table(), m) + " outside basis");
        v[it->second] = coeffs.normalize(c);
    }
    return v;
}

Element from_coordinates(const TablePtr& table, const std::vector<Monomial>& basis, const Vector& v)
{
    if (v.size() != basis.size())
        throw std::invalid_argument("coordinate vector has wrong length");
    Element::Terms terms;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (v[i] != 0)
            terms.emplace(basis[i], v[i]);
    return Element(table, std::move(terms));
}

namespace {

Element exterior(const KoszulSpec& spec, int r)
{
    return Element::monomial(spec.table, Monomial::generator(spec.table_index_of_label(r)));
}

void require_distinct(const std::vector<int>& indices)
{
    std::set<int> s(indices.begin(), indices.end());
    if (s.size() != indices.size())
        throw std::invalid_argument("Delta indices must be distinct");
}

int permutation_sign(std::vector<int> seq)
{
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j])
                sign = -sign;
    return sign;
}

}  // namespace

Element delta_class(const KoszulSpec& spec, const std::vector<int>& indices)
{
    if (!spec.scale)
        throw std::invalid_argument("Delta classes need a scaled spec");
    if (indices.empty())
        throw std::invalid_argument("Delta needs at least one index");
    require_distinct(indices);
    if (indices.size() == 1)
        return spec.w_of(indices[0]);
    Element sum(spec.table);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        Element term = spec.w_of(indices[k]);
        for (std::size_t j = 0; j < indices.size(); ++j)
            if (j != k)
                term = term * exterior(spec, indices[j]);
        if (k % 2 == 0)
            sum -= term;
        else
            sum += term;
    }
    return normalized(sum, spec.coeffs);
}

Element expand(const KoszulSpec& spec, const std::vector<DeltaTerm>& terms)
{
    Element sum(spec.table);
    for (const auto& term : terms)
        sum += term.coefficient * delta_class(spec, term.indices);
    return normalized(sum, spec.coeffs);
}

DeltaProduct delta_product(const KoszulSpec& spec, const std::vector<int>& i, const std::vector<int>& j)
{
    if (i.size() < 2 || j.size() < 2)
        throw std::invalid_argument("delta_product needs index lists of length at least 2");
    require_distinct(i);
    require_distinct(j);
    std::set<int> all(i.begin(), i.end());
    all.insert(j.begin(), j.end());
    const std::size_t r = i.size();
    const std::size_t s = j.size();
    const std::size_t t = all.size();

    DeltaProduct out{DeltaProduct::Kind::Vanishing, {},
                     normalized(delta_class(spec, i) * delta_class(spec, j), spec.coeffs), 0, 0};
    if (t + 2 <= r + s) {
        out.kind = DeltaProduct::Kind::Vanishing;
    }
    else if (t + 1 == r + s) {
        out.kind = DeltaProduct::Kind::SharedIndex;
        std::size_t a = 0;
        std::size_t b = 0;
        for (std::size_t x = 0; x < r; ++x)
            for (std::size_t y = 0; y < s; ++y)
                if (i[x] == j[y]) {
                    a = x + 1;
                    b = y + 1;
                }
        const int c = i[a - 1];
        std::vector<int> seq{c};
        for (int v : i)
            if (v != c)
                seq.push_back(v);
        for (int v : j)
            if (v != c)
                seq.push_back(v);
        out.printed_sign = (a % 2 == 0) ? 1 : -1;
        out.sign = (((a + b + 1) % 2 == 0) ? 1 : -1) * permutation_sign(seq);
        out.terms.push_back({spec.w_of(c) * Rational(out.sign), std::vector<int>(all.begin(), all.end())});
    }
    else {
        out.kind = DeltaProduct::Kind::Disjoint;
        // Term x (1-based) carries (-1)^{x+r+1}; the printed (-1)^{x+s+1}
        // differs by (-1)^{r+s}.
        out.printed_sign = ((r + s) % 2 == 0) ? 1 : -1;
        out.sign = 1;
        for (std::size_t x = 0; x < r; ++x) {
            std::vector<int> idx;
            for (std::size_t y = 0; y < r; ++y)
                if (y != x)
                    idx.push_back(i[y]);
            idx.insert(idx.end(), j.begin(), j.end());
            const int sign = ((x + 1 + r + 1) % 2 == 0) ? 1 : -1;
            out.terms.push_back({spec.w_of(i[x]) * Rational(sign), idx});
        }
    }
    if (expand(spec, out.terms) != out.product)
        throw std::logic_error("Delta product expansion disagrees with the algebra product");
    return out;
}

Element delta_syzygy(const KoszulSpec& spec, const std::vector<int>& indices)
{
    if (indices.size() < 2)
        throw std::invalid_argument("delta_syzygy needs at least two indices");
    require_distinct(indices);
    Element sum(spec.table);
    for (std::size_t j = 0; j < indices.size(); ++j) {
        std::vector<int> rest;
        for (std::size_t k = 0; k < indices.size(); ++k)
            if (k != j)
                rest.push_back(indices[k]);
        Element term = spec.w_of(indices[j]) * delta_class(spec, rest);
        if (j % 2 == 0)
            sum -= term;
        else
            sum += term;
    }
    return normalized(sum, spec.coeffs);
}

Element connecting_map(const KoszulSpec& integral, const Element& z)
{
    if (integral.coeffs.kind != Coefficients::Kind::LocalP)
        throw std::invalid_argument("connecting_map needs a spec over Z_(p)");
    const unsigned long p = integral.coeffs.p;
    const Element lifted = reduce_mod_p(z.table() == integral.table ? z : rebase(z, integral.table), p);
    const Element dz = differential(integral, lifted);
    for (const auto& [m, c] : dz.terms())
        if (valuation(c, p) < Valuation{1, false})
            throw std::invalid_argument("connecting_map: argument is not a cycle mod p");
    return dz * Rational(1, p);
}

nlohmann::json slice_to_json(const KoszulSpec& spec, const ChainSlice& slice)
{
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& basis : slice.bases) {
        nlohmann::json names = nlohmann::json::array();
        for (const auto& m : basis)
            names.push_back(monomial_to_string(*spec.table, m));
        bases.push_back(names);
    }
    nlohmann::json boundaries = nlohmann::json::array();
    for (int s = 1; s <= slice.top_degree(); ++s) {
        const auto& d = slice.boundaries[s];
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < d.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < d.cols(); ++c)
                row.push_back(to_string(d.at(r, c)));
            rows.push_back(row);
        }
        boundaries.push_back({{"s", s}, {"rows", d.rows()}, {"cols", d.cols()}, {"entries", rows}});
    }
    return {{"case", spec.label},
            {"coefficients", spec.coeffs.name()},
            {"t", slice.t},
            {"generators", to_json(*spec.table)},
            {"bases", bases},
            {"boundaries", boundaries}};
}

}  // namespace ellcoop
