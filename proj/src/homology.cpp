#include "ellcoop/homology.hpp"

#include "ellcoop/parallel.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ellcoop {

std::vector<HomologySummary> slice_homology(const KoszulSpec& spec, const ChainSlice& slice, bool representatives)
{
    const int top = slice.top_degree();
    // snf[s] is the Smith form of d_s for s = 1..top.
    std::vector<std::optional<SnfResult>> snf(top + 2);
    for (int s = 1; s <= top; ++s)
        snf[s] = smith_normal_form(slice.boundaries[s], spec.coeffs, representatives);
    std::vector<HomologySummary> out;
    for (int s = 0; s <= top; ++s) {
        HomologySummary h;
        h.s = s;
        h.t = slice.t;
        const std::size_t rank_out = s >= 1 ? snf[s]->rank() : 0;
        const std::size_t rank_in = s + 1 <= top ? snf[s + 1]->rank() : 0;
        h.free_rank = slice.dim(s) - rank_out - rank_in;
        if (s + 1 <= top && spec.coeffs.kind == Coefficients::Kind::LocalP) {
            h.torsion = snf[s + 1]->torsion_exponents();
            if (representatives)
                for (const auto& [v, e] : snf[s + 1]->torsion_generators())
                    h.torsion_representatives.push_back(from_coordinates(spec.table, slice.bases[s], v));
        }
        out.push_back(std::move(h));
    }
    return out;
}

HomologySummary homology_at(const KoszulSpec& spec, int s, int t, bool representatives)
{
    if (s < 0 || t < 0)
        throw std::invalid_argument("homology_at: negative degree");
    const ChainSlice slice = build(spec, t);
    if (s > slice.top_degree()) {
        HomologySummary h;
        h.s = s;
        h.t = t;
        return h;
    }
    return slice_homology(spec, slice, representatives)[s];
}

bool is_boundary(const KoszulSpec& spec, const ChainSlice& slice, int s, const Element& z)
{
    if (z.is_zero())
        return true;
    if (s > slice.top_degree())
        return false;
    const Vector v = coordinates(z, slice.bases[s], spec.coeffs);
    const SnfResult snf = smith_normal_form(slice.boundary(s + 1), spec.coeffs, true);
    return snf.contains(v);
}

namespace {

HomologySummary cokernel_summary(const SparseMatrix& m, const Coefficients& coeffs, int s, int t)
{
    HomologySummary h;
    h.s = s;
    h.t = t;
    const SnfResult snf = smith_normal_form(m, coeffs);
    h.free_rank = m.rows() - snf.rank();
    if (coeffs.kind == Coefficients::Kind::LocalP)
        h.torsion = snf.torsion_exponents();
    return h;
}

void combinations(const std::vector<int>& items, std::size_t k, std::size_t start, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < items.size(); ++i) {
        cur.push_back(items[i]);
        combinations(items, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& items, std::size_t k)
{
    std::vector<int> sorted = items;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    combinations(sorted, k, 0, cur, out);
    return out;
}

int degree_of(const Element& a)
{
    auto bd = a.bidegree();
    if (!bd)
        throw std::invalid_argument("expected a nonzero homogeneous element");
    return bd->internal;
}

std::vector<Monomial> base_monomials(const KoszulSpec& spec, int t)
{
    if (t < 0)
        return {};
    return monomial_basis(*spec.table, 0, t);
}

// Base-ring table consisting of the first base_size generators of spec.table,
// optionally without one generator.
TablePtr base_table(const KoszulSpec& spec, std::optional<std::size_t> skip)
{
    auto t = std::make_shared<GeneratorTable>();
    for (std::size_t i = 0; i < spec.base_size; ++i)
        if (!skip || *skip != i)
            t->add((*spec.table)[i]);
    return t;
}

std::size_t single_generator_index(const Element& a)
{
    if (a.size() != 1 || a.terms().begin()->second != 1)
        throw std::invalid_argument("expected a single generator");
    const auto& e = a.terms().begin()->first.exponents();
    std::optional<std::size_t> idx;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        if (e[i] != 1 || idx)
            throw std::invalid_argument("expected a single generator");
        idx = i;
    }
    if (!idx)
        throw std::invalid_argument("expected a single generator");
    return *idx;
}

// Drops terms involving generator `skip` and re-expresses over `target`.
Element restrict_to(const Element& a, std::optional<std::size_t> skip, const TablePtr& target)
{
    Element::Terms kept;
    for (const auto& [m, c] : a.terms())
        if (!skip || m.exponent(*skip) == 0)
            kept.emplace(m, c);
    return rebase(Element(a.table(), std::move(kept)), target);
}

}  // namespace

HomologySummary generalized_koszul_oracle(const KoszulSpec& spec, int s, int t)
{
    if (!spec.scale)
        throw std::invalid_argument("generalized_koszul_oracle needs a scaled spec");
    const std::size_t xi = single_generator_index(*spec.scale);
    for (const auto& w : spec.w)
        single_generator_index(w);
    if (!regularity_holds(spec, t))
        throw std::domain_error("w sequence is not regular (or not regular mod x) at degree " + std::to_string(t));
    const int dx = degree_of(*spec.scale);

    if (s == 0) {
        const auto target = base_monomials(spec, t);
        auto index = index_basis(target);
        std::vector<Vector> cols;
        for (std::size_t k = 0; k < spec.labels.size(); ++k) {
            const Element& gen = spec.images[k];
            for (const auto& m : base_monomials(spec, t - degree_of(gen))) {
                Vector v(target.size());
                const Element product = gen * Element::monomial(spec.table, m);
                for (const auto& [mi, c] : product.terms())
                    v[index.at(mi)] = spec.coeffs.normalize(c);
                cols.push_back(std::move(v));
            }
        }
        return cokernel_summary(SparseMatrix::from_columns(cols, target.size()), spec.coeffs, 0, t);
    }

    auto quotient_monomials = [&](int degree) {
        std::vector<Monomial> out;
        for (const auto& m : base_monomials(spec, degree))
            if (m.exponent(xi) == 0)
                out.push_back(m);
        return out;
    };
    auto w_degree_sum = [&](const std::vector<int>& idx) {
        int d = 0;
        for (int r : idx)
            d += degree_of(spec.w_of(r));
        return d;
    };

    // Generators (I, m) with |I| = s + 1.
    std::map<std::pair<std::vector<int>, Monomial>, std::size_t> gen_index;
    for (const auto& idx : subsets_of_size(spec.labels, static_cast<std::size_t>(s) + 1))
        for (const auto& m : quotient_monomials(t - w_degree_sum(idx) - s * dx))
            gen_index.emplace(std::make_pair(idx, m), gen_index.size());
    // Relations sum_j (-1)^j w_{j} m Delta(J \ j) with |J| = s + 2.
    std::vector<Vector> rels;
    for (const auto& idx : subsets_of_size(spec.labels, static_cast<std::size_t>(s) + 2)) {
        for (const auto& m : quotient_monomials(t - w_degree_sum(idx) - s * dx)) {
            Vector v(gen_index.size());
            for (std::size_t j = 0; j < idx.size(); ++j) {
                std::vector<int> rest;
                for (std::size_t k = 0; k < idx.size(); ++k)
                    if (k != j)
                        rest.push_back(idx[k]);
                const Element wm = spec.w_of(idx[j]) * Element::monomial(spec.table, m);
                const Monomial& mono = wm.terms().begin()->first;
                const Rational sign = (j % 2 == 0) ? -1 : 1;
                v[gen_index.at({rest, mono})] += sign;
            }
            for (auto& c : v)
                c = spec.coeffs.normalize(c);
            rels.push_back(std::move(v));
        }
    }
    return cokernel_summary(SparseMatrix::from_columns(rels, gen_index.size()), spec.coeffs, s, t);
}

bool regularity_holds(const KoszulSpec& spec, int t)
{
    std::optional<std::size_t> xi;
    if (spec.scale)
        xi = single_generator_index(*spec.scale);
    const std::vector<std::optional<std::size_t>> variants =
        xi ? std::vector<std::optional<std::size_t>>{std::nullopt, xi} : std::vector<std::optional<std::size_t>>{std::nullopt};
    for (const auto& skip : variants) {
        const TablePtr base = base_table(spec, skip);
        std::vector<ExteriorGenerator> gens;
        for (std::size_t k = 0; k < spec.labels.size(); ++k) {
            const Element& w = spec.scale ? spec.w[k] : spec.images[k];
            const Element img = restrict_to(w, skip, base);
            if (img.is_zero())
                return false;
            gens.push_back({spec.labels[k], degree_of(img), img});
        }
        const KoszulSpec plain = make_koszul_spec("regularity", base, gens, spec.coeffs, spec.max_degree);
        const ChainSlice slice = build(plain, t);
        for (const auto& h : slice_homology(plain, slice))
            if (h.s >= 1 && !h.is_zero())
                return false;
    }
    return true;
}

bool delta_span_holds(const KoszulSpec& spec, int s, int t)
{
    if (s < 1)
        throw std::invalid_argument("delta_span_holds needs s >= 1");
    const ChainSlice slice = build(spec, t);
    if (s > slice.top_degree())
        return true;
    const auto& basis = slice.bases[s];
    const SnfResult ds = smith_normal_form(slice.boundary(s), spec.coeffs, true);
    const std::size_t cycle_rank = basis.size() - ds.rank();

    std::vector<Vector> gens;
    const SparseMatrix next = slice.boundary(s + 1);
    const DenseMatrix next_dense = next.to_dense();
    for (std::size_t j = 0; j < next.cols(); ++j)
        gens.push_back(next_dense.column(j));
    for (const auto& idx : subsets_of_size(spec.labels, static_cast<std::size_t>(s) + 1)) {
        const Element delta = delta_class(spec, idx);
        if (delta.is_zero())
            continue;
        const int d = delta.bidegree()->internal;
        for (const auto& m : base_monomials(spec, t - d)) {
            Element z = delta * Element::monomial(spec.table, m);
            if (!z.is_zero())
                gens.push_back(coordinates(z, basis, spec.coeffs));
        }
    }
    if (gens.empty())
        return cycle_rank == 0;
    const SnfResult g = smith_normal_form(SparseMatrix::from_columns(gens, basis.size()), spec.coeffs);
    if (g.rank() != cycle_rank)
        return false;
    return g.torsion_exponents().empty();
}

std::size_t quotient_dimension(const TablePtr& table, std::size_t base_size, const std::vector<Element>& generators,
                               int t, const Coefficients& coeffs)
{
    const Coefficients field = coeffs.is_field() ? coeffs : Coefficients::rationals();
    auto monomials = [&](int d) {
        std::vector<Monomial> out;
        if (d < 0)
            return out;
        for (const auto& m : monomial_basis(*table, 0, d))
            if (m.exponents().size() <= base_size)
                out.push_back(m);
        return out;
    };
    const auto target = monomials(t);
    auto index = index_basis(target);
    std::vector<Vector> cols;
    for (const auto& g : generators) {
        if (g.is_zero())
            continue;
        for (const auto& m : monomials(t - degree_of(g))) {
            Vector v(target.size());
            const Element product = g * Element::monomial(table, m);
            for (const auto& [mi, c] : product.terms())
                v[index.at(mi)] = field.normalize(c);
            cols.push_back(std::move(v));
        }
    }
    return target.size() - column_rank(cols, target.size(), field);
}

namespace {

struct CycleData
{
    ChainSlice slice;
    std::vector<std::vector<Vector>> cycles;      // per s, basis of Z_s
    std::vector<std::vector<Vector>> boundaries;  // per s, spanning set of B_s
};

CycleData cycle_data(const KoszulSpec& spec, int t)
{
    CycleData d{build(spec, t), {}, {}};
    const int top = d.slice.top_degree();
    d.cycles.resize(top + 1);
    d.boundaries.resize(top + 1);
    for (int s = 0; s <= top; ++s) {
        const SnfResult snf = smith_normal_form(d.slice.boundary(s), spec.coeffs, true);
        d.cycles[s] = snf.kernel_basis();
        const DenseMatrix next = d.slice.boundary(s + 1).to_dense();
        for (std::size_t j = 0; j < next.cols(); ++j)
            d.boundaries[s].push_back(next.column(j));
    }
    return d;
}

}  // namespace

BocksteinResult bockstein_pages(const KoszulSpec& spec, const Element& x, int r_max, int max_degree, unsigned threads)
{
    if (r_max < 1)
        throw std::invalid_argument("bockstein_pages needs r_max >= 1");
    if (x.table() != spec.table)
        throw std::invalid_argument("bockstein_pages: x must be over the spec's table");
    BocksteinResult result;
    result.pages.resize(r_max + 1);
    for (int r = 0; r <= r_max; ++r)
        result.pages[r].r = r;

    const bool constant_x = x.size() == 1 && x.terms().begin()->first.is_one();
    if (constant_x) {
        if (spec.coeffs.kind != Coefficients::Kind::LocalP ||
            x.terms().begin()->second != Rational(spec.coeffs.p))
            throw std::invalid_argument("constant Bockstein element must be p over Z_(p)");
        std::vector<int> degrees;
        for (int t = 0; t <= max_degree; ++t)
            degrees.push_back(t);
        auto tables = parallel_map<std::vector<HomologySummary>>(
            degrees.size(), threads, [&](std::size_t i) { return slice_homology(spec, build(spec, degrees[i])); });
        for (std::size_t i = 0; i < tables.size(); ++i) {
            const auto& hs = tables[i];
            for (std::size_t s = 0; s < hs.size() + 1; ++s) {
                for (int r = 0; r <= r_max; ++r) {
                    std::size_t dim = 0;
                    if (s < hs.size()) {
                        dim += hs[s].free_rank;
                        for (long e : hs[s].torsion)
                            dim += e > r ? 1 : 0;
                    }
                    if (s >= 1)
                        for (long e : hs[s - 1].torsion)
                            dim += e > r ? 1 : 0;
                    if (dim)
                        result.pages[r].dims[{static_cast<int>(s), degrees[i]}] = dim;
                }
            }
        }
    }
    else {
        if (!spec.coeffs.is_field())
            throw std::invalid_argument("Bockstein pages for a ring element need field coefficients");
        auto bd = x.bidegree();
        if (!bd || bd->internal <= 0 || bd->homological != 0)
            throw std::invalid_argument("Bockstein element must be homogeneous of positive internal degree");
        const int dx = bd->internal;
        const int top_t = max_degree + r_max * dx;
        if (top_t > spec.max_degree)
            throw std::invalid_argument("spec truncation too small for the requested Bockstein pages");
        std::vector<CycleData> data = parallel_map<CycleData>(
            static_cast<std::size_t>(top_t + 1), threads, [&](std::size_t t) { return cycle_data(spec, static_cast<int>(t)); });
        const Coefficients& k = spec.coeffs;

        std::vector<Element> x_powers{Element::constant(spec.table, 1)};
        for (int r = 1; r <= r_max; ++r)
            x_powers.push_back(k.kind == Coefficients::Kind::ModP ? reduce_mod_p(x_powers.back() * x, k.p)
                                                                  : x_powers.back() * x);

        auto dims_at = [&](int s, int t) -> std::size_t { return data[t].slice.dim(s); };
        // x^r * v for v in C_{s,t}, as a vector in C_{s,t+r dx}.
        auto multiply = [&](const Vector& v, int s, int t, int r) {
            const auto& src = data[t].slice.bases[s];
            const auto& dst = data[t + r * dx].slice.bases[s];
            auto index = index_basis(dst);
            Vector out(dst.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] == 0)
                    continue;
                const Element product = x_powers[r] * Element::monomial(spec.table, src[i]);
                for (const auto& [m, c] : product.terms())
                    out[index.at(m)] = k.normalize(out[index.at(m)] + c * v[i]);
            }
            return out;
        };
        auto cycles = [&](int s, int t) -> const std::vector<Vector>& {
            static const std::vector<Vector> none;
            if (t < 0 || s < 0 || s > data[t].slice.top_degree())
                return none;
            return data[t].cycles[s];
        };
        auto bounds = [&](int s, int t) -> const std::vector<Vector>& {
            static const std::vector<Vector> none;
            if (t < 0 || s < 0 || s > data[t].slice.top_degree())
                return none;
            return data[t].boundaries[s];
        };
        auto rank = [&](const std::vector<Vector>& cols, std::size_t dim) { return column_rank(cols, dim, k); };
        auto join = [](std::vector<Vector> a, const std::vector<Vector>& b) {
            a.insert(a.end(), b.begin(), b.end());
            return a;
        };
        // I_r = x^r Z_{t - r dx} + B_t.
        auto image_r = [&](int s, int t, int r) {
            std::vector<Vector> out = bounds(s, t);
            for (const auto& z : cycles(s, t - r * dx))
                out.push_back(multiply(z, s, t - r * dx, r));
            return out;
        };
        // K_r = {z in Z_t : x^r z in B_{t + r dx}} (contains B_t).
        auto kernel_r = [&](int s, int t, int r) {
            std::vector<Vector> out = bounds(s, t);
            const auto& z = cycles(s, t);
            if (z.empty())
                return out;
            const int t2 = t + r * dx;
            std::vector<Vector> cols;
            for (const auto& v : z)
                cols.push_back(multiply(v, s, t, r));
            const auto& b = bounds(s, t2);
            cols.insert(cols.end(), b.begin(), b.end());
            const SnfResult snf = smith_normal_form(SparseMatrix::from_columns(cols, dims_at(s, t2)), k, true);
            for (const auto& kv : snf.kernel_basis()) {
                Vector comb(dims_at(s, t));
                for (std::size_t i = 0; i < z.size(); ++i)
                    if (kv[i] != 0)
                        for (std::size_t c = 0; c < comb.size(); ++c)
                            comb[c] = k.normalize(comb[c] + kv[i] * z[i][c]);
                out.push_back(std::move(comb));
            }
            return out;
        };

        std::vector<std::pair<int, int>> cells;
        for (int t = 0; t <= max_degree; ++t)
            for (int s = 0; s <= data[t].slice.top_degree() + 1; ++s)
                cells.emplace_back(s, t);
        auto values = parallel_map<std::vector<std::size_t>>(cells.size(), threads, [&](std::size_t i) {
            const auto [s, t] = cells[i];
            std::vector<std::size_t> dims(r_max + 1, 0);
            for (int r = 0; r <= r_max; ++r) {
                std::size_t dim = 0;
                if (s <= data[t].slice.top_degree()) {
                    const std::size_t n = dims_at(s, t);
                    const std::size_t z = cycles(s, t).size();
                    dim += z - rank(join(image_r(s, t, 1), kernel_r(s, t, r)), n);
                }
                const int t1 = t - dx;
                if (s >= 1 && t1 >= 0 && s - 1 <= data[t1].slice.top_degree()) {
                    const std::size_t n = dims_at(s - 1, t1);
                    const auto k1 = kernel_r(s - 1, t1, 1);
                    const auto ir = image_r(s - 1, t1, r);
                    const std::size_t meet = rank(k1, n) + rank(ir, n) - rank(join(k1, ir), n);
                    dim += meet - rank(bounds(s - 1, t1), n);
                }
                dims[r] = dim;
            }
            return dims;
        });
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (int r = 0; r <= r_max; ++r)
                if (values[i][r])
                    result.pages[r].dims[cells[i]] = values[i][r];
    }

    result.stabilizes = true;
    for (int r = 2; r <= r_max; ++r)
        if (result.pages[r].dims != result.pages[1].dims)
            result.stabilizes = false;
    return result;
}

std::size_t TorsionTable::torsion_count_at(int total_degree) const
{
    std::size_t n = 0;
    for (const auto& e : entries)
        if (e.s + e.t == total_degree)
            n += e.torsion.size();
    return n;
}

TorsionTable torsion_table(KoszulCase kind, unsigned long p, int max_degree, unsigned threads, bool representatives)
{
    require_odd_prime(p);
    if (max_degree < 0)
        throw std::invalid_argument("max_degree must be non-negative");
    FormulaContext ctx(p, FormulaContext::index_bound(p, max_degree));
    const KoszulSpec spec = case_spec(ctx, kind, max_degree);
    const int step = ctx.u_degree();
    std::vector<int> degrees;
    for (int t = 0; t <= max_degree; t += step)
        degrees.push_back(t);
    auto per_degree = parallel_map<std::vector<HomologySummary>>(degrees.size(), threads, [&](std::size_t i) {
        return slice_homology(spec, build(spec, degrees[i]), representatives);
    });

    TorsionTable table;
    table.p = p;
    table.kind = kind;
    table.max_degree = max_degree;
    table.coefficients = spec.coeffs.name();
    for (const auto& g : spec.table->generators())
        table.generators.push_back(g.name + ":(" + std::to_string(g.homological_degree) + "," +
                                   std::to_string(g.degree) + ")");
    for (auto& hs : per_degree)
        for (auto& h : hs)
            if (!h.is_zero())
                table.entries.push_back(std::move(h));
    std::sort(table.entries.begin(), table.entries.end(),
              [](const HomologySummary& a, const HomologySummary& b) { return std::tie(a.s, a.t) < std::tie(b.s, b.t); });
    for (const auto& e : table.entries) {
        for (long x : e.torsion)
            if (x != 1)
                table.all_torsion_simple = false;
        if (!e.torsion.empty() && !table.first_torsion)
            table.first_torsion = std::make_pair(e.s, e.t);
    }
    return table;
}

nlohmann::json to_json(const TorsionTable& table)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : table.entries) {
        nlohmann::json torsion = nlohmann::json::array();
        for (long x : e.torsion)
            torsion.push_back(ipow(table.p, static_cast<unsigned long>(x)).get_str());
        entries.push_back({{"s", e.s}, {"t", e.t}, {"free", e.free_rank}, {"torsion", torsion}});
    }
    nlohmann::json first = nullptr;
    if (table.first_torsion)
        first = {{"s", table.first_torsion->first}, {"t", table.first_torsion->second}};
    return {{"p", table.p},
            {"case", case_name(table.kind)},
            {"max_degree", table.max_degree},
            {"coefficients", table.coefficients},
            {"generators", table.generators},
            {"entries", entries},
            {"first_torsion", first},
            {"all_torsion_simple", table.all_torsion_simple}};
}

std::string to_csv(const TorsionTable& table)
{
    std::ostringstream out;
    out << "case,p,s,t,free,torsion\n";
    for (const auto& e : table.entries) {
        out << case_name(table.kind) << ',' << table.p << ',' << e.s << ',' << e.t << ',' << e.free_rank << ',';
        for (std::size_t i = 0; i < e.torsion.size(); ++i)
            out << (i ? ";" : "") << ipow(table.p, static_cast<unsigned long>(e.torsion[i])).get_str();
        out << '\n';
    }
    return out.str();
}

TorsionComparison u_p_torsion_compare(const FormulaContext& ctx, int max_degree, unsigned threads)
{
    const KoszulSpec spec = case_spec(ctx, KoszulCase::Ell, max_degree);
    const int du = ctx.u_degree();
    const unsigned long p = ctx.p();
    std::vector<int> degrees;
    for (int t = 0; t <= max_degree; t += du)
        degrees.push_back(t);
    const auto slices =
        parallel_map<ChainSlice>(degrees.size(), threads, [&](std::size_t i) { return build(spec, degrees[i]); });
    const Element u = Element::generator(spec.table, "u");
    const Coefficients q = Coefficients::rationals();

    struct Partial
    {
        std::vector<TorsionComparison::Entry> torsion;
        std::size_t free_checked = 0;
        bool free_ok = true;
    };
    auto parts = parallel_map<Partial>(degrees.size(), threads, [&](std::size_t i) {
        Partial part;
        const int t = degrees[i];
        if (t + du > max_degree)
            return part;
        const ChainSlice& here = slices[i];
        const ChainSlice& up = slices[i + 1];
        for (int s = 0; s <= here.top_degree(); ++s) {
            const SnfResult in = smith_normal_form(here.boundary(s + 1), spec.coeffs, true);
            std::size_t index = 0;
            for (const auto& [v, e] : in.torsion_generators()) {
                (void)e;
                const Element z = from_coordinates(spec.table, here.bases[s], v);
                TorsionComparison::Entry entry;
                entry.s = s;
                entry.t = t;
                entry.index = index++;
                entry.p_kills = in.contains(coordinates(z * Rational(p), here.bases[s], spec.coeffs));
                entry.u_kills = is_boundary(spec, up, s, u * z);
                part.torsion.push_back(entry);
            }
            // Free classes: cycles independent of the boundaries over Q.
            const SnfResult out = smith_normal_form(here.boundary(s), spec.coeffs, true);
            std::vector<Vector> b_here;
            const DenseMatrix in_dense = here.boundary(s + 1).to_dense();
            for (std::size_t j = 0; j < in_dense.cols(); ++j)
                b_here.push_back(in_dense.column(j));
            std::vector<Vector> b_up;
            const DenseMatrix up_dense = up.boundary(s + 1).to_dense();
            for (std::size_t j = 0; j < up_dense.cols(); ++j)
                b_up.push_back(up_dense.column(j));
            std::size_t base_rank = column_rank(b_here, here.dim(s), q);
            const std::size_t up_rank = column_rank(b_up, up.dim(s), q);
            for (const auto& z : out.kernel_basis()) {
                b_here.push_back(z);
                const std::size_t r = column_rank(b_here, here.dim(s), q);
                if (r == base_rank) {
                    b_here.pop_back();
                    continue;
                }
                base_rank = r;
                const Element uz = u * from_coordinates(spec.table, here.bases[s], z);
                std::vector<Vector> with = b_up;
                with.push_back(coordinates(uz, up.bases[s], q));
                ++part.free_checked;
                if (column_rank(with, up.dim(s), q) == up_rank)
                    part.free_ok = false;
            }
        }
        return part;
    });

    TorsionComparison result;
    for (auto& part : parts) {
        for (auto& e : part.torsion) {
            if (!e.p_kills || !e.u_kills)
                result.holds = false;
            result.torsion.push_back(e);
        }
        result.free_classes_checked += part.free_checked;
        if (!part.free_ok)
            result.free_classes_survive = false;
    }
    if (!result.free_classes_survive)
        result.holds = false;
    return result;
}

}  // namespace ellcoop
