#include "ellcoop/coop.hpp"

#include "ellcoop/bp.hpp"
#include "ellcoop/homology.hpp"
#include "ellcoop/koszul.hpp"
#include "ellcoop/parallel.hpp"
#include "ellcoop/steenrod.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ellcoop {

namespace {

Integer upow(unsigned long p, unsigned k)
{
    return ipow(p, k);
}

Integer zpow(const Integer& base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

unsigned long ulpow(unsigned long p, unsigned k)
{
    return upow(p, k).get_ui();
}

Integer residue_mod(const Rational& c, const Integer& modulus)
{
    // c p-integral; least non-negative residue of c modulo p^e.
    Integer inv;
    Integer den = c.get_den();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
    Integer r = Integer(c.get_num() * inv) % modulus;
    if (r < 0)
        r += modulus;
    return r;
}

}  // namespace

unsigned model_index_bound(unsigned long p, int max_degree)
{
    return FormulaContext::index_bound(p, max_degree);
}

RationalModel::RationalModel(unsigned long p, unsigned max_index) : p_(p), max_index_(max_index)
{
    require_odd_prime(p);
    if (max_index < 1)
        throw std::invalid_argument("RationalModel needs max_index >= 1");
    const int du = unit_degree();
    uv_ = std::make_shared<GeneratorTable>(
        std::vector<Generator>{{"u", du, Parity::Even, 0}, {"v", du, Parity::Even, 0}});
    auto source = std::make_shared<GeneratorTable>();
    source->add({"u", du, Parity::Even, 0});
    for (unsigned k = 1; k <= max_index; ++k)
        source->add({"t" + std::to_string(k), static_cast<int>(2 * ulpow(p, k) - 2), Parity::Even, 0});
    source_ = source;
    t_.resize(max_index + 1);
}

Element RationalModel::u() const
{
    return Element::generator(uv_, "u");
}

Element RationalModel::v() const
{
    return Element::generator(uv_, "v");
}

const Element& RationalModel::t(unsigned n) const
{
    if (n > max_index_)
        throw std::out_of_range("t_" + std::to_string(n) + " beyond the model's index bound");
    {
        std::lock_guard lock(mutex_);
        if (t_[n])
            return *t_[n];
    }
    Element value(uv_);
    if (n == 0) {
        value = Element::constant(uv_, 1);
    }
    else {
        const unsigned long p = p_;
        const Element vp = v().pow(ulpow(p, n - 1));
        value = vp * t(n - 1) - u() * t(n - 1).pow(p);
        for (unsigned k = 1; k < n; ++k) {
            const unsigned long e = geometric_exponent(p, k);
            const Element inner = vp * t(n - 1 - k).pow(ulpow(p, k)) -
                                  u().pow(ulpow(p, k)) * t(n - 1 - k).pow(ulpow(p, k + 1));
            value += u().pow(e) * inner * Rational(1, upow(p, k));
        }
        value *= Rational(1, p);
    }
    std::lock_guard lock(mutex_);
    if (!t_[n])
        t_[n] = std::move(value);
    return *t_[n];
}

Element RationalModel::image(const Element& a) const
{
    std::map<std::string, Element> assignment;
    assignment.emplace("u", u());
    for (unsigned k = 1; k <= max_index_; ++k)
        assignment.emplace("t" + std::to_string(k), t(k));
    return RingMap(source_, uv_, assignment).apply(a);
}

Element kane_generator(const RationalModel& model, unsigned n, unsigned i)
{
    if (n < 1)
        throw std::out_of_range("kane_generator needs n >= 1");
    const unsigned long p = model.p();
    const long bound = legendre_factorial_valuation(n, p);
    if (static_cast<long>(i) > bound)
        throw std::out_of_range("kane_generator: i = " + std::to_string(i) + " exceeds nu_p(n!) = " +
                                std::to_string(bound));
    Element r = model.u().pow(i) * model.v();
    for (unsigned j = 1; j < n; ++j)
        r = r * (model.v() - model.u() * Rational(Integer(j) * Integer(p - 1)));
    return r * Rational(1, upow(p, i));
}

LatticeSlice lattice_slice(const RationalModel& model, int degree)
{
    const unsigned long p = model.p();
    LatticeSlice slice;
    slice.degree = degree;
    slice.coordinates = monomial_basis(*model.uv(), 0, degree);
    const std::size_t dim = slice.coordinates.size();
    if (dim == 0)
        return slice;
    if (degree > 0 && 2 * ulpow(p, model.max_index() + 1) - 2 <= static_cast<unsigned long>(degree))
        throw std::out_of_range("lattice_slice: model index bound too small for degree " + std::to_string(degree));
    const auto index = index_basis(slice.coordinates);

    std::vector<Vector> gens;
    for (const auto& m : monomial_basis(*model.source(), 0, degree)) {
        const Element img = model.image(Element::monomial(model.source(), m));
        Vector v(dim);
        for (const auto& [mm, c] : img.terms())
            v[index.at(mm)] = c;
        gens.push_back(std::move(v));
    }

    // Scale to p-integral vectors, then echelon form over Z_(p) position by position.
    long shift = 0;
    for (const auto& g : gens)
        for (const auto& c : g)
            if (c != 0)
                shift = std::max(shift, -valuation(c, p).value);
    const Rational up(upow(p, static_cast<unsigned>(shift)));
    for (auto& g : gens)
        for (auto& c : g)
            c *= up;
    const Coefficients k = Coefficients::local(p);
    std::size_t done = 0;
    for (std::size_t j = 0; j < dim && done < gens.size(); ++j) {
        std::size_t best = gens.size();
        long best_w = 0;
        for (std::size_t g = done; g < gens.size(); ++g) {
            if (gens[g][j] == 0)
                continue;
            const long w = k.weight(gens[g][j]);
            if (best == gens.size() || w < best_w) {
                best = g;
                best_w = w;
            }
        }
        if (best == gens.size())
            continue;
        std::swap(gens[done], gens[best]);
        Vector& piv = gens[done];
        const Rational scale = Rational(upow(p, static_cast<unsigned>(best_w))) / piv[j];
        for (auto& c : piv)
            c *= scale;
        for (std::size_t g = done + 1; g < gens.size(); ++g) {
            if (gens[g][j] == 0)
                continue;
            const Rational f = gens[g][j] / piv[j];
            for (std::size_t c = j; c < dim; ++c)
                gens[g][c] -= f * piv[c];
        }
        const Integer modulus = upow(p, static_cast<unsigned>(best_w));
        for (std::size_t prev = 0; prev < slice.basis.size(); ++prev) {
            Vector& row = slice.basis[prev];
            if (row[j] == 0)
                continue;
            const Rational q = (row[j] - Rational(residue_mod(row[j], modulus))) / piv[j];
            for (std::size_t c = j; c < dim; ++c)
                row[c] -= q * piv[c];
        }
        slice.basis.push_back(piv);
        slice.pivots.push_back(j);
        ++done;
        gens.erase(std::remove_if(gens.begin() + static_cast<long>(done), gens.end(),
                                  [](const Vector& v) {
                                      return std::all_of(v.begin(), v.end(), [](const Rational& c) { return c == 0; });
                                  }),
                   gens.end());
    }
    for (auto& row : slice.basis)
        for (auto& c : row)
            c /= up;
    return slice;
}

ImageLattice build_lattice(const RationalModel& model, int max_degree, unsigned threads)
{
    ImageLattice lattice;
    lattice.p = model.p();
    lattice.max_degree = max_degree;
    lattice.uv = model.uv();
    const int du = model.unit_degree();
    const std::size_t count = max_degree < 0 ? 0 : static_cast<std::size_t>(max_degree / du) + 1;
    for (unsigned k = 1; k <= model.max_index(); ++k)
        model.t(k);
    auto slices = parallel_map<LatticeSlice>(count, threads, [&](std::size_t i) {
        return lattice_slice(model, static_cast<int>(i) * du);
    });
    for (auto& s : slices)
        lattice.slices.emplace(s.degree, std::move(s));
    return lattice;
}

Membership slice_member(const LatticeSlice& slice, const TablePtr& uv, unsigned long p, const Element& f)
{
    Membership out;
    if (f.is_zero()) {
        out.member = true;
        out.coordinates.assign(slice.basis.size(), Rational(0));
        return out;
    }
    const auto bd = f.bidegree();
    if (!bd)
        throw std::invalid_argument("lattice_member: element is not homogeneous");
    if (bd->internal != slice.degree)
        throw std::invalid_argument("lattice_member: degree does not match the slice");
    const Element g = f.table() == uv ? f : rebase(f, uv);
    const auto index = index_basis(slice.coordinates);
    Vector rest(slice.coordinates.size());
    for (const auto& [m, c] : g.terms())
        rest[index.at(m)] = c;
    out.coordinates.assign(slice.basis.size(), Rational(0));
    for (std::size_t b = 0; b < slice.basis.size(); ++b) {
        const std::size_t j = slice.pivots[b];
        if (rest[j] == 0)
            continue;
        const Rational c = rest[j] / slice.basis[b][j];
        out.coordinates[b] = c;
        for (std::size_t col = j; col < rest.size(); ++col)
            rest[col] -= c * slice.basis[b][col];
    }
    if (std::any_of(rest.begin(), rest.end(), [](const Rational& c) { return c != 0; })) {
        out.reason = "not in the rational span";
        return out;
    }
    out.member = true;
    for (std::size_t b = 0; b < out.coordinates.size(); ++b) {
        if (!is_p_integral(out.coordinates[b], p)) {
            out.member = false;
            out.reason = "coordinate " + std::to_string(b) + " = " + to_string(out.coordinates[b]) +
                         " is not p-integral";
            break;
        }
    }
    return out;
}

Membership lattice_member(const ImageLattice& lattice, const Element& f)
{
    if (f.is_zero())
        return {true, {}, ""};
    const auto bd = f.bidegree();
    if (!bd)
        throw std::invalid_argument("lattice_member: element is not homogeneous");
    if (bd->internal > lattice.max_degree)
        throw std::out_of_range("lattice_member: degree " + std::to_string(bd->internal) + " exceeds the lattice bound " +
                                std::to_string(lattice.max_degree));
    auto it = lattice.slices.find(bd->internal);
    if (it == lattice.slices.end())
        return {false, {}, "no lattice slice in this degree"};
    return slice_member(it->second, lattice.uv, lattice.p, f);
}

namespace {

CongruencePart congruence_part(const RationalModel& model, std::string name, const Element& numerator)
{
    const unsigned long p = model.p();
    CongruencePart part{std::move(name), numerator, false, std::nullopt, {}, false};
    if (numerator.is_zero()) {
        part.divisible_by_u = true;
        part.quotient = Element(model.uv());
        part.membership = {true, {}, ""};
        part.holds = true;
        return part;
    }
    const auto q = divide_by_monomial(numerator, Monomial::generator(model.uv()->index_of("u")));
    if (!q) {
        part.membership.reason = "u does not divide the numerator";
        return part;
    }
    part.divisible_by_u = true;
    part.quotient = *q * Rational(1, p);
    const auto bd = part.quotient->bidegree();
    if (!bd) {
        part.membership.reason = "quotient is not homogeneous";
        return part;
    }
    part.membership = slice_member(lattice_slice(model, bd->internal), model.uv(), p, *part.quotient);
    part.holds = part.membership.member;
    return part;
}

}  // namespace

CongruenceReport check_congruence_pu(const RationalModel& model, unsigned n)
{
    if (n < 1)
        throw std::invalid_argument("check_congruence_pu needs n >= 1");
    if (n > model.max_index())
        throw std::out_of_range("check_congruence_pu: n beyond the model's index bound");
    const unsigned long p = model.p();
    const unsigned long top = ulpow(p, n - 1);
    const Element u = model.u();
    const Element pt = model.t(n) * Rational(p);
    const Element& prev = model.t(n - 1);
    const Element t1 = model.t(1);

    CongruenceReport r;
    r.n = n;
    r.scope = "torsion-free quotient of ell_*ell embedded in Q[u,v]; torsion is handled by the Koszul homology";
    r.q1 = congruence_part(model, "q1", pt - model.v().pow(top) * prev + u * prev.pow(p));
    r.q2 = congruence_part(model, "q2",
                           pt - Rational(upow(p, static_cast<unsigned>(top))) * t1.pow(top) * prev -
                               u.pow(top) * prev + u * prev.pow(p));
    r.holds = r.q1.holds && r.q2.holds;
    return r;
}

namespace {

nlohmann::json part_json(const CongruencePart& part)
{
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& c : part.membership.coordinates)
        coords.push_back(to_string(c));
    nlohmann::json j = {{"name", part.name},
                        {"numerator", part.numerator ? part.numerator->to_string() : std::string("0")},
                        {"divisible_by_u", part.divisible_by_u},
                        {"quotient", part.quotient ? nlohmann::json(part.quotient->to_string()) : nlohmann::json()},
                        {"quotient_coordinates", coords},
                        {"holds", part.holds}};
    if (!part.membership.reason.empty())
        j["witness"] = part.membership.reason;
    return j;
}

}  // namespace

nlohmann::json to_json(const CongruenceReport& r)
{
    return {{"n", r.n}, {"ideal", r.ideal}, {"scope", r.scope}, {"holds", r.holds},
            {"q1", part_json(r.q1)}, {"q2", part_json(r.q2)}};
}

bool power_congruence(const Integer& z, const Integer& x, const Integer& y, const Integer& t, unsigned long p,
                      unsigned k)
{
    require_odd_prime(p);
    const Integer pz(p);
    if (t == 0)
        throw std::invalid_argument("power_congruence: t must be nonzero");
    if (Integer(z - pz * x - t * y) % Integer(pz * t) != 0)
        throw std::invalid_argument("power_congruence: z is not congruent to p x + t y mod (p t)");
    const unsigned long e = ulpow(p, k);
    const Integer lhs = zpow(z, e);
    const Integer rhs = zpow(pz, e) * zpow(x, e) + zpow(t, e) * zpow(y, e);
    return Integer(lhs - rhs) % Integer(zpow(pz, k + 1) * t) == 0;
}

bool power_congruence(const Element& z, const Element& x, const Element& y, const Element& t, unsigned long p,
                      unsigned k)
{
    require_odd_prime(p);
    if (t.is_zero())
        throw std::invalid_argument("power_congruence: t must be nonzero");
    const Rational pq(p);
    const auto hyp = exact_quotient(z - x * pq - t * y, t * pq);
    if (!hyp || !is_p_integral(*hyp, p))
        throw std::invalid_argument("power_congruence: z is not congruent to p x + t y mod (p t)");
    const unsigned long e = ulpow(p, k);
    const Element diff = z.pow(e) - x.pow(e) * Rational(upow(p, static_cast<unsigned>(e))) - t.pow(e) * y.pow(e);
    const auto q = exact_quotient(diff, t * Rational(upow(p, k + 1)));
    return q && is_p_integral(*q, p);
}

bool unit_power_congruence(unsigned long p, unsigned k)
{
    FormulaContext ctx(p, 1);
    const Element u = ctx.u();
    const Element v = u + ctx.t(1, ctx.ellbp()) * Rational(p);
    const unsigned long e = ulpow(p, k);
    const Element diff = v.pow(e) - u.pow(e);
    return min_valuation(diff, p) >= Valuation{static_cast<long>(k) + 1, false};
}

CrosscheckReport torsion_crosscheck(unsigned long p, int max_degree, unsigned threads)
{
    CrosscheckReport report;
    report.p = p;
    report.max_degree = max_degree;
    const TorsionTable table = torsion_table(KoszulCase::Ell, p, max_degree, threads);
    const auto basis = torsion_basis(p, max_degree);
    std::map<int, std::size_t> steenrod;
    for (const auto& c : basis)
        ++steenrod[c.degree];
    std::map<int, std::size_t> tor;
    for (const auto& e : table.entries)
        if (!e.torsion.empty())
            tor[e.s + e.t] += e.torsion.size();
    std::map<int, CrosscheckEntry> merged;
    for (const auto& [d, n] : tor)
        if (d <= max_degree)
            merged[d].tor_count = n;
    for (const auto& [d, n] : steenrod)
        merged[d].steenrod_count = n;
    for (auto& [d, e] : merged) {
        e.degree = d;
        report.entries.push_back(e);
        if (e.tor_count != e.steenrod_count)
            report.counts_agree = false;
    }

    // Delta_u classes of the ellbar complex pushed through the connecting map.
    const unsigned n = FormulaContext::index_bound(p, max_degree);
    FormulaContext ctx(p, n);
    const KoszulSpec bar = case_spec(ctx, KoszulCase::EllBar, max_degree);
    const KoszulSpec ell = case_spec(ctx, KoszulCase::Ell, max_degree);
    std::vector<std::vector<int>> index_sets;
    std::vector<int> current;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (current.size() >= 2)
            index_sets.push_back(current);
        for (std::size_t i = start; i < bar.labels.size(); ++i) {
            current.push_back(bar.labels[i]);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
    std::vector<std::pair<std::vector<int>, Element>> classes;
    for (const auto& idx : index_sets) {
        Element d = delta_class(bar, idx);
        const auto bd = d.bidegree();
        if (!d.is_zero() && bd && bd->internal <= max_degree)
            classes.emplace_back(idx, std::move(d));
    }
    report.delta_checks = parallel_map<DeltaBoundaryCheck>(classes.size(), threads, [&](std::size_t i) {
        const auto& [idx, z] = classes[i];
        const Element image = connecting_map(ell, z);
        DeltaBoundaryCheck c;
        c.indices = idx;
        c.s = z.bidegree()->homological - 1;
        c.t = z.bidegree()->internal;
        const ChainSlice slice = build(ell, c.t);
        const Element lifted = image * Rational(p);
        c.nonzero = !image.is_zero() && !is_boundary(ell, slice, c.s, image);
        c.killed_by_p = is_boundary(ell, slice, c.s, lifted);
        return c;
    });
    for (const auto& c : report.delta_checks)
        if (!c.nonzero || !c.killed_by_p)
            report.deltas_order_p = false;
    report.holds = report.counts_agree && report.deltas_order_p;
    return report;
}

nlohmann::json to_json(const CrosscheckReport& r)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"degree", e.degree},
                           {"tor_count", e.tor_count},
                           {"steenrod_count", e.steenrod_count},
                           {"agree", e.tor_count == e.steenrod_count}});
    nlohmann::json deltas = nlohmann::json::array();
    for (const auto& c : r.delta_checks)
        deltas.push_back({{"indices", c.indices},
                          {"s", c.s},
                          {"t", c.t},
                          {"nonzero", c.nonzero},
                          {"killed_by_p", c.killed_by_p}});
    return {{"p", r.p},
            {"max_degree", r.max_degree},
            {"entries", entries},
            {"delta_checks", deltas},
            {"counts_agree", r.counts_agree},
            {"deltas_order_p", r.deltas_order_p},
            {"holds", r.holds}};
}

}  // namespace ellcoop
