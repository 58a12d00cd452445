#include "ellcoop/report.hpp"

#include "ellcoop/bp.hpp"
#include "ellcoop/coop.hpp"
#include "ellcoop/homology.hpp"
#include "ellcoop/steenrod.hpp"

#include <algorithm>
#include <limits>

namespace ellcoop {

namespace {

std::vector<std::string> names_of(const GeneratorTable& table)
{
    std::vector<std::string> out;
    for (const auto& g : table.generators())
        out.push_back(g.name + ":(" + std::to_string(g.homological_degree) + "," + std::to_string(g.degree) + ")");
    return out;
}

nlohmann::json header(const std::string& command, const RunOptions& o)
{
    return {{"command", command}, {"p", o.p}};
}

void require_n(const RunOptions& o, unsigned lo)
{
    if (o.n < lo)
        throw std::invalid_argument("--n must be at least " + std::to_string(lo));
}

constexpr int max_supported_degree = 1 << 20;

// Formula commands at index n work in degree |t_n| over l_k, t_k (k <= n).
void preflight_index(const RunOptions& o, unsigned n)
{
    if (n > 40)
        throw InfeasibleError("index " + std::to_string(n) + " is infeasible");
    const Integer degree = 2 * ipow(o.p, n) - 2;
    if (degree > max_supported_degree)
        throw InfeasibleError("index " + std::to_string(n) + " is infeasible: degree " + degree.get_str());
    FormulaContext ctx(o.p, n);
    preflight(*ctx.bpbp(), static_cast<int>(degree.get_si()), o.slice_limit);
}

std::vector<int> sorted_unique(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<std::size_t> slice_sizes(const GeneratorTable& table, int max_degree)
{
    if (max_degree < 0)
        return {};
    if (max_degree > max_supported_degree)
        throw InfeasibleError("degree bound " + std::to_string(max_degree) + " exceeds " +
                              std::to_string(max_supported_degree));
    constexpr std::size_t cap = std::numeric_limits<std::size_t>::max() / 2;
    std::vector<std::size_t> count(static_cast<std::size_t>(max_degree) + 1, 0);
    count[0] = 1;
    for (const auto& g : table.generators()) {
        if (g.degree <= 0 || g.degree > max_degree)
            continue;
        const auto d = static_cast<std::size_t>(g.degree);
        if (g.parity == Parity::Even) {
            for (std::size_t x = d; x < count.size(); ++x)
                count[x] = std::min(cap, count[x] + count[x - d]);
        }
        else {
            for (std::size_t x = count.size(); x-- > d;)
                count[x] = std::min(cap, count[x] + count[x - d]);
        }
    }
    return count;
}

std::size_t estimate_slice_size(const KoszulSpec& spec, int t)
{
    if (t < 0)
        return 0;
    return slice_sizes(*spec.table, t).back();
}

void preflight(const GeneratorTable& table, int max_degree, std::size_t limit)
{
    const auto sizes = slice_sizes(table, max_degree);
    for (std::size_t t = 0; t < sizes.size(); ++t)
        if (sizes[t] > limit)
            throw InfeasibleError("degree bound " + std::to_string(max_degree) + " is infeasible: the slice at t = " +
                                  std::to_string(t) + " has " + std::to_string(sizes[t]) + " basis elements (limit " +
                                  std::to_string(limit) + "); lower the bound or raise --slice-limit");
}

void preflight(const KoszulSpec& spec, int max_degree, std::size_t limit)
{
    preflight(*spec.table, max_degree, limit);
}

void preflight_case(unsigned long p, KoszulCase kind, int max_degree, std::size_t limit)
{
    require_odd_prime(p);
    if (max_degree > max_supported_degree)
        throw InfeasibleError("degree bound " + std::to_string(max_degree) + " exceeds " +
                              std::to_string(max_supported_degree));
    const unsigned top = FormulaContext::index_bound(p, max_degree);
    GeneratorTable table;
    if (kind == KoszulCase::Ell || kind == KoszulCase::EllBar)
        table.add({"u", static_cast<int>(2 * p - 2), Parity::Even, 0});
    for (unsigned k = 1; k <= top; ++k)
        table.add({"g" + std::to_string(k), static_cast<int>(2 * ipow(p, k).get_ui() - 2), Parity::Even, 0});
    for (unsigned k = 2; k <= top; ++k)
        table.add({"e" + std::to_string(k), static_cast<int>(2 * ipow(p, k).get_ui() - 2), Parity::Odd, 1});
    preflight(table, max_degree, limit);
}

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"hazewinkel", "eta-r",         "ell-image",  "tor-table",
                                                   "delta",      "bockstein",     "steenrod-q", "torsion-basis",
                                                   "congruence", "crosscheck"};
    return names;
}

Report run_command(const std::string& command, const RunOptions& o)
{
    require_odd_prime(o.p);
    if (command == "hazewinkel")
        return hazewinkel_report(o);
    if (command == "eta-r")
        return eta_r_report(o);
    if (command == "ell-image")
        return ell_image_report(o);
    if (command == "tor-table")
        return tor_table_report(o);
    if (command == "delta")
        return delta_report(o);
    if (command == "bockstein")
        return bockstein_report(o);
    if (command == "steenrod-q")
        return steenrod_q_report(o);
    if (command == "torsion-basis")
        return torsion_basis_report(o);
    if (command == "congruence")
        return congruence_report(o);
    if (command == "crosscheck")
        return crosscheck_report(o);
    throw std::invalid_argument("unknown command: " + command);
}

Report hazewinkel_report(const RunOptions& o)
{
    require_n(o, 1);
    preflight_index(o, o.n);
    FormulaContext ctx(o.p, o.n);
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned k = 1; k <= o.n; ++k)
        rows.push_back({{"n", k},
                        {"degree", ctx.generator_degree(k)},
                        {"v_in_l", ctx.hazewinkel(k).to_string()},
                        {"l_in_v", ctx.ell_in_v(k).to_string()}});
    Report r{header("hazewinkel", o), true};
    r.json["generators"] = names_of(*ctx.bp());
    r.json["rows"] = rows;
    return r;
}

Report eta_r_report(const RunOptions& o)
{
    require_n(o, 1);
    preflight_index(o, o.n);
    FormulaContext ctx(o.p, o.n);
    Report r{header("eta-r", o), true};
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned k = 1; k <= o.n; ++k) {
        const Element& integral = ctx.eta_r_v_integral_form(k);
        const bool ok = is_p_integral(integral, o.p);
        r.ok = r.ok && ok;
        rows.push_back({{"n", k},
                        {"eta_r_l", ctx.eta_r_ell(k).to_string()},
                        {"eta_r_v", ctx.eta_r_v(k).to_string()},
                        {"eta_r_v_integral", integral.to_string()},
                        {"p_integral", ok}});
    }
    r.json["generators"] = names_of(*ctx.bpbp_v());
    r.json["rows"] = rows;
    r.json["holds"] = r.ok;
    return r;
}

Report ell_image_report(const RunOptions& o)
{
    require_n(o, 1);
    preflight_index(o, o.n);
    FormulaContext ctx(o.p, o.n);
    Report r{header("ell-image", o), true};
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned k = 1; k <= o.n; ++k) {
        const Element& img = ctx.ell_image_v(k);
        const bool recursion = ctx.ell_image_v_expanded_recursion(k) == img;
        nlohmann::json row = {{"n", k},
                              {"ell_v", img.to_string()},
                              {"p_integral", is_p_integral(img, o.p)},
                              {"expanded_recursion_agrees", recursion}};
        bool ok = recursion && is_p_integral(img, o.p);
        if (k >= 2) {
            const bool congruence = ctx.in_pu_ideal(img - ctx.ell_image_congruence_rhs(k));
            const auto [s1, s2] = ctx.correction_terms(k);
            const Element u = ctx.u();
            const Element tk = ctx.t(k, ctx.ellbp());
            const Element tk1 = ctx.t(k - 1, ctx.ellbp());
            const Element rebuilt = tk * Rational(o.p) + u * tk1.pow(o.p) -
                                    u.pow(ipow(o.p, k - 1).get_ui()) * tk1 + s1 * Rational(o.p) + u * s2;
            const bool reconstruct = rebuilt == img;
            row["congruence_mod_pu"] = congruence;
            row["s_prime"] = s1.to_string();
            row["s_double_prime"] = s2.to_string();
            row["reconstruction"] = reconstruct;
            row["w"] = ctx.reduced_w(k).to_string();
            ok = ok && congruence && reconstruct;
        }
        r.ok = r.ok && ok;
        rows.push_back(row);
    }
    r.json["generators"] = names_of(*ctx.ellbp());
    r.json["rows"] = rows;
    r.json["holds"] = r.ok;
    return r;
}

namespace {

TorsionTable checked_table(const RunOptions& o)
{
    const KoszulCase kind = parse_case(o.kase);
    preflight_case(o.p, kind, o.max_degree, o.slice_limit);
    return torsion_table(kind, o.p, o.max_degree, o.threads);
}

}  // namespace

Report tor_table_report(const RunOptions& o)
{
    const TorsionTable table = checked_table(o);
    Report r{to_json(table), true};
    r.json["command"] = "tor-table";
    return r;
}

std::string tor_table_csv(const RunOptions& o)
{
    return to_csv(checked_table(o));
}

Report delta_report(const RunOptions& o)
{
    if (o.indices.size() < 2)
        throw std::invalid_argument("delta needs --indices with at least two labels");
    Report r{header("delta", o), true};
    std::optional<KoszulSpec> spec;
    std::optional<KoszulSpec> integral;
    if (o.kase == "ellbar") {
        int top = 0;
        for (int i : o.indices)
            top = std::max(top, i);
        for (int i : o.other)
            top = std::max(top, i);
        if (top < 2)
            throw std::invalid_argument("ellbar labels start at 2");
        const unsigned n = static_cast<unsigned>(top);
        preflight_index(o, n);
        FormulaContext ctx(o.p, n);
        const int degree = ctx.generator_degree(n) * static_cast<int>(o.indices.size() + o.other.size());
        preflight_case(o.p, KoszulCase::Ell, degree, o.slice_limit);
        spec = case_spec(ctx, KoszulCase::EllBar, degree);
        integral = case_spec(ctx, KoszulCase::Ell, degree);
    }
    else if (o.kase == "synthetic") {
        int top = 0;
        for (int i : o.indices)
            top = std::max(top, i);
        for (int i : o.other)
            top = std::max(top, i);
        spec = synthetic_spec(o.p, top, false, 1000, Coefficients::local(o.p));
    }
    else {
        throw std::invalid_argument("delta supports --case synthetic or ellbar");
    }
    r.json["case"] = spec->label;
    r.json["generators"] = names_of(*spec->table);
    const Element delta = delta_class(*spec, o.indices);
    const Element d = differential(*spec, delta);
    const bool cycle = (spec->coeffs.kind == Coefficients::Kind::ModP ? reduce_mod_p(d, o.p) : d).is_zero();
    r.json["indices"] = o.indices;
    r.json["delta"] = delta.to_string();
    r.json["is_cycle"] = cycle;
    r.ok = cycle;
    if (o.indices.size() >= 2) {
        const bool syz = delta_syzygy(*spec, o.indices).is_zero();
        r.json["syzygy_vanishes"] = syz;
        r.ok = r.ok && syz;
    }
    if (integral) {
        const Element image = connecting_map(*integral, delta);
        const auto bd = delta.bidegree();
        nlohmann::json c = {{"image", image.to_string()}};
        if (bd && !image.is_zero()) {
            const ChainSlice slice = build(*integral, bd->internal);
            const bool nonzero = !is_boundary(*integral, slice, bd->homological - 1, image);
            const bool killed = is_boundary(*integral, slice, bd->homological - 1, image * Rational(o.p));
            c["nonzero_class"] = nonzero;
            c["killed_by_p"] = killed;
            r.ok = r.ok && nonzero && killed;
        }
        r.json["connecting_map"] = c;
    }
    if (!o.other.empty()) {
        const DeltaProduct prod = delta_product(*spec, o.indices, o.other);
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : prod.terms)
            terms.push_back({{"coefficient", t.coefficient.to_string()}, {"indices", t.indices}});
        const char* kind = prod.kind == DeltaProduct::Kind::Vanishing     ? "vanishing"
                           : prod.kind == DeltaProduct::Kind::SharedIndex ? "shared_index"
                                                                          : "disjoint";
        r.json["product"] = {{"other", o.other},
                             {"kind", kind},
                             {"terms", terms},
                             {"value", prod.product.to_string()},
                             {"printed_sign", prod.printed_sign},
                             {"sign", prod.sign}};
    }
    r.json["holds"] = r.ok;
    return r;
}

Report bockstein_report(const RunOptions& o)
{
    Report r{header("bockstein", o), true};
    std::optional<KoszulSpec> spec;
    std::optional<Element> x;
    if (o.kase == "synthetic") {
        spec = synthetic_spec(o.p, 2, true, o.max_degree + 2 * o.r_max, Coefficients::mod_p(o.p));
        x = Element::generator(spec->table, "x");
    }
    else if (o.kase == "ell") {
        preflight_case(o.p, KoszulCase::Ell, o.max_degree, o.slice_limit);
        FormulaContext ctx(o.p, FormulaContext::index_bound(o.p, o.max_degree));
        spec = case_spec(ctx, KoszulCase::Ell, o.max_degree);
        x = Element::constant(spec->table, Rational(o.p));
    }
    else {
        throw std::invalid_argument("bockstein supports --case synthetic or ell");
    }
    preflight(*spec, spec->max_degree, o.slice_limit);
    const BocksteinResult res = bockstein_pages(*spec, *x, o.r_max, o.max_degree, o.threads);
    nlohmann::json pages = nlohmann::json::array();
    for (const auto& page : res.pages) {
        nlohmann::json dims = nlohmann::json::array();
        for (const auto& [st, d] : page.dims)
            if (d)
                dims.push_back({{"s", st.first}, {"t", st.second}, {"dim", d}});
        pages.push_back({{"r", page.r}, {"dims", dims}});
    }
    r.json["case"] = spec->label;
    r.json["max_degree"] = o.max_degree;
    r.json["x"] = x->to_string();
    r.json["generators"] = names_of(*spec->table);
    r.json["pages"] = pages;
    r.json["stabilizes"] = res.stabilizes;
    return r;
}

Report steenrod_q_report(const RunOptions& o)
{
    if (o.indices.empty())
        throw std::invalid_argument("steenrod-q needs --indices");
    const std::vector<int> idx = sorted_unique(o.indices);
    if (idx != o.indices)
        throw std::invalid_argument("--indices must be strictly increasing");
    Integer total = 0;
    for (int i : idx) {
        if (i < 0 || i > 40)
            throw InfeasibleError("taubar index " + std::to_string(i) + " is infeasible");
        total += 2 * ipow(o.p, static_cast<unsigned long>(i)) - 1;
    }
    if (total > max_supported_degree)
        throw InfeasibleError("degree " + total.get_str() + " is infeasible");
    const int degree = static_cast<int>(total.get_si());
    const SteenrodAlgebra alg(o.p, degree);
    preflight(*alg.table(), degree, o.slice_limit);
    const ParallelogramBottom b = parallelogram_bottom(alg, idx);
    const Element x = alg.tau_product(idx);
    const ECoaction e = e_coaction(alg, x);
    Report r{header("steenrod-q", o), true};
    r.json["indices"] = idx;
    r.json["generators"] = names_of(*alg.table());
    r.json["element"] = x.to_string();
    r.json["q0"] = q_action(alg, 0, x).to_string();
    r.json["q1"] = q_action(alg, 1, x).to_string();
    r.json["q1q0"] = b.derivation.to_string();
    r.json["closed_form"] = b.closed_form.to_string();
    r.json["sign"] = b.sign;
    r.json["e_coaction"] = {{"one", e.one.to_string()},
                            {"alpha", e.alpha.to_string()},
                            {"beta", e.beta.to_string()},
                            {"beta_alpha", e.beta_alpha.to_string()}};
    return r;
}

Report torsion_basis_report(const RunOptions& o)
{
    if (o.max_degree > max_supported_degree)
        throw InfeasibleError("degree bound " + std::to_string(o.max_degree) + " is infeasible");
    preflight(*SteenrodAlgebra(o.p, o.max_degree + 2 * static_cast<int>(o.p)).table(), o.max_degree, o.slice_limit);
    Report r{to_json(torsion_basis(o.p, o.max_degree), o.p, o.max_degree), true};
    r.json["command"] = "torsion-basis";
    return r;
}

Report congruence_report(const RunOptions& o)
{
    require_n(o, 1);
    preflight_index(o, o.n);
    const RationalModel model(o.p, o.n);
    const CongruenceReport c = check_congruence_pu(model, o.n);
    Report r{to_json(c), c.holds};
    r.json["command"] = "congruence";
    r.json["p"] = o.p;
    return r;
}

Report crosscheck_report(const RunOptions& o)
{
    preflight_case(o.p, KoszulCase::Ell, o.max_degree, o.slice_limit);
    const CrosscheckReport c = torsion_crosscheck(o.p, o.max_degree, o.threads);
    Report r{to_json(c), c.holds};
    r.json["command"] = "crosscheck";
    return r;
}

}  // namespace ellcoop
