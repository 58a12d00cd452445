#pragma once

// The rational model Q[u, v] of the torsion-free part of ell_*ell: recursive
// t_n, Kane's generators, the image lattice and congruence checks.

#include "ellcoop/galg.hpp"
#include "ellcoop/matrix.hpp"

#include <json.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ellcoop {

class FormulaContext;

class RationalModel
{
public:
    // t_1 .. t_{max_index} available.
    RationalModel(unsigned long p, unsigned max_index);

    unsigned long p() const { return p_; }
    unsigned max_index() const { return max_index_; }
    int unit_degree() const { return static_cast<int>(2 * p_ - 2); }
    // Q[u, v].
    const TablePtr& uv() const { return uv_; }
    // Z_(p)[u, t_1 .. t_N], |t_k| = 2p^k - 2.
    const TablePtr& source() const { return source_; }

    Element u() const;
    Element v() const;
    // p t_n = v^{p^{n-1}} t_{n-1} - u t_{n-1}^p
    //       + sum_{1<=k<n} u^{e_k} (v^{p^{n-1}} t_{n-1-k}^{p^k} - u^{p^k} t_{n-1-k}^{p^{k+1}}) / p^k,
    // e_k = (p^k - 1)/(p - 1), t_0 = 1; over uv.
    const Element& t(unsigned n) const;
    // Image of an element of source under u -> u, t_k -> t(k).
    Element image(const Element& a) const;

private:
    unsigned long p_;
    unsigned max_index_;
    TablePtr uv_;
    TablePtr source_;
    mutable std::mutex mutex_;
    mutable std::vector<std::optional<Element>> t_;
};

// Largest index n with |t_n| <= max_degree (at least 1).
unsigned model_index_bound(unsigned long p, int max_degree);

// u^i v (v - (p-1)u) ... (v - (n-1)(p-1)u) / p^i with 0 <= i <= nu_p(n!);
// std::out_of_range otherwise.
Element kane_generator(const RationalModel& model, unsigned n, unsigned i);

struct LatticeSlice
{
    int degree = 0;
    // Coordinates are over the uv monomials of this degree (monomial_basis order).
    std::vector<Monomial> coordinates;
    // Echelon basis: pivot entries are powers of p (possibly negative), and
    // p^m times the entries above a pivot p^e are residues in [0, p^{e+m}),
    // m the largest p-denominator exponent among the generators.
    std::vector<Vector> basis;
    std::vector<std::size_t> pivots;
};

struct ImageLattice
{
    unsigned long p = 0;
    int max_degree = 0;
    TablePtr uv;
    std::map<int, LatticeSlice> slices;
};

// Z_(p)-span of the images of all monomials u^a prod t_k of the given degree.
LatticeSlice lattice_slice(const RationalModel& model, int degree);
// Slices in every degree that is a multiple of |u| up to max_degree.
ImageLattice build_lattice(const RationalModel& model, int max_degree, unsigned threads = 1);

struct Membership
{
    bool member = false;
    // Coordinates against the slice basis (Q; p-integral iff member).
    Vector coordinates;
    std::string reason;
};

// f homogeneous over uv; std::out_of_range if its degree exceeds the lattice,
// std::invalid_argument if inhomogeneous.
Membership lattice_member(const ImageLattice& lattice, const Element& f);
Membership slice_member(const LatticeSlice& slice, const TablePtr& uv, unsigned long p, const Element& f);

struct CongruencePart
{
    std::string name;
    std::optional<Element> numerator;
    bool divisible_by_u = false;
    std::optional<Element> quotient;  // numerator / (p u)
    Membership membership;
    bool holds = false;
};

struct CongruenceReport
{
    unsigned n = 0;
    std::string ideal = "(pu)";
    std::string scope;
    CongruencePart q1;
    CongruencePart q2;
    bool holds = false;
};

CongruenceReport check_congruence_pu(const RationalModel& model, unsigned n);
nlohmann::json to_json(const CongruenceReport& r);

// z == p x + t y mod (p t) is required (std::invalid_argument otherwise);
// returns whether z^{p^k} == p^{p^k} x^{p^k} + t^{p^k} y^{p^k} mod (p^{k+1} t).
bool power_congruence(const Integer& z, const Integer& x, const Integer& y, const Integer& t, unsigned long p,
                      unsigned k);
// Same over a polynomial ring with Z_(p) coefficients (exact division).
bool power_congruence(const Element& z, const Element& x, const Element& y, const Element& t, unsigned long p,
                      unsigned k);
// v^{p^k} - u^{p^k} has every coefficient of valuation >= k + 1, v = u + p t_1.
bool unit_power_congruence(unsigned long p, unsigned k);

struct CrosscheckEntry
{
    int degree = 0;
    std::size_t tor_count = 0;
    std::size_t steenrod_count = 0;
};

struct DeltaBoundaryCheck
{
    std::vector<int> indices;
    int s = 0;  // homological degree of the image
    int t = 0;
    bool nonzero = false;
    bool killed_by_p = false;
};

struct CrosscheckReport
{
    unsigned long p = 0;
    int max_degree = 0;
    std::vector<CrosscheckEntry> entries;  // degrees where either side is nonzero
    std::vector<DeltaBoundaryCheck> delta_checks;
    bool counts_agree = true;
    bool deltas_order_p = true;
    bool holds = true;
};

// Per total degree, Z/p summands of the ell-case Tor table against the
// dimension of the Steenrod torsion basis; plus connecting-map images of the
// Delta_u classes of the ellbar complex.
CrosscheckReport torsion_crosscheck(unsigned long p, int max_degree, unsigned threads = 1);
nlohmann::json to_json(const CrosscheckReport& r);

}  // namespace ellcoop
