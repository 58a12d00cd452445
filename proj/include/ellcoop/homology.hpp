#pragma once

// Degreewise homology of Koszul slices, Bockstein pages and torsion tables.

#include "ellcoop/koszul.hpp"
#include "ellcoop/matrix.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ellcoop {

struct HomologySummary
{
    int s = 0;
    int t = 0;
    std::size_t free_rank = 0;
    // Exponents e of the cyclic summands Z/p^e, non-decreasing.
    std::vector<long> torsion;
    // Filled on request: cycles generating the torsion summands (same order
    // as `torsion`), over the spec's table.
    std::vector<Element> torsion_representatives;

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const HomologySummary& o) const
    {
        return s == o.s && t == o.t && free_rank == o.free_rank && torsion == o.torsion;
    }
};

// Homology at every s of an already built slice.
std::vector<HomologySummary> slice_homology(const KoszulSpec& spec, const ChainSlice& slice,
                                            bool representatives = false);
HomologySummary homology_at(const KoszulSpec& spec, int s, int t, bool representatives = false);

// Is the chain z (over spec.table, homological degree s, internal degree t)
// a boundary over the spec's coefficient ring?
bool is_boundary(const KoszulSpec& spec, const ChainSlice& slice, int s, const Element& z);

// Prediction of the homology of a scaled spec on a synthetic polynomial ring
// in which x and the w_r are generators: R/(x w_r) for s = 0, and for s > 0
// the R/(x)-module on Delta_x classes modulo the syzygy relations.
HomologySummary generalized_koszul_oracle(const KoszulSpec& spec, int s, int t);
// The Koszul complexes on the w_r over R and over R/(x) are exact at (s, t)
// for s >= 1.
bool regularity_holds(const KoszulSpec& spec, int t);
// Cycles at (s, t) equal the span of the Delta_x classes (with base-ring
// coefficients) plus boundaries, over the spec's coefficient ring.
bool delta_span_holds(const KoszulSpec& spec, int s, int t);

struct BocksteinPage
{
    int r = 0;
    std::map<std::pair<int, int>, std::size_t> dims;  // (s, t) -> dim B^r
};

struct BocksteinResult
{
    std::vector<BocksteinPage> pages;  // r = 0 .. r_max, B^0 = H(C/x)
    // dim B^1 = dim B^r for every r in [1, r_max] and every degree.
    bool stabilizes = false;
};

// Pages of the Bockstein spectral sequence for multiplication by x on the
// homology of the spec's complex, in internal degrees <= max_degree.
// Supported: x = p (a constant) over Z_(p), or x a homogeneous base-ring
// element of positive degree over a field.
BocksteinResult bockstein_pages(const KoszulSpec& spec, const Element& x, int r_max, int max_degree,
                                unsigned threads = 1);

// dim_k of (R / (generators))_t for R the base ring of the table prefix
// [0, base_size) over a field.
std::size_t quotient_dimension(const TablePtr& table, std::size_t base_size, const std::vector<Element>& generators,
                               int t, const Coefficients& coeffs);

struct TorsionTable
{
    unsigned long p = 0;
    KoszulCase kind = KoszulCase::Ell;
    int max_degree = 0;
    std::string coefficients;
    std::vector<std::string> generators;
    std::vector<HomologySummary> entries;  // nonzero groups, ordered by (s, t)
    std::optional<std::pair<int, int>> first_torsion;  // (s, t)
    bool all_torsion_simple = true;

    std::size_t torsion_count_at(int total_degree) const;
};

TorsionTable torsion_table(KoszulCase kind, unsigned long p, int max_degree, unsigned threads = 1,
                           bool representatives = false);
nlohmann::json to_json(const TorsionTable& table);
std::string to_csv(const TorsionTable& table);

struct TorsionComparison
{
    struct Entry
    {
        int s = 0;
        int t = 0;
        std::size_t index = 0;
        bool p_kills = false;
        bool u_kills = false;
    };
    std::vector<Entry> torsion;
    std::size_t free_classes_checked = 0;
    bool free_classes_survive = true;
    bool holds = true;
};

// For each torsion class of the ell-case table in degrees <= max_degree - |u|,
// p times and u times a representative are boundaries; u times a free
// class is not.
TorsionComparison u_p_torsion_compare(const FormulaContext& ctx, int max_degree, unsigned threads = 1);

}  // namespace ellcoop
