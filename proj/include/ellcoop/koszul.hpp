#pragma once

// Koszul complexes Lambda_R(e_r) with d(e_r) = image_r over a polynomial base
// ring, including scaled complexes d(e'_r) = x w_r and the Delta_x classes.

#include "ellcoop/bp.hpp"
#include "ellcoop/galg.hpp"
#include "ellcoop/matrix.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ellcoop {

enum class KoszulCase { Ell, EllBar, HQ, HFp };

std::string case_name(KoszulCase c);
KoszulCase parse_case(std::string_view name);

struct KoszulSpec
{
    std::string label;
    // Base generators first, then one exterior generator per label.
    TablePtr table;
    std::size_t base_size = 0;
    Coefficients coeffs;
    std::vector<int> labels;
    std::vector<Element> images;
    // Scaled complexes: images[k] = scale * w[k].
    std::optional<Element> scale;
    std::vector<Element> w;
    int max_degree = 0;

    std::size_t position_of_label(int r) const;
    std::size_t table_index_of_label(int r) const { return base_size + position_of_label(r); }
    const Element& w_of(int r) const;
    std::size_t exterior_count() const { return labels.size(); }
};

struct ExteriorGenerator
{
    int label = 0;
    int degree = 0;  // internal degree of the exterior generator
    Element image;   // over the base table; w_r for scaled specs
};

// Exterior generators are named prefix + label with bidegree (1, degree).
// Nonzero images must be homogeneous of that degree (of degree - |x| for
// scaled specs); generators of degree above max_degree are dropped.
KoszulSpec make_koszul_spec(std::string label, const TablePtr& base, const std::vector<ExteriorGenerator>& gens,
                            const Coefficients& coeffs, int max_degree, const std::string& prefix = "e");
KoszulSpec make_scaled_spec(std::string label, const TablePtr& base, const Element& x,
                            const std::vector<ExteriorGenerator>& gens, const Coefficients& coeffs, int max_degree,
                            const std::string& prefix = "e");

// The four BP-derived complexes, exterior generators e_r for r >= 2:
//   Ell     Z_(p)[u, t_k],  d(e_r) = ell(v_r)
//   EllBar  F_p[u, t_k],    d(e_r) = u * w_r with u w_r = ell(v_r) mod p
//   HQ      Q[l_k],         d(e_r) = v_r (Hazewinkel)
//   HFp     F_p[l_k],       d(e_r) = v_r mod p = 0
KoszulSpec case_spec(const FormulaContext& ctx, KoszulCase c, int max_degree);

// Synthetic ring Z_(p)[x, w_1..w_n (, y)] with |x| = 2, |w_r| = 2r, |y| = 4 and
// the scaled differential d(e_r) = x w_r.
KoszulSpec synthetic_spec(unsigned long p, int w_count, bool with_y, int max_degree,
                          std::optional<Coefficients> coeffs = std::nullopt);

struct ChainSlice
{
    int t = 0;
    std::vector<std::vector<Monomial>> bases;
    // boundaries[s]: C_s -> C_{s-1} (rows: basis s-1, columns: basis s); [0] is empty.
    std::vector<SparseMatrix> boundaries;

    int top_degree() const { return static_cast<int>(bases.size()) - 1; }
    std::size_t dim(int s) const;
    // d_s as a matrix; zero-size matrices outside the stored range.
    SparseMatrix boundary(int s) const;
};

ChainSlice build(const KoszulSpec& spec, int t);
Element differential(const KoszulSpec& spec, const Element& a);

Vector coordinates(const Element& a, const std::vector<Monomial>& basis, const Coefficients& coeffs);
Element from_coordinates(const TablePtr& table, const std::vector<Monomial>& basis, const Vector& v);

// Delta_x(i_1, ..., i_{n+1}) for a sequence of distinct labels; Delta_x(i) := w_i.
Element delta_class(const KoszulSpec& spec, const std::vector<int>& indices);

struct DeltaTerm
{
    Element coefficient;  // base-ring element
    std::vector<int> indices;
};

struct DeltaProduct
{
    enum class Kind { Vanishing, SharedIndex, Disjoint };
    Kind kind = Kind::Vanishing;
    std::vector<DeltaTerm> terms;
    Element product;  // the raw product in the exterior algebra
    // Shared-index case: the sign (-1)^a of the printed relation, and the
    // sign that actually holds. Disjoint case: sign = 1 and printed_sign is
    // the factor (-1)^{r+s} between the printed expansion and the product.
    int printed_sign = 0;
    int sign = 0;
};

// Expands Delta(I) * Delta(J) by cases on the size of the union of index sets
// and checks the expansion against the raw product (std::logic_error on
// mismatch). |I|, |J| >= 2.
DeltaProduct delta_product(const KoszulSpec& spec, const std::vector<int>& i, const std::vector<int>& j);
Element expand(const KoszulSpec& spec, const std::vector<DeltaTerm>& terms);

// sum_j (-1)^j w_{i_j} Delta_x(..., hat i_j, ...).
Element delta_syzygy(const KoszulSpec& spec, const std::vector<int>& indices);

// Snake-lemma boundary for 0 -> C --p--> C -> C/p -> 0: lifts a mod-p cycle
// coefficientwise to least non-negative residues, applies d and divides by p.
// Throws std::invalid_argument if z is not a cycle mod p.
Element connecting_map(const KoszulSpec& integral, const Element& z);

nlohmann::json slice_to_json(const KoszulSpec& spec, const ChainSlice& slice);

// Index of each basis monomial.
std::unordered_map<Monomial, std::size_t, MonomialHash> index_basis(const std::vector<Monomial>& basis);

}  // namespace ellcoop
