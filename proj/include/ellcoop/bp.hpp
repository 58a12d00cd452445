#pragma once

// Hazewinkel generators, right units and the ell-theory Hurewicz images.
//
// Tables (names in brackets):
//   bp      Q (x) BP_*       [l1..lN]
//   bp_v    Q (x) BP_*       [v1..vN]           (Hazewinkel generators)
//   bpbp    Q (x) BP_*BP     [l1..lN, t1..tN]
//   bpbp_v  Q (x) BP_*BP     [v1..vN, t1..tN]
//   ellbp   Q (x) ell_*BP    [u, t1..tN]
// with |u| = 2p-2 and |l_k| = |v_k| = |t_k| = 2p^k-2.

#include "ellcoop/galg.hpp"

#include <mutex>
#include <utility>
#include <vector>

namespace ellcoop {

// u^u_exponent * p^p_exponent.
struct UPower
{
    unsigned long u_exponent = 0;
    long p_exponent = 0;
    bool operator==(const UPower&) const = default;
};

// (p^n - 1)/(p - 1).
unsigned long geometric_exponent(unsigned long p, unsigned n);

class FormulaContext
{
public:
    FormulaContext(unsigned long p, unsigned max_index);

    // Largest n with 2p^n - 2 <= max_degree (at least 1).
    static unsigned index_bound(unsigned long p, int max_degree);

    unsigned long p() const { return p_; }
    unsigned max_index() const { return max_index_; }
    int u_degree() const { return static_cast<int>(2 * p_ - 2); }
    int generator_degree(unsigned k) const;

    const TablePtr& bp() const { return bp_; }
    const TablePtr& bp_v() const { return bp_v_; }
    const TablePtr& bpbp() const { return bpbp_; }
    const TablePtr& bpbp_v() const { return bpbp_v_; }
    const TablePtr& ellbp() const { return ellbp_; }

    // v_n = p l_n - sum_{1<=j<n} l_j v_{n-j}^{p^j}, over bp.
    const Element& hazewinkel(unsigned n) const;
    // l_n in Hazewinkel generators over bp_v: p l_n = v_n + sum_{1<=j<n} l_j v_{n-j}^{p^j}.
    const Element& ell_in_v(unsigned n) const;
    // eta_R(l_n) = sum_{0<=j<=n} l_j t_{n-j}^{p^j}, over bpbp.
    const Element& eta_r_ell(unsigned n) const;
    // eta_R(v_n) = p eta_R(l_n) - sum_{1<=j<n} eta_R(l_j) eta_R(v_{n-j})^{p^j}, over bpbp.
    const Element& eta_r_v(unsigned n) const;
    // eta_R(v_n) rewritten over bpbp_v by eliminating the l_k.
    const Element& eta_r_v_integral_form(unsigned n) const;
    // Hurewicz image of v_n in ell_*BP over ellbp; throws std::logic_error if
    // the result is not p-integral.
    const Element& ell_image_v(unsigned n) const;
    // Same value through the expanded recursion for ell(v_n) written in terms
    // of ell(v_1) = u + p t_1 and lower ell(v_k).
    Element ell_image_v_expanded_recursion(unsigned n) const;
    // Image of eta_R(l_n) under l_j -> u^{e_j}/p^j, over ellbp.
    const Element& ell_image_eta_r_ell(unsigned n) const;

    // Decomposition ell(v_n) = p t_n + u t_{n-1}^p - u^{p^{n-1}} t_{n-1} + p s' + u s''
    // with s' the u-free remainder divided by p and s'' the rest divided by u.
    std::pair<Element, Element> correction_terms(unsigned n) const;

    // The right-hand side of the congruence for ell(v_n) mod (pu), n >= 2.
    Element ell_image_congruence_rhs(unsigned n) const;
    // True iff f lies in the ideal (p u) of Z_(p)[u, t_k] (f over ellbp).
    bool in_pu_ideal(const Element& f) const;

    // Reduction mod p of ell(v_n) divided by u; the exterior differential of
    // the ellbar complex is u * w_r.
    Element reduced_w(unsigned n) const;

    // l_n in HQ_*ell: u^{(p^n-1)/(p-1)} / p^n.
    UPower rational_ell_n(unsigned n) const;
    // Image of l_1^{r_1} ... l_k^{r_k}; throws std::logic_error if the p-adic
    // exponent exceeds the u exponent.
    UPower ell_monomial_image(const std::vector<unsigned>& exponents) const;

    Element t(unsigned k, const TablePtr& table) const;
    Element u() const;

private:
    void check_index(unsigned n, unsigned lo) const;
    Element sigma_ell(unsigned j) const;

    unsigned long p_;
    unsigned max_index_;
    TablePtr bp_;
    TablePtr bp_v_;
    TablePtr bpbp_;
    TablePtr bpbp_v_;
    TablePtr ellbp_;

    mutable std::recursive_mutex mutex_;
    mutable std::vector<std::optional<Element>> hazewinkel_;
    mutable std::vector<std::optional<Element>> ell_in_v_;
    mutable std::vector<std::optional<Element>> eta_r_ell_;
    mutable std::vector<std::optional<Element>> eta_r_v_;
    mutable std::vector<std::optional<Element>> eta_r_v_integral_;
    mutable std::vector<std::optional<Element>> ell_image_v_;
    mutable std::vector<std::optional<Element>> ell_image_eta_;
};

}  // namespace ellcoop
