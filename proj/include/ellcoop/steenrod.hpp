#pragma once

// The dual Steenrod algebra A_* = F_p[zeta_n] (x) Lambda(taubar_n) at an odd
// prime, its coaction, the E_* = Lambda(alpha, beta) projection and the
// Milnor operations Q_0, Q_1.
//
// Generators: zeta_n is "z<n>" (n >= 1, degree 2p^n - 2) and taubar_n is
// "t<n>" (n >= 0, odd, degree 2p^n - 1). Coefficients are balanced residues in (-p/2, p/2).

#include "ellcoop/galg.hpp"

#include <json.hpp>

#include <map>
#include <vector>

namespace ellcoop {

class SteenrodAlgebra
{
public:
    // Generators of degree <= degree_bound.
    SteenrodAlgebra(unsigned long p, int degree_bound);

    unsigned long p() const { return p_; }
    int degree_bound() const { return bound_; }
    const TablePtr& table() const { return table_; }
    int zeta_count() const { return zetas_; }
    int tau_count() const { return taus_; }

    // zeta_0 = 1.
    Element zeta(int n) const;
    Element tau(int n) const;
    Element tau_product(const std::vector<int>& indices) const;
    // Reduces coefficients to balanced residues mod p.
    Element reduce(const Element& a) const;
    // No taubar_0, taubar_1.
    bool in_b(const Element& a) const;

private:
    unsigned long p_;
    int bound_;
    int zetas_ = 0;
    int taus_ = 0;
    TablePtr table_;
};

// Element of A_* (x) ... (x) A_* with graded tensor signs.
class Tensor
{
public:
    using Key = std::vector<Monomial>;

    Tensor(TablePtr table, std::size_t arity, unsigned long p);

    std::size_t arity() const { return arity_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Key& key, const Rational& c);
    Tensor operator*(const Tensor& other) const;
    Tensor& operator+=(const Tensor& other);
    bool operator==(const Tensor& other) const { return arity_ == other.arity_ && terms_ == other.terms_; }
    std::string to_string() const;

private:
    TablePtr table_;
    std::size_t arity_;
    unsigned long p_;
    std::map<Key, Rational> terms_;
};

Tensor coaction(const SteenrodAlgebra& alg, const Element& x);
// Applies the coaction to factor `position` of a tensor (psi (x) 1 for 0,
// 1 (x) psi for 1 on 2-tensors).
Tensor apply_coaction(const SteenrodAlgebra& alg, const Tensor& t, std::size_t position);
Tensor as_tensor(const SteenrodAlgebra& alg, const Element& x);
// Counit on the left factor of a 2-tensor.
Element counit_left(const SteenrodAlgebra& alg, const Tensor& t);

struct ECoaction
{
    Element one;
    Element alpha;
    Element beta;
    Element beta_alpha;
};

// Left factor projected along A_* -> E_*; throws std::invalid_argument unless x is in B_*.
ECoaction e_coaction(const SteenrodAlgebra& alg, const Element& x);

// Q_0 and Q_1 as odd derivations with Q_0(taubar_n) = zeta_n and
// Q_1(taubar_n) = zeta_{n-1}^p, read off the E_*-components of psi(taubar_n).
Element q_action(const SteenrodAlgebra& alg, int i, const Element& x);

struct ParallelogramBottom
{
    Element derivation;   // Q_1 Q_0 (taubar_{i_1} ... taubar_{i_{n+1}})
    Element closed_form;  // the double sum over 1 <= t < r <= n+1
    int sign = 1;         // derivation = sign * closed_form
};

// Indices strictly increasing and >= 2. Throws std::logic_error if the two
// paths differ by more than a sign.
ParallelogramBottom parallelogram_bottom(const SteenrodAlgebra& alg, const std::vector<int>& indices);

struct TorsionClass
{
    int degree = 0;
    std::vector<int> indices;
    Monomial multiplier;
    Element element;
};

// zeta-monomial multiples of Q_1 Q_0(taubar_I), |I| >= 2, in degrees <= max_degree,
// reduced to a linearly independent family degree by degree.
std::vector<TorsionClass> torsion_basis(unsigned long p, int max_degree);
nlohmann::json to_json(const std::vector<TorsionClass>& basis, unsigned long p, int max_degree);

}  // namespace ellcoop
