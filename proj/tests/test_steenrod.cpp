#include "ellcoop/steenrod.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace ellcoop;
using ellcoop::testing::uniform;

namespace {

Monomial mono(const Element& e)
{
    EXPECT_EQ(e.size(), 1u);
    return e.terms().begin()->first;
}

Tensor tensor(const SteenrodAlgebra& alg, const std::vector<std::pair<Element, Element>>& pairs)
{
    Tensor t(alg.table(), 2, alg.p());
    for (const auto& [a, b] : pairs)
        t.add({mono(a), mono(b)}, 1);
    return t;
}

Element random_element(const SteenrodAlgebra& alg, int max_degree)
{
    for (;;) {
        const int t = static_cast<int>(uniform(1, max_degree));
        const Element e = alg.reduce(ellcoop::testing::random_homogeneous(alg.table(), 0, t, 3, 4));
        if (!e.is_zero())
            return e;
    }
}

int degree_of(const Element& e) { return e.bidegree()->internal; }

}  // namespace

TEST(Steenrod, Generators)
{
    const SteenrodAlgebra alg(3, 60);
    EXPECT_EQ(alg.zeta_count(), 3);  // z1, z2, z3 of degrees 4, 16, 52
    EXPECT_EQ(alg.tau_count(), 4);   // t0 .. t3 of degrees 1, 5, 17, 53
    EXPECT_EQ(degree_of(alg.zeta(3)), 52);
    EXPECT_EQ(degree_of(alg.tau(3)), 53);
    EXPECT_EQ(alg.zeta(0), Element::constant(alg.table(), 1));
    EXPECT_TRUE((alg.tau(2) * alg.tau(2)).is_zero());
    EXPECT_EQ(alg.tau(2) * alg.tau(3), -(alg.tau(3) * alg.tau(2)));
    EXPECT_EQ(alg.reduce(alg.zeta(1) * Rational(2)).to_string(), "-z1");
    EXPECT_TRUE(alg.in_b(alg.tau(2) * alg.zeta(1)));
    EXPECT_FALSE(alg.in_b(alg.tau(1)));
}

TEST(Steenrod, CoactionOnGenerators)
{
    const SteenrodAlgebra alg(3, 60);
    const Element one = alg.zeta(0);
    const Element z1 = alg.zeta(1);
    const Element z2 = alg.zeta(2);
    EXPECT_EQ(coaction(alg, z1), tensor(alg, {{z1, one}, {one, z1}}));
    EXPECT_EQ(coaction(alg, z2), tensor(alg, {{z2, one}, {z1, z1.pow(3)}, {one, z2}}));
    EXPECT_EQ(coaction(alg, alg.tau(0)), tensor(alg, {{alg.tau(0), one}, {one, alg.tau(0)}}));
    EXPECT_EQ(coaction(alg, alg.tau(1)), tensor(alg, {{alg.tau(1), one}, {alg.tau(0), z1}, {one, alg.tau(1)}}));
    EXPECT_EQ(coaction(alg, alg.tau(2)),
              tensor(alg, {{alg.tau(2), one}, {alg.tau(1), z1.pow(3)}, {alg.tau(0), z2}, {one, alg.tau(2)}}));
}

TEST(Steenrod, GradedTensorSign)
{
    // psi(t0 t1) picks up (-1)^{|t1||t0|} on the t0 (x) t1 cross term from t1 (x) 1 times 1 (x) t0.
    const SteenrodAlgebra alg(3, 20);
    const Tensor psi = coaction(alg, alg.tau(0) * alg.tau(1));
    const Monomial t0 = mono(alg.tau(0));
    const Monomial t1 = mono(alg.tau(1));
    const auto& terms = psi.terms();
    const auto it = terms.find({t1, t0});
    ASSERT_NE(it, terms.end());
    EXPECT_EQ(it->second, Rational(-1));
    EXPECT_EQ(terms.at({t0, t1}), Rational(1));
}

TEST(Steenrod, ECoaction)
{
    const SteenrodAlgebra alg(3, 60);
    const ECoaction e = e_coaction(alg, alg.tau(2));
    EXPECT_EQ(e.one, alg.tau(2));
    EXPECT_EQ(e.alpha, alg.zeta(2));
    EXPECT_EQ(e.beta, alg.zeta(1).pow(3));
    EXPECT_TRUE(e.beta_alpha.is_zero());
    EXPECT_THROW(e_coaction(alg, alg.tau(0)), std::invalid_argument);

    // Both derivations enter the alpha beta component.
    const ECoaction f = e_coaction(alg, alg.tau(2) * alg.tau(3));
    EXPECT_FALSE(f.beta_alpha.is_zero());
}

TEST(Steenrod, QOperations)
{
    const SteenrodAlgebra alg(3, 60);
    for (int n = 0; n <= 3; ++n)
        EXPECT_EQ(q_action(alg, 0, alg.tau(n)), alg.zeta(n)) << n;
    for (int n = 1; n <= 3; ++n)
        EXPECT_EQ(q_action(alg, 1, alg.tau(n)), alg.zeta(n - 1).pow(3)) << n;
    EXPECT_TRUE(q_action(alg, 1, alg.tau(0)).is_zero());
    EXPECT_TRUE(q_action(alg, 0, alg.zeta(2)).is_zero());
    EXPECT_EQ(q_action(alg, 0, alg.tau(2) * alg.tau(3)),
              alg.reduce(alg.zeta(2) * alg.tau(3) - alg.tau(2) * alg.zeta(3)));
}

TEST(Steenrod, ParallelogramBottom)
{
    for (unsigned long p : {3ul, 5ul}) {
        const SteenrodAlgebra alg(p, static_cast<int>(2 * ipow(p, 3).get_ui() + 2 * ipow(p, 2).get_ui()));
        const ParallelogramBottom b = parallelogram_bottom(alg, {2, 3});
        // zeta_2^{p+1} - zeta_1^p zeta_3, by hand.
        const Element expect = alg.reduce(alg.zeta(2).pow(p + 1) - alg.zeta(1).pow(p) * alg.zeta(3));
        EXPECT_EQ(b.derivation, expect) << p;
        EXPECT_EQ(b.sign, 1);
    }
    const SteenrodAlgebra alg(3, 220);
    const ParallelogramBottom b = parallelogram_bottom(alg, {2, 3, 4});
    EXPECT_FALSE(b.derivation.is_zero());
    EXPECT_EQ(std::abs(b.sign), 1);
    EXPECT_EQ(b.derivation, alg.reduce(b.closed_form * Rational(b.sign)));
    const ParallelogramBottom single = parallelogram_bottom(alg, {3});
    EXPECT_TRUE(single.derivation.is_zero());
    EXPECT_TRUE(single.closed_form.is_zero());
    EXPECT_THROW(parallelogram_bottom(alg, {1, 3}), std::invalid_argument);
    EXPECT_THROW(parallelogram_bottom(alg, {3, 2}), std::invalid_argument);
}

TEST(Steenrod, CoassociativityAndCounit)
{
    const SteenrodAlgebra alg(3, 80);
    std::vector<Element> samples;
    for (int n = 1; n <= alg.zeta_count(); ++n)
        samples.push_back(alg.zeta(n));
    for (int n = 0; n < alg.tau_count(); ++n)
        samples.push_back(alg.tau(n));
    for (int i = 0; i < 1000; ++i) {
        const Element a = random_element(alg, 40);
        const Element b = random_element(alg, 40);
        const Element ab = alg.reduce(a * b);
        if (!ab.is_zero() && degree_of(ab) <= 80)
            samples.push_back(ab);
    }
    for (const auto& x : samples) {
        const Tensor psi = coaction(alg, x);
        EXPECT_EQ(apply_coaction(alg, psi, 0), apply_coaction(alg, psi, 1)) << x.to_string();
        EXPECT_EQ(counit_left(alg, psi), x) << x.to_string();
    }
}

TEST(Steenrod, CoactionIsMultiplicative)
{
    const SteenrodAlgebra alg(3, 80);
    for (int i = 0; i < 200; ++i) {
        const Element a = random_element(alg, 40);
        const Element b = random_element(alg, 40);
        EXPECT_EQ(coaction(alg, alg.reduce(a * b)), coaction(alg, a) * coaction(alg, b));
    }
}

TEST(Steenrod, QDerivationsAnticommuteAndSquareToZero)
{
    const SteenrodAlgebra alg(3, 80);
    for (int i = 0; i < 300; ++i) {
        const Element a = random_element(alg, 40);
        const Element b = random_element(alg, 40);
        const int sa = degree_of(a) % 2 ? -1 : 1;
        for (int q : {0, 1}) {
            const Element lhs = q_action(alg, q, alg.reduce(a * b));
            const Element rhs = alg.reduce(q_action(alg, q, a) * b + Rational(sa) * a * q_action(alg, q, b));
            EXPECT_EQ(lhs, rhs);
            EXPECT_TRUE(q_action(alg, q, q_action(alg, q, a)).is_zero());
        }
        EXPECT_EQ(q_action(alg, 0, q_action(alg, 1, a)), alg.reduce(-q_action(alg, 1, q_action(alg, 0, a))));
    }
}

TEST(TorsionBasis, FirstClassAtDegree64)
{
    EXPECT_TRUE(torsion_basis(3, 63).empty());
    const auto basis = torsion_basis(3, 64);
    ASSERT_EQ(basis.size(), 1u);
    EXPECT_EQ(basis[0].degree, 64);
    EXPECT_EQ(basis[0].indices, (std::vector<int>{2, 3}));
    EXPECT_TRUE(basis[0].multiplier.is_one());
    const auto j = to_json(basis, 3, 64);
    EXPECT_EQ(j["classes"].size(), 1u);
}

TEST(TorsionBasis, DegreesAndPrimitivity)
{
    const unsigned long p = 3;
    const auto basis = torsion_basis(p, 80);
    std::map<int, int> counts;
    const SteenrodAlgebra alg(p, 80 + 2 * static_cast<int>(p));
    for (const auto& c : basis) {
        ++counts[c.degree];
        int deg = -2 * static_cast<int>(p);
        for (int i : c.indices)
            deg += static_cast<int>(2 * ipow(p, static_cast<unsigned long>(i)).get_ui() - 1);
        deg += c.multiplier.internal_degree(*c.element.table());
        EXPECT_EQ(c.degree, deg);
        EXPECT_EQ(degree_of(c.element), c.degree);
        const Element e = rebase(c.element, alg.table());
        EXPECT_TRUE(q_action(alg, 0, e).is_zero());
        EXPECT_TRUE(q_action(alg, 1, e).is_zero());
    }
    EXPECT_EQ(counts, (std::map<int, int>{{64, 1}, {68, 1}, {72, 1}, {76, 1}, {80, 2}}));
}
