#include "ellcoop/coop.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace ellcoop;
using ellcoop::testing::uniform;

namespace {

Rational pq(unsigned long p, long k = 1) { return power_of(p, k); }

// Displayed closed forms for p t_n, n <= 4, over Q[u, v].
Element displayed_t(const RationalModel& m, unsigned n)
{
    const unsigned long p = m.p();
    const Element u = m.u();
    const Element v = m.v();
    const auto P = [&](unsigned k) { return ipow(p, k).get_ui(); };
    switch (n) {
    case 1:
        return (v - u) * pq(p, -1);
    case 2: {
        const Element t1 = displayed_t(m, 1);
        return (v.pow(p) * t1 - u * t1.pow(p) + u * (v.pow(p) - u.pow(p)) * pq(p, -1)) * pq(p, -1);
    }
    case 3: {
        const Element t1 = displayed_t(m, 1);
        const Element t2 = displayed_t(m, 2);
        return (v.pow(P(2)) * t2 - u * t2.pow(p) + u * (v.pow(P(2)) * t1.pow(p) - u.pow(p) * t1.pow(P(2))) * pq(p, -1) +
                u.pow(p + 1) * (v.pow(P(2)) - u.pow(P(2))) * pq(p, -2)) *
               pq(p, -1);
    }
    case 4: {
        const Element t1 = displayed_t(m, 1);
        const Element t2 = displayed_t(m, 2);
        const Element t3 = displayed_t(m, 3);
        return (v.pow(P(3)) * t3 - u * t3.pow(p) + u * (v.pow(P(3)) * t2.pow(p) - u.pow(p) * t2.pow(P(2))) * pq(p, -1) +
                u.pow(p + 1) * (v.pow(P(3)) * t1.pow(P(2)) - u.pow(P(2)) * t1.pow(P(3))) * pq(p, -2) +
                u.pow(P(2) + p + 1) * (v.pow(P(3)) - u.pow(P(3))) * pq(p, -3)) *
               pq(p, -1);
    }
    }
    throw std::out_of_range("no display");
}

// t_n from the logarithm: v^{e_n}/p^n = sum_{0<=j<=n} (u^{e_j}/p^j) t_{n-j}^{p^j}.
Element log_t(const RationalModel& m, unsigned n)
{
    const unsigned long p = m.p();
    const auto e = [&](unsigned j) { return (ipow(p, j).get_ui() - 1) / (p - 1); };
    Element r = m.v().pow(e(n)) * pq(p, -static_cast<long>(n));
    for (unsigned j = 1; j <= n; ++j) {
        const Element lower = n - j == 0 ? Element::constant(m.uv(), 1) : log_t(m, n - j);
        r -= m.u().pow(e(j)) * pq(p, -static_cast<long>(j)) * lower.pow(ipow(p, j).get_ui());
    }
    return r;
}

Element random_source_element(const RationalModel& m, int degree)
{
    return ellcoop::testing::random_homogeneous(m.source(), 0, degree, 3, 6);
}

}  // namespace

TEST(RationalModel, MatchesDisplays)
{
    for (unsigned long p : {3ul, 5ul}) {
        const unsigned top = p == 3 ? 4 : 3;
        const RationalModel m(p, top);
        for (unsigned n = 1; n <= top; ++n) {
            EXPECT_EQ(m.t(n), displayed_t(m, n)) << p << " " << n;
            EXPECT_EQ(m.t(n), log_t(m, n)) << p << " " << n;
            EXPECT_EQ(m.t(n).bidegree()->internal, static_cast<int>(2 * ipow(p, n).get_ui() - 2));
            // Leading v-power coefficient 1/p^{n}.
            const Monomial lead({0, static_cast<std::uint32_t>((ipow(p, n).get_ui() - 1) / (p - 1))});
            EXPECT_EQ(m.t(n).coefficient(lead), pq(p, -static_cast<long>(n)));
        }
    }
    EXPECT_THROW(RationalModel(3, 2).t(3), std::out_of_range);
}

TEST(RationalModel, ImageIsARingMap)
{
    const RationalModel m(3, 3);
    for (int i = 0; i < 30; ++i) {
        const Element a = random_source_element(m, 4 * static_cast<int>(uniform(0, 5)));
        const Element b = random_source_element(m, 4 * static_cast<int>(uniform(0, 5)));
        EXPECT_EQ(m.image(a * b), m.image(a) * m.image(b));
    }
    EXPECT_EQ(model_index_bound(3, 64), 3u);
}

TEST(Kane, Generators)
{
    const unsigned long p = 3;
    const RationalModel m(p, 3);
    EXPECT_EQ(kane_generator(m, 1, 0), m.v());
    EXPECT_EQ(kane_generator(m, 2, 0), m.v() * (m.v() - Rational(2) * m.u()));
    EXPECT_EQ(kane_generator(m, 3, 1),
              m.u() * m.v() * (m.v() - Rational(2) * m.u()) * (m.v() - Rational(4) * m.u()) * Rational(1, 3));
    EXPECT_THROW(kane_generator(m, 3, 2), std::out_of_range);
    EXPECT_THROW(kane_generator(m, 2, 1), std::out_of_range);

    for (unsigned n = 1; n <= 9; ++n) {
        const long top = legendre_factorial_valuation(n, p);
        for (long i = 0; i < top; ++i)
            EXPECT_EQ(m.u() * kane_generator(m, n, static_cast<unsigned>(i)),
                      kane_generator(m, n, static_cast<unsigned>(i + 1)) * Rational(3))
                << n << " " << i;
    }
}

TEST(Kane, GeneratorsLieInTheLattice)
{
    const unsigned long p = 3;
    const RationalModel m(p, 3);
    const ImageLattice lattice = build_lattice(m, 40);
    const Element t31 = kane_generator(m, 3, 1);
    EXPECT_FALSE(is_p_integral(t31, p));
    const Membership mem = lattice_member(lattice, t31);
    EXPECT_TRUE(mem.member) << mem.reason;
    for (unsigned n = 1; n <= 6; ++n)
        for (long i = 0; i <= legendre_factorial_valuation(n, p); ++i)
            EXPECT_TRUE(lattice_member(lattice, kane_generator(m, n, static_cast<unsigned>(i))).member) << n << " " << i;
}

TEST(Lattice, RankAndPivots)
{
    const unsigned long p = 3;
    const RationalModel m(p, 3);
    const ImageLattice lattice = build_lattice(m, 36);
    for (const auto& [d, slice] : lattice.slices) {
        const std::size_t k = static_cast<std::size_t>(d / 4);
        EXPECT_EQ(slice.basis.size(), k + 1) << d;
        EXPECT_EQ(slice.coordinates.size(), k + 1);
        for (std::size_t b = 0; b < slice.basis.size(); ++b) {
            const Rational& piv = slice.basis[b][slice.pivots[b]];
            Rational mag = abs(piv);
            const Valuation v = valuation(mag, p);
            EXPECT_EQ(mag, power_of(p, v.value)) << d;
        }
    }
    // Degree 4: u and (v - u)/3.
    const LatticeSlice& s4 = lattice.slices.at(4);
    EXPECT_TRUE(slice_member(s4, m.uv(), p, m.u()).member);
    EXPECT_TRUE(slice_member(s4, m.uv(), p, m.t(1)).member);
    EXPECT_TRUE(slice_member(s4, m.uv(), p, m.v()).member);
    EXPECT_FALSE(slice_member(s4, m.uv(), p, (m.v() - m.u()) * Rational(1, 9)).member);
    EXPECT_FALSE(slice_member(s4, m.uv(), p, m.u() * Rational(1, 3)).member);
}

TEST(Lattice, ClosedUnderProducts)
{
    const RationalModel m(3, 3);
    const ImageLattice lattice = build_lattice(m, 48);
    for (int i = 0; i < 40; ++i) {
        const Element a = m.image(random_source_element(m, 4 * static_cast<int>(uniform(1, 6))));
        const Element b = m.image(random_source_element(m, 4 * static_cast<int>(uniform(1, 6))));
        if (a.is_zero() || b.is_zero())
            continue;
        EXPECT_TRUE(lattice_member(lattice, a).member);
        EXPECT_TRUE(lattice_member(lattice, a * b).member);
    }
    EXPECT_THROW(lattice_member(lattice, m.u().pow(13)), std::out_of_range);
    EXPECT_THROW(lattice_member(lattice, m.u() + m.u().pow(2)), std::invalid_argument);
}

TEST(Lattice, ThreadsAgree)
{
    const RationalModel m(3, 3);
    const ImageLattice a = build_lattice(m, 40, 1);
    const ImageLattice b = build_lattice(m, 40, 3);
    ASSERT_EQ(a.slices.size(), b.slices.size());
    for (const auto& [d, s] : a.slices) {
        EXPECT_EQ(s.basis, b.slices.at(d).basis);
        EXPECT_EQ(s.pivots, b.slices.at(d).pivots);
    }
}

TEST(Congruence, ModPU)
{
    const RationalModel m(3, 4);
    for (unsigned n = 1; n <= 4; ++n) {
        const CongruenceReport r = check_congruence_pu(m, n);
        EXPECT_TRUE(r.holds) << n;
        EXPECT_TRUE(r.q1.holds) << n;
        EXPECT_TRUE(r.q2.holds) << n;
        EXPECT_EQ(r.ideal, "(pu)");
        const auto j = to_json(r);
        EXPECT_TRUE(j["holds"].get<bool>());
    }
    const RationalModel m5(5, 3);
    for (unsigned n = 1; n <= 3; ++n)
        EXPECT_TRUE(check_congruence_pu(m5, n).holds) << n;
}

TEST(PowerCongruence, Examples)
{
    EXPECT_TRUE(power_congruence(Integer(3 * 2 + 5 * 7), Integer(2), Integer(7), Integer(5), 3, 1));
    EXPECT_TRUE(power_congruence(Integer(3 * 2 + 5 * 7 + 15 * 4), Integer(2), Integer(7), Integer(5), 3, 2));
    EXPECT_THROW(power_congruence(Integer(1), Integer(0), Integer(0), Integer(5), 3, 1), std::invalid_argument);
    for (unsigned k = 0; k <= 3; ++k) {
        EXPECT_TRUE(unit_power_congruence(3, k)) << k;
        EXPECT_TRUE(unit_power_congruence(5, k)) << k;
    }
}

TEST(PowerCongruence, RandomIntegers)
{
    for (int i = 0; i < 1000; ++i) {
        const unsigned long p = i % 2 ? 3 : 5;
        const Integer x = uniform(-40, 40);
        const Integer y = uniform(-40, 40);
        Integer t = uniform(-40, 40);
        if (t == 0)
            t = 1;
        const Integer w = uniform(-40, 40);
        const Integer z = Integer(p) * x + t * y + Integer(p) * t * w;
        EXPECT_TRUE(power_congruence(z, x, y, t, p, static_cast<unsigned>(i % 3))) << i;
    }
}

TEST(PowerCongruence, Polynomials)
{
    // v = p t1 + u: v^{p^k} == p^{p^k} t1^{p^k} + u^{p^k} mod (p^{k+1} u).
    const RationalModel m(3, 1);
    const auto& src = m.source();
    const Element u = Element::generator(src, "u");
    const Element t1 = Element::generator(src, "t1");
    const Element v = u + t1 * Rational(3);
    const Element one = Element::constant(src, 1);
    for (unsigned k = 0; k <= 3; ++k)
        EXPECT_TRUE(power_congruence(v, t1, one, u, 3, k)) << k;
    EXPECT_THROW(power_congruence(v + t1, t1, one, u, 3, 1), std::invalid_argument);
}

TEST(Crosscheck, TorAgainstSteenrod)
{
    const CrosscheckReport r = torsion_crosscheck(3, 72);
    EXPECT_TRUE(r.counts_agree);
    EXPECT_TRUE(r.deltas_order_p);
    EXPECT_TRUE(r.holds);
    ASSERT_FALSE(r.entries.empty());
    EXPECT_EQ(r.entries.front().degree, 64);
    for (const auto& e : r.entries)
        EXPECT_EQ(e.tor_count, e.steenrod_count) << e.degree;
    bool found = false;
    for (const auto& d : r.delta_checks)
        if (d.indices == std::vector<int>{2, 3}) {
            found = true;
            EXPECT_TRUE(d.nonzero);
            EXPECT_TRUE(d.killed_by_p);
        }
    EXPECT_TRUE(found);
}
