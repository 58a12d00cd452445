#include "ellcoop/homology.hpp"

#include <gtest/gtest.h>

using namespace ellcoop;

namespace {

// Rank over Q or F_p by plain Gaussian elimination on a dense copy.
std::size_t dense_rank(const SparseMatrix& m, const Coefficients& coeffs)
{
    DenseMatrix a = m.to_dense();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
        std::size_t piv = a.rows();
        for (std::size_t r = rank; r < a.rows(); ++r)
            if (coeffs.normalize(a(r, c)) != 0) {
                piv = r;
                break;
            }
        if (piv == a.rows())
            continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            std::swap(a(rank, j), a(piv, j));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == rank || coeffs.normalize(a(r, c)) == 0)
                continue;
            const Rational f = coeffs.divide(a(r, c), a(rank, c));
            for (std::size_t j = 0; j < a.cols(); ++j)
                a(r, j) = coeffs.normalize(a(r, j) - f * a(rank, j));
        }
        ++rank;
    }
    return rank;
}

std::size_t total_dim(const std::vector<HomologySummary>& hs)
{
    std::size_t n = 0;
    for (const auto& h : hs)
        n += h.free_rank;
    return n;
}

}  // namespace

TEST(Homology, RationalCaseVanishesAboveDegreeZero)
{
    const FormulaContext ctx(3, 3);
    const KoszulSpec hq = case_spec(ctx, KoszulCase::HQ, 64);
    for (int t = 0; t <= 64; t += 4)
        for (int s = 1; s <= 2; ++s)
            EXPECT_TRUE(homology_at(hq, s, t).is_zero()) << s << " " << t;
}

TEST(Homology, ModPCaseIsTheChainComplex)
{
    const FormulaContext ctx(3, 3);
    const KoszulSpec hfp = case_spec(ctx, KoszulCase::HFp, 64);
    // Only e2 times the constants contributes at (1, 16).
    EXPECT_EQ(homology_at(hfp, 1, 16).free_rank, 1u);
    EXPECT_EQ(homology_at(hfp, 1, 20).free_rank, 1u);  // e2 l1
    EXPECT_EQ(homology_at(hfp, 0, 16).free_rank, 2u);  // l1^4, l2
}

TEST(Homology, EllAtDegree64)
{
    // Rational rank from the Hilbert series 1/(1 - x^4)^2: 17 in degree 64.
    const FormulaContext ctx(3, 3);
    const KoszulSpec ell = case_spec(ctx, KoszulCase::Ell, 64);
    const HomologySummary h = homology_at(ell, 0, 64, true);
    EXPECT_EQ(h.free_rank, 17u);
    EXPECT_EQ(h.torsion, (std::vector<long>{1}));
    ASSERT_EQ(h.torsion_representatives.size(), 1u);
    const ChainSlice slice = build(ell, 64);
    EXPECT_FALSE(is_boundary(ell, slice, 0, h.torsion_representatives[0]));
    EXPECT_TRUE(is_boundary(ell, slice, 0, h.torsion_representatives[0] * Rational(3)));
    EXPECT_EQ(homology_at(ell, 0, 60).torsion.size(), 0u);
    EXPECT_EQ(homology_at(ell, 0, 60).free_rank, 16u);
}

TEST(Homology, FieldRanksAgainstGaussianElimination)
{
    const FormulaContext ctx(3, 3);
    for (auto c : {KoszulCase::HQ, KoszulCase::EllBar}) {
        const KoszulSpec spec = case_spec(ctx, c, 72);
        for (int t : {16, 32, 52, 56, 64, 68, 72}) {
            const ChainSlice slice = build(spec, t);
            const auto hs = slice_homology(spec, slice);
            long euler_chain = 0;
            long euler_h = 0;
            for (int s = 0; s <= slice.top_degree(); ++s) {
                const std::size_t expect =
                    slice.dim(s) - dense_rank(slice.boundary(s), spec.coeffs) - dense_rank(slice.boundary(s + 1), spec.coeffs);
                std::size_t got = 0;
                for (const auto& h : hs)
                    if (h.s == s)
                        got = h.free_rank;
                EXPECT_EQ(got, expect) << spec.label << " " << s << " " << t;
                euler_chain += (s % 2 ? -1 : 1) * static_cast<long>(slice.dim(s));
                euler_h += (s % 2 ? -1 : 1) * static_cast<long>(got);
            }
            EXPECT_EQ(euler_chain, euler_h);
        }
    }
}

TEST(Homology, EulerCharacteristicOverLocalRing)
{
    const FormulaContext ctx(3, 3);
    const KoszulSpec ell = case_spec(ctx, KoszulCase::Ell, 72);
    for (int t = 0; t <= 72; t += 4) {
        const ChainSlice slice = build(ell, t);
        long chain = 0;
        long free = 0;
        for (int s = 0; s <= slice.top_degree(); ++s)
            chain += (s % 2 ? -1 : 1) * static_cast<long>(slice.dim(s));
        for (const auto& h : slice_homology(ell, slice))
            free += (h.s % 2 ? -1 : 1) * static_cast<long>(h.free_rank);
        EXPECT_EQ(chain, free) << t;
    }
}

TEST(Homology, GeneralizedKoszulOracle)
{
    for (int n : {2, 3}) {
        for (bool y : {false, true}) {
            const KoszulSpec syn = synthetic_spec(3, n, y, 40);
            for (int t = 0; t <= 40; t += 2)
                for (int s = 0; s <= n; ++s)
                    EXPECT_EQ(homology_at(syn, s, t), generalized_koszul_oracle(syn, s, t))
                        << n << " " << y << " " << s << " " << t;
        }
    }
}

TEST(Homology, RegularityAndDeltaSpan)
{
    const KoszulSpec syn = synthetic_spec(3, 3, true, 30);
    for (int t = 0; t <= 30; t += 2) {
        EXPECT_TRUE(regularity_holds(syn, t)) << t;
        for (int s = 1; s <= 3; ++s)
            EXPECT_TRUE(delta_span_holds(syn, s, t)) << s << " " << t;
    }
}

TEST(Bockstein, SyntheticStabilizesOnQuotient)
{
    const int d = 24;
    const int r_max = 3;
    const KoszulSpec syn = synthetic_spec(3, 2, true, d + 2 * r_max, Coefficients::mod_p(3));
    const BocksteinResult res = bockstein_pages(syn, Element::generator(syn.table, "x"), r_max, d);
    EXPECT_TRUE(res.stabilizes);
    ASSERT_EQ(res.pages.size(), static_cast<std::size_t>(r_max + 1));
    const std::vector<Element> ideal{Element::generator(syn.table, "x"), Element::generator(syn.table, "w1"),
                                      Element::generator(syn.table, "w2")};
    for (int t = 0; t <= d; t += 2) {
        std::size_t b1 = 0;
        for (const auto& [st, dim] : res.pages[1].dims)
            if (st.second == t)
                b1 += dim;
        EXPECT_EQ(b1, quotient_dimension(syn.table, syn.base_size, ideal, t, syn.coeffs)) << t;
        EXPECT_EQ(b1, t % 4 == 0 ? 1u : 0u) << t;
    }
}

TEST(Bockstein, ZeroDifferentialOverLocalRing)
{
    auto base = std::make_shared<GeneratorTable>();
    base->add({"a", 2, Parity::Even, 0});
    TablePtr table = base;
    const KoszulSpec spec =
        make_koszul_spec("zero", table, {{1, 4, Element(table)}}, Coefficients::local(3), 12);
    const BocksteinResult res = bockstein_pages(spec, Element::constant(spec.table, 3), 3, 12);
    EXPECT_TRUE(res.stabilizes);
    for (int t = 0; t <= 12; t += 2) {
        const ChainSlice slice = build(spec, t);
        for (const auto& page : res.pages)
            for (int s = 0; s <= 1; ++s) {
                const auto it = page.dims.find({s, t});
                EXPECT_EQ(it == page.dims.end() ? 0u : it->second, slice.dim(s)) << page.r << " " << s << " " << t;
            }
    }
}

TEST(Bockstein, EllBarOnU)
{
    const FormulaContext ctx(3, 3);
    const int d = 64;
    const int r_max = 3;
    const KoszulSpec bar = case_spec(ctx, KoszulCase::EllBar, d + 4 * r_max);
    const BocksteinResult res = bockstein_pages(bar, rebase(ctx.u(), bar.table), r_max, d);
    EXPECT_TRUE(res.stabilizes);
}

TEST(TorsionTable, EllAtThree)
{
    const TorsionTable tt = torsion_table(KoszulCase::Ell, 3, 80);
    ASSERT_TRUE(tt.first_torsion);
    EXPECT_EQ(*tt.first_torsion, (std::pair<int, int>{0, 64}));
    EXPECT_TRUE(tt.all_torsion_simple);
    for (const auto& e : tt.entries)
        if (!e.torsion.empty())
            EXPECT_EQ(e.s, 0);
    EXPECT_EQ(tt.torsion_count_at(64), 1u);
    EXPECT_EQ(tt.torsion_count_at(68), 1u);
    EXPECT_EQ(tt.torsion_count_at(72), 1u);
    EXPECT_EQ(tt.torsion_count_at(76), 1u);
    EXPECT_EQ(tt.torsion_count_at(80), 2u);
    EXPECT_EQ(tt.torsion_count_at(60), 0u);

    const auto csv = to_csv(tt);
    EXPECT_NE(csv.find("0,64"), std::string::npos);
}

TEST(TorsionTable, RationalSupportedInDegreeZero)
{
    const TorsionTable tt = torsion_table(KoszulCase::HQ, 3, 80);
    EXPECT_FALSE(tt.first_torsion);
    for (const auto& e : tt.entries) {
        EXPECT_EQ(e.s, 0);
        EXPECT_TRUE(e.torsion.empty());
    }
}

TEST(TorsionTable, ThreadCountDoesNotChangeOutput)
{
    const auto one = to_json(torsion_table(KoszulCase::Ell, 3, 72, 1)).dump();
    const auto four = to_json(torsion_table(KoszulCase::Ell, 3, 72, 4)).dump();
    EXPECT_EQ(one, four);
}

TEST(TorsionTable, UAndPKillTorsion)
{
    const FormulaContext ctx(3, 3);
    const TorsionComparison c = u_p_torsion_compare(ctx, 72);
    EXPECT_TRUE(c.holds);
    EXPECT_FALSE(c.torsion.empty());
    for (const auto& e : c.torsion) {
        EXPECT_TRUE(e.p_kills);
        EXPECT_TRUE(e.u_kills);
    }
    EXPECT_TRUE(c.free_classes_survive);
    EXPECT_GT(c.free_classes_checked, 0u);
}
