#include "ellcoop/matrix.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ellcoop;
using ellcoop::testing::uniform;

namespace {

using IntMatrix = std::vector<std::vector<Integer>>;

SparseMatrix to_sparse(const IntMatrix& a, std::size_t cols)
{
    SparseMatrix m(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (a[i][j] != 0)
                m.add(i, j, Rational(a[i][j]));
    return m;
}

IntMatrix random_matrix(std::size_t rows, std::size_t cols, long range, double density)
{
    IntMatrix a(rows, std::vector<Integer>(cols, 0));
    std::bernoulli_distribution keep(density);
    for (auto& row : a)
        for (auto& x : row)
            if (keep(ellcoop::testing::rng()))
                x = uniform(-range, range);
    return a;
}

// Textbook integer Smith normal form by repeated row and column Euclid steps;
// returns the nonzero invariant factors.
std::vector<Integer> integer_snf(IntMatrix a)
{
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    std::vector<Integer> d;
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        // Bring a nonzero entry of least absolute value to (k, k).
        for (;;) {
            std::size_t pi = m, pj = n;
            for (std::size_t i = k; i < m; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m)
                return d;
            std::swap(a[k], a[pi]);
            for (auto& row : a)
                std::swap(row[k], row[pj]);
            bool clean = true;
            for (std::size_t i = k + 1; i < m; ++i) {
                const Integer q = a[i][k] / a[k][k];
                for (std::size_t j = k; j < n; ++j)
                    a[i][j] -= q * a[k][j];
                if (a[i][k] != 0)
                    clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                const Integer q = a[k][j] / a[k][k];
                for (std::size_t i = k; i < m; ++i)
                    a[i][j] -= q * a[i][k];
                if (a[k][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // Divisibility of the remaining block.
            bool divides = true;
            for (std::size_t i = k + 1; i < m && divides; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (a[i][j] % a[k][k] != 0) {
                        for (std::size_t c = k; c < n; ++c)
                            a[k][c] += a[i][c];
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        d.push_back(abs(a[k][k]));
    }
    return d;
}

}  // namespace

TEST(Snf, DiagonalExamples)
{
    const IntMatrix a{{3, 0}, {0, 9}};
    const auto r = smith_normal_form(to_sparse(a, 2), Coefficients::local(3));
    EXPECT_EQ(r.divisor_exponents(), (std::vector<long>{1, 2}));
    EXPECT_EQ(r.torsion_exponents(), (std::vector<long>{1, 2}));

    const IntMatrix b{{2, 4}, {6, 3}};
    const auto rb = smith_normal_form(to_sparse(b, 2), Coefficients::local(3));
    // det = -18: one unit divisor and one of valuation 2.
    EXPECT_EQ(rb.divisor_exponents(), (std::vector<long>{0, 2}));

    EXPECT_EQ(smith_normal_form(to_sparse(a, 2), Coefficients::mod_p(3)).rank(), 0u);
    EXPECT_EQ(smith_normal_form(to_sparse(a, 2), Coefficients::rationals()).rank(), 2u);
}

TEST(Snf, NonIntegralEntriesRejected)
{
    SparseMatrix m(1, 1);
    m.add(0, 0, Rational(1, 3));
    EXPECT_THROW(smith_normal_form(m, Coefficients::local(3)), std::domain_error);
}

TEST(Snf, AgainstIntegerOracle)
{
    for (int trial = 0; trial < 300; ++trial) {
        const unsigned long p = trial % 3 == 0 ? 5 : 3;
        const auto rows = static_cast<std::size_t>(uniform(1, 12));
        const auto cols = static_cast<std::size_t>(uniform(1, 12));
        IntMatrix a = random_matrix(rows, cols, 12, 0.4);
        // Force some p-divisibility structure.
        if (trial % 2)
            for (auto& x : a[0])
                x *= static_cast<long>(p * p);
        std::vector<long> expect;
        for (const auto& d : integer_snf(a))
            expect.push_back(valuation_of_integer(d, p));
        std::sort(expect.begin(), expect.end());
        const auto r = smith_normal_form(to_sparse(a, cols), Coefficients::local(p), true);
        EXPECT_EQ(r.divisor_exponents(), expect) << "trial " << trial;

        // left * A * right is the pivot pattern.
        const DenseMatrix prod = r.transforms->left * to_sparse(a, cols).to_dense() * r.transforms->right;
        DenseMatrix pattern(rows, cols);
        for (std::size_t k = 0; k < r.rank(); ++k)
            pattern(r.pivot_rows[k], r.pivot_cols[k]) = r.pivots[k];
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                EXPECT_EQ(Coefficients::local(p).normalize(prod(i, j)), pattern(i, j));
        const DenseMatrix li = r.transforms->left * r.transforms->left_inverse;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < rows; ++j)
                EXPECT_EQ(li(i, j), Rational(i == j ? 1 : 0));

        for (const auto& k : r.kernel_basis()) {
            for (const auto& x : to_sparse(a, cols).apply(k))
                EXPECT_EQ(x, 0);
        }
        EXPECT_EQ(r.kernel_basis().size(), cols - r.rank());
    }
}

TEST(Snf, Membership)
{
    const IntMatrix a{{3, 0}, {0, 1}, {0, 0}};
    const auto r = smith_normal_form(to_sparse(a, 2), Coefficients::local(3), true);
    Vector pre;
    EXPECT_TRUE(r.contains({Rational(6), Rational(5), Rational(0)}, &pre));
    ASSERT_EQ(pre.size(), 2u);
    EXPECT_EQ(to_sparse(a, 2).apply(pre), (Vector{Rational(6), Rational(5), Rational(0)}));
    EXPECT_FALSE(r.contains({Rational(1), Rational(0), Rational(0)}));
    EXPECT_FALSE(r.contains({Rational(0), Rational(0), Rational(1)}));
    // 1/2 is a unit in Z_(3).
    EXPECT_TRUE(r.contains({Rational(3, 2), Rational(0), Rational(0)}));

    const auto tg = r.torsion_generators();
    ASSERT_EQ(tg.size(), 1u);
    EXPECT_EQ(tg[0].second, 1);
}

TEST(Snf, ColumnRank)
{
    const std::vector<Vector> cols{{Rational(1), Rational(3)}, {Rational(2), Rational(6)}, {Rational(0), Rational(3)}};
    EXPECT_EQ(column_rank(cols, 2, Coefficients::rationals()), 2u);
    EXPECT_EQ(column_rank(cols, 2, Coefficients::mod_p(3)), 1u);
    EXPECT_EQ(column_rank({}, 2, Coefficients::rationals()), 0u);
}

TEST(Snf, SparseProduct)
{
    for (int trial = 0; trial < 50; ++trial) {
        const IntMatrix a = random_matrix(5, 4, 5, 0.5);
        const IntMatrix b = random_matrix(4, 6, 5, 0.5);
        const DenseMatrix sparse = (to_sparse(a, 4) * to_sparse(b, 6)).to_dense();
        const DenseMatrix dense = to_sparse(a, 4).to_dense() * to_sparse(b, 6).to_dense();
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                EXPECT_EQ(sparse(i, j), dense(i, j));
    }
}
