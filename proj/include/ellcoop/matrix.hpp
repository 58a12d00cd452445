#pragma once

// Sparse exact matrices and Smith normal form over Z_(p), F_p or Q.

#include "ellcoop/scalars.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ellcoop {

// Coefficient ring for linear algebra. In ModP mode values are integers in
// [0, p). In LocalP mode every entry must be p-integral.
struct Coefficients
{
    enum class Kind { LocalP, ModP, Rationals };
    Kind kind = Kind::Rationals;
    unsigned long p = 0;

    static Coefficients local(unsigned long p) { return {Kind::LocalP, p}; }
    static Coefficients mod_p(unsigned long p) { return {Kind::ModP, p}; }
    static Coefficients rationals() { return {Kind::Rationals, 0}; }

    bool is_field() const { return kind != Kind::LocalP; }
    Rational normalize(const Rational& a) const;
    // Pivot weight of a nonzero value: its valuation in LocalP, 0 otherwise.
    long weight(const Rational& a) const;
    Rational divide(const Rational& a, const Rational& b) const;
    std::string name() const;
};

using Vector = std::vector<Rational>;

class DenseMatrix
{
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Vector column(std::size_t j) const;
    Vector apply(const Vector& x) const;
    DenseMatrix operator*(const DenseMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Row-compressed sparse matrix; each row holds (column, value) pairs sorted by
// column with no stored zeros. Columns are chain-basis indices of the source.
class SparseMatrix
{
public:
    using Entry = std::pair<std::uint32_t, Rational>;
    using Row = std::vector<Entry>;

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const Row& row(std::size_t i) const { return rows_[i]; }
    std::size_t nonzeros() const;
    bool is_zero() const { return nonzeros() == 0; }

    // Accumulates v into entry (i, j).
    void add(std::size_t i, std::size_t j, const Rational& v);
    Rational at(std::size_t i, std::size_t j) const;
    void normalize(const Coefficients& coeffs);

    Vector apply(const Vector& x) const;
    SparseMatrix operator*(const SparseMatrix& other) const;
    DenseMatrix to_dense() const;
    static SparseMatrix from_columns(const std::vector<Vector>& columns, std::size_t rows);

private:
    std::vector<Row> rows_;
    std::size_t cols_ = 0;
};

struct SnfTransforms
{
    // left * A * right has pivots[k] at (pivot_rows[k], pivot_cols[k]) and
    // zeros elsewhere; left_inverse = left^{-1}.
    DenseMatrix left;
    DenseMatrix left_inverse;
    DenseMatrix right;
};

struct SnfResult
{
    Coefficients coeffs;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> pivots;
    std::vector<std::size_t> pivot_rows;
    std::vector<std::size_t> pivot_cols;
    std::optional<SnfTransforms> transforms;

    std::size_t rank() const { return pivots.size(); }
    // Exponents of the elementary divisors p^e, non-decreasing (LocalP only;
    // field modes report zeros).
    std::vector<long> divisor_exponents() const;
    // Exponents of the non-unit divisors only.
    std::vector<long> torsion_exponents() const;

    // Membership of b in the column span over the coefficient ring; fills a
    // preimage when requested. Requires transforms.
    bool contains(const Vector& b, Vector* preimage = nullptr) const;
    // Basis of the kernel (columns of `right` at non-pivot columns).
    std::vector<Vector> kernel_basis() const;
    // Generators of the torsion summands of the cokernel, one per non-unit
    // divisor, paired with the divisor exponent.
    std::vector<std::pair<Vector, long>> torsion_generators() const;
};

// Smith normal form by global minimal-weight pivoting. Entries must be
// p-integral in LocalP mode (std::domain_error otherwise).
SnfResult smith_normal_form(const SparseMatrix& a, const Coefficients& coeffs, bool with_transforms = false);

// Rank over the fraction field (or F_p in ModP mode) of a set of column vectors.
std::size_t column_rank(const std::vector<Vector>& columns, std::size_t dim, const Coefficients& coeffs);

}  // namespace ellcoop
