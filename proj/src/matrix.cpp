#include "ellcoop/matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ellcoop {

Rational Coefficients::normalize(const Rational& a) const
{
    if (kind == Kind::ModP)
        return reduce_mod_p(a, p);
    return a;
}

long Coefficients::weight(const Rational& a) const
{
    if (kind != Kind::LocalP)
        return 0;
    const long v = valuation_of_integer(a.get_num(), p);
    if (v == 0 && mpz_divisible_ui_p(a.get_den_mpz_t(), p))
        throw std::domain_error("entry " + to_string(a) + " is not p-integral");
    return v;
}

Rational Coefficients::divide(const Rational& a, const Rational& b) const
{
    if (b == 0)
        throw std::domain_error("division by zero");
    if (kind == Kind::ModP)
        return reduce_mod_p(Rational(a / b), p);
    return a / b;
}

std::string Coefficients::name() const
{
    switch (kind) {
    case Kind::LocalP:
        return "Z_(" + std::to_string(p) + ")";
    case Kind::ModP:
        return "F_" + std::to_string(p);
    case Kind::Rationals:
        return "Q";
    }
    return "?";
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Vector DenseMatrix::column(std::size_t j) const
{
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = (*this)(i, j);
    return v;
}

Vector DenseMatrix::apply(const Vector& x) const
{
    if (x.size() != cols_)
        throw std::invalid_argument("dense apply: dimension mismatch");
    Vector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (x[j] != 0 && (*this)(i, j) != 0)
                y[i] += (*this)(i, j) * x[j];
    return y;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const
{
    if (cols_ != other.rows_)
        throw std::invalid_argument("dense product: dimension mismatch");
    DenseMatrix r(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                if (other(k, j) != 0)
                    r(i, j) += a * other(k, j);
        }
    return r;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

std::size_t SparseMatrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& r : rows_)
        n += r.size();
    return n;
}

void SparseMatrix::add(std::size_t i, std::size_t j, const Rational& v)
{
    if (i >= rows_.size() || j >= cols_)
        throw std::out_of_range("sparse add: index out of range");
    if (v == 0)
        return;
    auto& row = rows_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
    if (it != row.end() && it->first == j) {
        it->second += v;
        if (it->second == 0)
            row.erase(it);
    }
    else {
        row.insert(it, {static_cast<std::uint32_t>(j), v});
    }
}

Rational SparseMatrix::at(std::size_t i, std::size_t j) const
{
    const auto& row = rows_.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
    if (it != row.end() && it->first == j)
        return it->second;
    return 0;
}

void SparseMatrix::normalize(const Coefficients& coeffs)
{
    for (auto& row : rows_) {
        Row kept;
        for (auto& [j, v] : row) {
            Rational w = coeffs.normalize(v);
            if (w != 0)
                kept.emplace_back(j, std::move(w));
        }
        row = std::move(kept);
    }
}

Vector SparseMatrix::apply(const Vector& x) const
{
    if (x.size() != cols_)
        throw std::invalid_argument("sparse apply: dimension mismatch");
    Vector y(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (const auto& [j, v] : rows_[i])
            if (x[j] != 0)
                y[i] += v * x[j];
    return y;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const
{
    if (cols_ != other.rows())
        throw std::invalid_argument("sparse product: dimension mismatch");
    SparseMatrix r(rows(), other.cols());
    for (std::size_t i = 0; i < rows(); ++i)
        for (const auto& [k, a] : rows_[i])
            for (const auto& [j, b] : other.rows_[k])
                r.add(i, j, a * b);
    return r;
}

DenseMatrix SparseMatrix::to_dense() const
{
    DenseMatrix d(rows(), cols_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (const auto& [j, v] : rows_[i])
            d(i, j) = v;
    return d;
}

SparseMatrix SparseMatrix::from_columns(const std::vector<Vector>& columns, std::size_t rows)
{
    SparseMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows)
            throw std::invalid_argument("from_columns: column has wrong length");
        for (std::size_t i = 0; i < rows; ++i)
            if (columns[j][i] != 0)
                m.rows_[i].emplace_back(static_cast<std::uint32_t>(j), columns[j][i]);
    }
    return m;
}

namespace {

// row_target -= f * row_source, for sorted sparse rows.
void axpy(SparseMatrix::Row& target, const Rational& f, const SparseMatrix::Row& source, const Coefficients& coeffs)
{
    SparseMatrix::Row out;
    out.reserve(target.size() + source.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < target.size() || b < source.size()) {
        if (b == source.size() || (a < target.size() && target[a].first < source[b].first)) {
            out.push_back(std::move(target[a++]));
        }
        else if (a == target.size() || source[b].first < target[a].first) {
            Rational v = coeffs.normalize(Rational(-f * source[b].second));
            if (v != 0)
                out.emplace_back(source[b].first, std::move(v));
            ++b;
        }
        else {
            Rational v = coeffs.normalize(Rational(target[a].second - f * source[b].second));
            if (v != 0)
                out.emplace_back(target[a].first, std::move(v));
            ++a;
            ++b;
        }
    }
    target = std::move(out);
}

}  // namespace

SnfResult smith_normal_form(const SparseMatrix& a, const Coefficients& coeffs, bool with_transforms)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    SnfResult result;
    result.coeffs = coeffs;
    result.rows = m;
    result.cols = n;

    std::vector<SparseMatrix::Row> work(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [j, v] : a.row(i)) {
            Rational w = coeffs.normalize(v);
            if (w != 0) {
                coeffs.weight(w);
                work[i].emplace_back(j, std::move(w));
            }
        }
    }

    DenseMatrix left;
    DenseMatrix left_inv;
    DenseMatrix right;
    if (with_transforms) {
        left = DenseMatrix::identity(m);
        left_inv = DenseMatrix::identity(m);
        right = DenseMatrix::identity(n);
    }

    std::vector<char> active(m, 1);
    while (true) {
        long best_w = std::numeric_limits<long>::max();
        std::size_t best_len = std::numeric_limits<std::size_t>::max();
        std::size_t pr = m;
        std::size_t pc = n;
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i] || work[i].empty())
                continue;
            for (const auto& [j, v] : work[i]) {
                const long w = coeffs.weight(v);
                if (w < best_w || (w == best_w && work[i].size() < best_len)) {
                    best_w = w;
                    best_len = work[i].size();
                    pr = i;
                    pc = j;
                }
            }
            if (best_w == 0 && best_len == 1)
                break;
        }
        if (pr == m)
            break;

        const Rational pivot = [&] {
            for (const auto& [j, v] : work[pr])
                if (j == pc)
                    return v;
            return Rational(0);
        }();
        active[pr] = 0;

        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i] || work[i].empty())
                continue;
            auto it = std::lower_bound(work[i].begin(), work[i].end(), pc,
                                       [](const SparseMatrix::Entry& e, std::size_t c) { return e.first < c; });
            if (it == work[i].end() || it->first != pc)
                continue;
            const Rational f = coeffs.divide(it->second, pivot);
            axpy(work[i], f, work[pr], coeffs);
            if (with_transforms) {
                for (std::size_t k = 0; k < m; ++k) {
                    if (left(pr, k) != 0)
                        left(i, k) = coeffs.normalize(Rational(left(i, k) - f * left(pr, k)));
                    if (left_inv(k, i) != 0)
                        left_inv(k, pr) = coeffs.normalize(Rational(left_inv(k, pr) + f * left_inv(k, i)));
                }
            }
        }

        if (with_transforms) {
            for (const auto& [j, v] : work[pr]) {
                if (j == pc)
                    continue;
                const Rational g = coeffs.divide(v, pivot);
                for (std::size_t k = 0; k < n; ++k)
                    if (right(k, pc) != 0)
                        right(k, j) = coeffs.normalize(Rational(right(k, j) - g * right(k, pc)));
            }
        }

        result.pivots.push_back(pivot);
        result.pivot_rows.push_back(pr);
        result.pivot_cols.push_back(pc);
    }

    if (with_transforms)
        result.transforms = SnfTransforms{std::move(left), std::move(left_inv), std::move(right)};
    return result;
}

std::vector<long> SnfResult::divisor_exponents() const
{
    std::vector<long> e;
    for (const auto& v : pivots)
        e.push_back(coeffs.weight(v));
    std::sort(e.begin(), e.end());
    return e;
}

std::vector<long> SnfResult::torsion_exponents() const
{
    std::vector<long> e;
    for (long x : divisor_exponents())
        if (x > 0)
            e.push_back(x);
    return e;
}

bool SnfResult::contains(const Vector& b, Vector* preimage) const
{
    if (!transforms)
        throw std::logic_error("membership test requires SNF transforms");
    if (b.size() != rows)
        throw std::invalid_argument("membership test: vector has wrong length");
    Vector nb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        nb[i] = coeffs.normalize(b[i]);
    Vector y = transforms->left.apply(nb);
    for (auto& v : y)
        v = coeffs.normalize(v);
    std::vector<char> is_pivot_row(rows, 0);
    Vector z(cols);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        const std::size_t r = pivot_rows[k];
        is_pivot_row[r] = 1;
        if (y[r] == 0)
            continue;
        if (coeffs.weight(y[r]) < coeffs.weight(pivots[k]))
            return false;
        z[pivot_cols[k]] = coeffs.divide(y[r], pivots[k]);
    }
    for (std::size_t i = 0; i < rows; ++i)
        if (!is_pivot_row[i] && y[i] != 0)
            return false;
    if (preimage) {
        *preimage = transforms->right.apply(z);
        for (auto& v : *preimage)
            v = coeffs.normalize(v);
    }
    return true;
}

std::vector<Vector> SnfResult::kernel_basis() const
{
    if (!transforms)
        throw std::logic_error("kernel basis requires SNF transforms");
    std::vector<char> is_pivot_col(cols, 0);
    for (auto c : pivot_cols)
        is_pivot_col[c] = 1;
    std::vector<Vector> basis;
    for (std::size_t j = 0; j < cols; ++j)
        if (!is_pivot_col[j])
            basis.push_back(transforms->right.column(j));
    return basis;
}

std::vector<std::pair<Vector, long>> SnfResult::torsion_generators() const
{
    if (!transforms)
        throw std::logic_error("torsion generators require SNF transforms");
    std::vector<std::pair<Vector, long>> out;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        const long e = coeffs.weight(pivots[k]);
        if (e > 0)
            out.emplace_back(transforms->left_inverse.column(pivot_rows[k]), e);
    }
    return out;
}

std::size_t column_rank(const std::vector<Vector>& columns, std::size_t dim, const Coefficients& coeffs)
{
    Coefficients field = coeffs.kind == Coefficients::Kind::LocalP ? Coefficients::rationals() : coeffs;
    return smith_normal_form(SparseMatrix::from_columns(columns, dim), field).rank();
}

}  // namespace ellcoop
