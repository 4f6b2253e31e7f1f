#ifndef COALGDEF_LINALG_HPP
#define COALGDEF_LINALG_HPP

// Exact linear algebra over a field: incremental reduced row echelon form on
// sparse rows, and the rank / kernel / image / solve / quotient operations
// built on it. Everything is deterministic: pivots are always the leftmost
// nonzero column, and results are reduced to a unique canonical form.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace coalgdef {

template <class S>
using SparseRow = std::vector<std::pair<std::size_t, S>>;

/// Reduced row echelon form of the span of the rows added so far.
///
/// Rows are kept fully reduced against each other after every insertion, so
/// reduced_rows() is the unique RREF basis of the row space no matter the
/// insertion order.
template <class S>
class RowEchelon {
public:
    explicit RowEchelon(std::size_t cols) : cols_(cols), pivot_row_(cols, npos) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    /// Inserts v into the row space. Returns false if v was already in it.
    bool add(const Vector<S>& v)
    {
        Vector<S> r = residual(v);
        std::size_t lead = npos;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!is_zero(r[c])) {
                lead = c;
                break;
            }
        if (lead == npos)
            return false;

        S lead_value = r[lead];
        SparseRow<S> row;
        for (std::size_t c = lead; c < cols_; ++c)
            if (!is_zero(r[c]))
                row.emplace_back(c, S(r[c] / lead_value));

        for (auto& other : rows_) {
            auto it = std::lower_bound(other.begin(), other.end(), lead,
                                       [](const auto& e, std::size_t c) { return e.first < c; });
            if (it == other.end() || it->first != lead)
                continue;
            S factor = it->second;
            other = axpy(other, factor, row);
        }
        pivot_row_[lead] = rows_.size();
        pivots_.push_back(lead);
        rows_.push_back(std::move(row));
        return true;
    }

    /// v minus its projection onto the current row space along the pivots.
    Vector<S> residual(const Vector<S>& v) const
    {
        if (v.size() != cols_)
            throw std::invalid_argument("vector length does not match echelon width");
        Vector<S> r = v;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            std::size_t p = pivots_[k];
            if (is_zero(r[p]))
                continue;
            S factor = r[p];
            for (const auto& [c, x] : rows_[k])
                r[c] -= factor * x;
        }
        return r;
    }

    bool contains(const Vector<S>& v) const { return is_zero_vector(residual(v)); }

    /// Pivot columns in increasing order.
    std::vector<std::size_t> pivots() const
    {
        auto p = pivots_;
        std::sort(p.begin(), p.end());
        return p;
    }

    /// RREF rows sorted by pivot column, as dense vectors.
    std::vector<Vector<S>> reduced_rows() const
    {
        std::vector<Vector<S>> out;
        for (std::size_t p : pivots()) {
            Vector<S> dense(cols_);
            for (const auto& [c, x] : rows_[pivot_row_[p]])
                dense[c] = x;
            out.push_back(std::move(dense));
        }
        return out;
    }

    /// The sparse RREF row whose pivot is column p.
    const SparseRow<S>& row_with_pivot(std::size_t p) const { return rows_.at(pivot_row_.at(p)); }
    bool is_pivot(std::size_t c) const { return pivot_row_[c] != npos; }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // a - factor * b
    static SparseRow<S> axpy(const SparseRow<S>& a, const S& factor, const SparseRow<S>& b)
    {
        SparseRow<S> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                out.emplace_back(b[j].first, S(-(factor * b[j].second)));
                ++j;
            } else {
                S x = a[i].second - factor * b[j].second;
                if (!is_zero(x))
                    out.emplace_back(a[i].first, std::move(x));
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::size_t cols_;
    std::vector<SparseRow<S>> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> pivot_row_;
};

template <class S>
RowEchelon<S> row_echelon(const Matrix<S>& m)
{
    RowEchelon<S> e(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Vector<S> r = m.row(i);
        if (!is_zero_vector(r))
            e.add(r);
    }
    return e;
}

/// A linear subspace of K^n held in canonical form: its basis is the reduced
/// row echelon basis (leading entry 1, leftmost pivots). Equal subspaces have
/// identical representations.
template <class S>
class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim = 0) : ambient_(ambient_dim) {}

    static Subspace span(std::size_t ambient_dim, const std::vector<Vector<S>>& vectors)
    {
        RowEchelon<S> e(ambient_dim);
        for (const auto& v : vectors)
            e.add(v);
        Subspace s(ambient_dim);
        s.basis_ = e.reduced_rows();
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vector<S>>& basis() const { return basis_; }

    bool contains(const Vector<S>& v) const
    {
        RowEchelon<S> e(ambient_);
        for (const auto& b : basis_)
            e.add(b);
        return e.contains(v);
    }

    bool contains(const Subspace& other) const
    {
        if (other.ambient_ != ambient_)
            return false;
        RowEchelon<S> e(ambient_);
        for (const auto& b : basis_)
            e.add(b);
        for (const auto& v : other.basis_)
            if (!e.contains(v))
                return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b)
    {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_;
    std::vector<Vector<S>> basis_;
};

template <class S>
std::size_t rank(const Matrix<S>& m)
{
    return row_echelon(m).rank();
}

/// Canonical basis of {v : m v = 0}. `one` is the unit of the scalar field
/// (needed when m has no nonzero entry to borrow it from).
template <class S>
Subspace<S> kernel_basis(const Matrix<S>& m, const S& one = S(1))
{
    RowEchelon<S> e = row_echelon(m);
    std::vector<std::size_t> pivots = e.pivots();
    std::vector<Vector<S>> vectors;
    // free column j: x_j = 1, x_p = -rref[p][j] for each pivot p
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (e.is_pivot(free))
            continue;
        Vector<S> v(m.cols());
        v[free] = one;
        for (std::size_t p : pivots) {
            if (p > free)
                break;
            for (const auto& [c, x] : e.row_with_pivot(p))
                if (c == free)
                    v[p] = -x;
        }
        vectors.push_back(std::move(v));
    }
    return Subspace<S>::span(m.cols(), vectors);
}

template <class S>
Subspace<S> image_basis(const Matrix<S>& m)
{
    std::vector<Vector<S>> columns;
    Matrix<S> t = m.transpose();
    for (std::size_t j = 0; j < t.rows(); ++j)
        columns.push_back(t.row(j));
    return Subspace<S>::span(m.rows(), columns);
}

/// Particular solution of m x = b, or nullopt when the system is
/// inconsistent. Free variables are set to zero, pivots are leftmost.
template <class S>
std::optional<Vector<S>> solve(const Matrix<S>& m, const Vector<S>& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: right-hand side has length " + std::to_string(b.size()) +
                                    ", matrix has " + std::to_string(m.rows()) + " rows");
    const std::size_t n = m.cols();
    RowEchelon<S> e(n + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Vector<S> r = m.row(i);
        r.push_back(b[i]);
        if (!is_zero_vector(r))
            e.add(r);
    }
    if (e.is_pivot(n))
        return std::nullopt;
    Vector<S> x(n);
    for (std::size_t p : e.pivots()) {
        const auto& row = e.row_with_pivot(p);
        if (row.back().first == n)
            x[p] = row.back().second;
    }
    return x;
}

template <class S>
struct QuotientData {
    std::size_t dim = 0;
    std::vector<Vector<S>> representatives;
};

/// Dimension of ker / im and kernel vectors completing a basis of im to a
/// basis of ker. Throws std::logic_error when im is not contained in ker.
template <class S>
QuotientData<S> quotient_data(const Subspace<S>& ker, const Subspace<S>& im)
{
    if (ker.ambient_dim() != im.ambient_dim())
        throw std::invalid_argument("quotient_data: ambient dimensions differ");
    if (!ker.contains(im))
        throw std::logic_error("quotient_data: image is not contained in kernel");
    RowEchelon<S> e(ker.ambient_dim());
    for (const auto& v : im.basis())
        e.add(v);
    QuotientData<S> q;
    for (const auto& v : ker.basis())
        if (e.add(v))
            q.representatives.push_back(v);
    q.dim = q.representatives.size();
    return q;
}

/// Inverse of a square matrix; throws std::domain_error when singular.
template <class S>
Matrix<S> inverse(const Matrix<S>& m, const S& one = S(1))
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("inverse of non-square " + m.shape() + " matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return m;
    RowEchelon<S> e(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        Vector<S> r = m.row(i);
        r.resize(2 * n);
        r[n + i] = one;
        e.add(r);
    }
    auto rows = e.reduced_rows();
    if (rows.size() < n || e.pivots()[n - 1] >= n)
        throw std::domain_error("inverse of singular matrix");
    Matrix<S> inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = rows[i][n + j];
    return inv;
}

} // namespace coalgdef

#endif
