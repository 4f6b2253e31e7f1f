#ifndef COALGDEF_MATRIX_HPP
#define COALGDEF_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace coalgdef {

template <class S>
using Vector = std::vector<S>;

/// Dense row-major matrix over an exact scalar type. Dimensions are fixed at
/// construction; entries default to zero.
template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n, const S& one)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    S& operator()(std::size_t i, std::size_t j)
    {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const S& operator()(std::size_t i, std::size_t j) const
    {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    S& at(std::size_t i, std::size_t j)
    {
        check_index(i, j);
        return data_[i * cols_ + j];
    }
    const S& at(std::size_t i, std::size_t j) const
    {
        check_index(i, j);
        return data_[i * cols_ + j];
    }

    /// Row-major entries; this is also the cochain flattening order.
    std::span<const S> entries() const { return data_; }
    std::span<S> entries() { return data_; }

    Vector<S> row(std::size_t i) const
    {
        return Vector<S>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    static Matrix from_entries(std::size_t rows, std::size_t cols, Vector<S> entries)
    {
        if (entries.size() != rows * cols)
            throw std::invalid_argument("entry count does not match matrix shape");
        Matrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(entries);
        return m;
    }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool is_zero() const
    {
        for (const auto& x : data_)
            if (!coalgdef::is_zero(x))
                return false;
        return true;
    }

    /// First nonzero entry in row-major order.
    std::optional<std::pair<std::size_t, std::size_t>> first_nonzero() const
    {
        for (std::size_t k = 0; k < data_.size(); ++k)
            if (!coalgdef::is_zero(data_[k]))
                return std::pair{k / cols_, k % cols_};
        return std::nullopt;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o)
    {
        require_same_shape(o, "+");
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        require_same_shape(o, "-");
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const S& c)
    {
        for (auto& x : data_)
            x *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a)
    {
        for (auto& x : a.data_)
            x = -x;
        return a;
    }
    friend Matrix operator*(const S& c, Matrix a) { return a *= c; }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
        Matrix c(a.rows_, b.cols_);
        // nonzero columns of each row of b
        std::vector<std::vector<std::size_t>> support(b.rows_);
        for (std::size_t k = 0; k < b.rows_; ++k)
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (!coalgdef::is_zero(b(k, j)))
                    support[k].push_back(j);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (coalgdef::is_zero(aik))
                    continue;
                for (std::size_t j : support[k])
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Vector<S> operator*(const Matrix& a, const Vector<S>& v)
    {
        if (a.cols_ != v.size())
            throw std::invalid_argument("matrix-vector shape mismatch");
        Vector<S> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                if (!coalgdef::is_zero(a(i, k)) && !coalgdef::is_zero(v[k]))
                    out[i] += a(i, k) * v[k];
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void check_index(std::size_t i, std::size_t j) const
    {
        if (i >= rows_ || j >= cols_)
            throw std::out_of_range("index (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                                    shape() + " matrix");
    }
    void require_same_shape(const Matrix& o, const char* op) const
    {
        if (!same_shape(o))
            throw std::invalid_argument(std::string("shape mismatch in ") + op + ": " + shape() + " vs " +
                                        o.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

/// Kronecker product; row (i1, i2) of the result is i1 * b.rows() + i2, so the
/// left factor is the most significant digit.
template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b)
{
    Matrix<S> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const S& x = a(i1, j1);
            if (is_zero(x))
                continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    if (!is_zero(b(i2, j2)))
                        out(i1 * b.rows() + i2, j1 * b.cols() + j2) = x * b(i2, j2);
        }
    return out;
}

template <class S>
bool is_zero_vector(const Vector<S>& v)
{
    for (const auto& x : v)
        if (!is_zero(x))
            return false;
    return true;
}

} // namespace coalgdef

#endif
