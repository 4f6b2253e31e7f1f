#ifndef COALGDEF_TENSOR_HPP
#define COALGDEF_TENSOR_HPP

// Tensor-power index convention: the basis vector e_{i1} (x) ... (x) e_{in}
// of V^{(x)n}, dim V = d, has flat index sum_k i_k d^(n-k) (0-based, leftmost
// factor most significant). V^{(x)0} is the ground field with index 0.

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace coalgdef {

/// d^n, throwing on overflow.
inline std::size_t ipow(std::size_t d, std::size_t n)
{
    std::size_t r = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (d != 0 && r > std::numeric_limits<std::size_t>::max() / d)
            throw std::overflow_error("tensor power dimension overflows");
        r *= d;
    }
    return r;
}

inline std::size_t flat_index(const std::vector<std::size_t>& digits, std::size_t d)
{
    std::size_t idx = 0;
    for (std::size_t i : digits) {
        if (i >= d)
            throw std::out_of_range("tensor factor index out of range");
        idx = idx * d + i;
    }
    return idx;
}

inline std::vector<std::size_t> tensor_digits(std::size_t index, std::size_t d, std::size_t n)
{
    std::vector<std::size_t> digits(n);
    for (std::size_t k = n; k-- > 0;) {
        digits[k] = index % d;
        index /= d;
    }
    return digits;
}

/// f^{(x)n}; the zeroth power is the 1x1 identity.
template <class S>
Matrix<S> tensor_power_map(const Matrix<S>& f, std::size_t n, const S& one)
{
    Matrix<S> out = Matrix<S>::identity(1, one);
    for (std::size_t k = 0; k < n; ++k)
        out = kron(out, f);
    return out;
}

/// Id^{(x)(i-1)} (x) delta (x) Id^{(x)(n-i)} : V^{(x)n} -> V^{(x)(n+1)}, with
/// delta a (d^2 x d) matrix and 1 <= i <= n.
template <class S>
Matrix<S> middle_insertion(const Matrix<S>& delta, std::size_t n, std::size_t i, const S& one)
{
    const std::size_t d = delta.cols();
    if (delta.rows() != d * d)
        throw std::invalid_argument("middle_insertion: comultiplication must be d^2 x d, got " + delta.shape());
    if (i < 1 || i > n)
        throw std::out_of_range("middle_insertion: position " + std::to_string(i) + " outside 1.." +
                                std::to_string(n));
    Matrix<S> left = Matrix<S>::identity(ipow(d, i - 1), one);
    Matrix<S> right = Matrix<S>::identity(ipow(d, n - i), one);
    return kron(kron(left, delta), right);
}

} // namespace coalgdef

#endif
