#ifndef COALGDEF_TESTS_SUPPORT_HPP
#define COALGDEF_TESTS_SUPPORT_HPP

// Shared helpers for the test suites: literal matrices and seeded random
// exact scalars.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "coalgdef/fixtures.hpp"
#include "coalgdef/linalg.hpp"

namespace coalgdef::testing {

using Q = mpq_class;
inline const RationalField QQ{};

template <Field F>
Matrix<scalar_t<F>> mat(const F& field, std::initializer_list<std::initializer_list<std::int64_t>> rows)
{
    std::size_t r = rows.size(), c = r ? rows.begin()->size() : 0;
    Matrix<scalar_t<F>> m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (auto x : row)
            m(i, j++) = field.from_int(x);
        ++i;
    }
    return m;
}

inline Matrix<Q> qmat(std::initializer_list<std::initializer_list<std::int64_t>> rows) { return mat(QQ, rows); }

template <Field F>
Vector<scalar_t<F>> vec(const F& field, std::initializer_list<std::int64_t> xs)
{
    Vector<scalar_t<F>> v;
    for (auto x : xs)
        v.push_back(field.from_int(x));
    return v;
}

/// Random field elements: rationals p/q with |p|, q <= 9, or the same
/// fractions reduced into GF(p).
template <Field F>
class Sampler {
public:
    Sampler(F field, std::uint64_t seed) : field_(std::move(field)), rng_(seed) {}

    scalar_t<F> scalar(double zero_probability = 0.0)
    {
        if (std::uniform_real_distribution<double>(0, 1)(rng_) < zero_probability)
            return field_.zero();
        int num = std::uniform_int_distribution<int>(-9, 9)(rng_);
        int den = std::uniform_int_distribution<int>(1, 9)(rng_);
        return field_.parse(std::to_string(num) + "/" + std::to_string(den));
    }

    Matrix<scalar_t<F>> matrix(std::size_t rows, std::size_t cols, double zero_probability = 0.3)
    {
        Matrix<scalar_t<F>> m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = scalar(zero_probability);
        return m;
    }

    /// Random matrix of prescribed rank (product of random factors).
    Matrix<scalar_t<F>> matrix_of_rank(std::size_t rows, std::size_t cols, std::size_t r)
    {
        return matrix(rows, r, 0.0) * matrix(r, cols, 0.0);
    }

    Matrix<scalar_t<F>> invertible(std::size_t n)
    {
        for (;;) {
            auto m = matrix(n, n, 0.2);
            if (coalgdef::rank(m) == n)
                return m;
        }
    }

    std::size_t index(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng_); }
    bool coin() { return index(2) == 1; }

    const F& field() const { return field_; }
    std::mt19937_64& engine() { return rng_; }

private:
    F field_;
    std::mt19937_64 rng_;
};

} // namespace coalgdef::testing

#endif
