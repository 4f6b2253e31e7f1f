#ifndef COALGDEF_FIXTURES_HPP
#define COALGDEF_FIXTURES_HPP

// Small coalgebras and morphisms with known structure.

#include <cstddef>
#include <string>

#include "coalgebra.hpp"
#include "deformation.hpp"
#include "linalg.hpp"

namespace coalgdef {

/// Delta(e_i) = e_i (x) e_i.
template <Field F>
Coalgebra<F> grouplike(const F& field, std::size_t n)
{
    Matrix<scalar_t<F>> delta(n * n, n);
    for (std::size_t i = 0; i < n; ++i)
        delta(i * n + i, i) = field.one();
    return Coalgebra<F>(field, "grouplike" + std::to_string(n), std::move(delta));
}

/// Delta(e_k) = sum_{i+j=k} e_i (x) e_j on e_0..e_{n-1}.
template <Field F>
Coalgebra<F> divided_power(const F& field, std::size_t n)
{
    Matrix<scalar_t<F>> delta(n * n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i <= k; ++i)
            delta(i * n + (k - i), k) = field.one();
    return Coalgebra<F>(field, "divided_power" + std::to_string(n), std::move(delta));
}

/// The n-dimensional coalgebra with zero comultiplication.
template <Field F>
Coalgebra<F> null_coalgebra(const F& field, std::size_t n)
{
    return Coalgebra<F>(field, "null" + std::to_string(n), Matrix<scalar_t<F>>(n * n, n));
}

/// Blockwise comultiplication on A (+) B; the basis of A comes first.
template <Field F>
Coalgebra<F> direct_sum(const Coalgebra<F>& a, const Coalgebra<F>& b)
{
    const std::size_t da = a.dim(), db = b.dim(), n = da + db;
    Matrix<scalar_t<F>> delta(n * n, n);
    for (std::size_t r = 0; r < da * da; ++r)
        for (std::size_t c = 0; c < da; ++c)
            delta((r / da) * n + r % da, c) = a.delta()(r, c);
    for (std::size_t r = 0; r < db * db; ++r)
        for (std::size_t c = 0; c < db; ++c)
            delta((da + r / db) * n + da + r % db, da + c) = b.delta()(r, c);
    return Coalgebra<F>(a.field(), a.name() + "+" + b.name(), std::move(delta));
}

template <Field F>
CoalgebraMorphism<F> identity_morphism(const Coalgebra<F>& a)
{
    return CoalgebraMorphism<F>(a, a, a.id());
}

template <Field F>
CoalgebraMorphism<F> zero_morphism(const Coalgebra<F>& a, const Coalgebra<F>& b)
{
    return CoalgebraMorphism<F>(a, b, Matrix<scalar_t<F>>(b.dim(), a.dim()));
}

/// grouplike(n) -> grouplike(1), every e_i to g.
template <Field F>
CoalgebraMorphism<F> collapse_morphism(const F& field, std::size_t n)
{
    Matrix<scalar_t<F>> m(1, n);
    for (std::size_t i = 0; i < n; ++i)
        m(0, i) = field.one();
    return CoalgebraMorphism<F>(grouplike(field, n), grouplike(field, 1), std::move(m));
}

/// e_i -> e_i from the k-dimensional to the n-dimensional member of a family
/// (grouplike or divided_power), k <= n.
template <Field F>
CoalgebraMorphism<F> standard_inclusion(const Coalgebra<F>& small, const Coalgebra<F>& large)
{
    if (small.dim() > large.dim())
        throw std::invalid_argument("standard_inclusion: source larger than target");
    Matrix<scalar_t<F>> m(large.dim(), small.dim());
    for (std::size_t i = 0; i < small.dim(); ++i)
        m(i, i) = small.field().one();
    return CoalgebraMorphism<F>(small, large, std::move(m));
}

/// The coalgebra structure carried over by the basis change T: the new
/// comultiplication is (T (x) T) Delta T^{-1}.
template <Field F>
Coalgebra<F> transport(const Coalgebra<F>& a, const Matrix<scalar_t<F>>& t, std::string name)
{
    auto t_inv = inverse(t, a.field().one());
    return Coalgebra<F>(a.field(), std::move(name), kron(t, t) * a.delta() * t_inv);
}

/// f carried over to transported source and target: T_B f T_A^{-1}.
template <Field F>
CoalgebraMorphism<F> transport(const CoalgebraMorphism<F>& f, const Matrix<scalar_t<F>>& t_source,
                               const Matrix<scalar_t<F>>& t_target)
{
    const auto one = f.field().one();
    auto a = transport(f.source(), t_source, f.source().name() + "'");
    auto b = transport(f.target(), t_target, f.target().name() + "'");
    return CoalgebraMorphism<F>(std::move(a), std::move(b), t_target * f.map() * inverse(t_source, one));
}

/// Delta_{A,1} = Delta_{B,1} : e_1 -> e_1 (x) e_1 over Id on divided_power(2),
/// higher coefficients zero. Valid at every order: g = e_0 + t e_1 is grouplike.
template <Field F>
TruncatedDeformation<F> divided_power_deformation(const F& field, std::size_t order)
{
    auto f = identity_morphism(divided_power(field, 2));
    auto w = TruncatedDeformation<F>::zero_coefficient(f);
    w.xi(3, 1) = field.one();
    w.pi(3, 1) = field.one();
    auto d = TruncatedDeformation<F>::trivial(f, order);
    std::vector<MorphismCochain<scalar_t<F>>> higher(d.coefficients().begin() + 1, d.coefficients().end());
    if (order >= 1)
        higher[0] = w;
    return TruncatedDeformation<F>(f, std::move(higher));
}

/// Delta_t = t e (x) e on both sides of Id on null(1). Its infinitesimal is a
/// cocycle outside the image of d_c, so no formal isomorphism trivializes it.
template <Field F>
TruncatedDeformation<F> squaring_deformation(const F& field, std::size_t order)
{
    auto f = identity_morphism(null_coalgebra(field, 1));
    std::vector<MorphismCochain<scalar_t<F>>> higher;
    for (std::size_t n = 1; n <= order; ++n)
        higher.push_back(TruncatedDeformation<F>::zero_coefficient(f));
    if (order >= 1) {
        higher[0].xi(0, 0) = field.one();
        higher[0].pi(0, 0) = field.one();
    }
    return TruncatedDeformation<F>(f, std::move(higher));
}

/// The 2-cocycle e_0 -> e_0 (x) e_1 (on A and B) over Id on null(2); its
/// order-1 deformation has an obstruction with nonzero class in H^3.
template <Field F>
MorphismCochain<scalar_t<F>> obstructed_cocycle(const F& field)
{
    auto f = identity_morphism(null_coalgebra(field, 2));
    auto w = TruncatedDeformation<F>::zero_coefficient(f);
    w.xi(1, 0) = field.one();
    w.pi(1, 0) = field.one();
    return w;
}

} // namespace coalgdef

#endif
