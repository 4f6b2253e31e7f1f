#ifndef COALGDEF_COHOMOLOGY_HPP
#define COALGDEF_COHOMOLOGY_HPP

// Hochschild coalgebra cochains C^n(M, A) = Hom(M, A^{(x)n}) with the
// differential delta_c, and the deformation complex of a coalgebra morphism
// f : A -> B,
//
//   C^n(f) = C^n(A, A) x C^n(B, B) x C^{n-1}(A, B),
//   d_c(xi; pi; phi) = (delta xi; delta pi; pi f - f^{(x)n} xi - delta phi),
//
// where A is a B-bicomodule via f in the last slot. C^0 is the zero module.
//
// Each differential exists twice: apply() composes structure matrices, and
// differential_matrix() writes the flattened operator entry by entry from
// the index formulas. Tests check the two against each other.
//
// Flattening: a cochain's matrix (rows = tensor basis of the target power,
// cols = basis of M) is read row-major; morphism cochains concatenate the
// xi, pi, phi blocks in that order. Degree-0 cochains flatten to nothing.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalgebra.hpp"
#include "linalg.hpp"

namespace coalgdef {

template <class S>
struct Cochain {
    std::size_t degree = 0;
    Matrix<S> map;

    friend bool operator==(const Cochain&, const Cochain&) = default;
};

template <class S>
struct MorphismCochain {
    std::size_t degree = 1;
    Matrix<S> xi;  // C^n(A, A)
    Matrix<S> pi;  // C^n(B, B)
    Matrix<S> phi; // C^{n-1}(A, B), A a B-bicomodule via f

    bool is_zero() const { return xi.is_zero() && pi.is_zero() && phi.is_zero(); }

    MorphismCochain& operator+=(const MorphismCochain& o)
    {
        check_degree(o);
        xi += o.xi;
        pi += o.pi;
        phi += o.phi;
        return *this;
    }
    MorphismCochain& operator-=(const MorphismCochain& o)
    {
        check_degree(o);
        xi -= o.xi;
        pi -= o.pi;
        phi -= o.phi;
        return *this;
    }
    friend MorphismCochain operator+(MorphismCochain a, const MorphismCochain& b) { return a += b; }
    friend MorphismCochain operator-(MorphismCochain a, const MorphismCochain& b) { return a -= b; }
    friend MorphismCochain operator-(MorphismCochain a) { return MorphismCochain{a.degree, -a.xi, -a.pi, -a.phi}; }
    friend MorphismCochain operator*(const S& c, MorphismCochain a)
    {
        a.xi *= c;
        a.pi *= c;
        a.phi *= c;
        return a;
    }

    friend bool operator==(const MorphismCochain&, const MorphismCochain&) = default;

private:
    void check_degree(const MorphismCochain& o) const
    {
        if (o.degree != degree)
            throw std::invalid_argument("adding morphism cochains of degrees " + std::to_string(degree) + " and " +
                                        std::to_string(o.degree));
    }
};

/// delta_c sigma = (Id (x) sigma) psi_l + sum_i (-1)^i Id..(x) Delta (x)..Id sigma
///                 + (-1)^{n+1} (sigma (x) Id) psi_r.
template <Field F>
Cochain<scalar_t<F>> delta_c(const Bicomodule<F>& m, const Cochain<scalar_t<F>>& sigma)
{
    using S = scalar_t<F>;
    const std::size_t n = sigma.degree;
    const std::size_t d = m.over().dim();
    if (sigma.map.rows() != ipow(d, n) || sigma.map.cols() != m.dim())
        throw std::invalid_argument("delta_c: degree-" + std::to_string(n) + " cochain has shape " +
                                    sigma.map.shape() + ", expected " + std::to_string(ipow(d, n)) + "x" +
                                    std::to_string(m.dim()));
    if (n == 0)
        return {1, Matrix<S>(d, m.dim())};

    const S one = m.field().one();
    const auto id = m.over().id();
    Matrix<S> out = kron(id, sigma.map) * m.psi_l();
    for (std::size_t i = 1; i <= n; ++i) {
        Matrix<S> term = middle_insertion(m.over().delta(), n, i, one) * sigma.map;
        if (i % 2 == 1)
            out -= term;
        else
            out += term;
    }
    Matrix<S> last = kron(sigma.map, id) * m.psi_r();
    if ((n + 1) % 2 == 1)
        out -= last;
    else
        out += last;
    return {n + 1, std::move(out)};
}

namespace detail {

/// Adds the flattened Hochschild differential of degree n (negated when
/// `negate`) into `out` with its top-left corner at (row0, col0).
template <Field F>
void add_hochschild_block(Matrix<scalar_t<F>>& out, std::size_t row0, std::size_t col0, const Bicomodule<F>& mod,
                          std::size_t n, bool negate)
{
    using S = scalar_t<F>;
    const std::size_t d = mod.over().dim();
    const std::size_t m = mod.dim();
    if (n == 0 || d == 0 || m == 0)
        return;
    const std::size_t dn = ipow(d, n);
    const auto& psi_l = mod.psi_l();
    const auto& psi_r = mod.psi_r();
    const auto& delta = mod.over().delta();

    auto add = [&](std::size_t r, std::size_t c, const S& v, bool neg) {
        if (neg != negate)
            out(row0 + r, col0 + c) -= v;
        else
            out(row0 + r, col0 + c) += v;
    };

    for (std::size_t r = 0; r < dn; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t col = r * m + c;
            // (Id (x) sigma) psi_l : sigma[r][c] psi_l[(a,c)][j] lands at row ((a, r), j)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t j = 0; j < m; ++j) {
                    const S& v = psi_l(a * m + c, j);
                    if (!is_zero(v))
                        add((a * dn + r) * m + j, col, v, false);
                }
            // (sigma (x) Id) psi_r : sigma[r][c] psi_r[(c,a)][j] lands at row ((r, a), j)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t j = 0; j < m; ++j) {
                    const S& v = psi_r(c * d + a, j);
                    if (!is_zero(v))
                        add((r * d + a) * m + j, col, v, (n + 1) % 2 == 1);
                }
        }

    // insertions: sigma[k][j] with digit y_i of k replaced by (b, c) via Delta
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t tail = ipow(d, n - i);
        for (std::size_t k = 0; k < dn; ++k) {
            const std::size_t prefix = k / (tail * d);
            const std::size_t y = (k / tail) % d;
            const std::size_t suffix = k % tail;
            for (std::size_t bc = 0; bc < d * d; ++bc) {
                const S& v = delta(bc, y);
                if (is_zero(v))
                    continue;
                const std::size_t big = (prefix * d * d + bc) * tail + suffix;
                for (std::size_t j = 0; j < m; ++j)
                    add(big * m + j, k * m + j, v, i % 2 == 1);
            }
        }
    }
}

} // namespace detail

/// The complex (C^*(M, A), delta_c) for an A-bicomodule M.
template <Field F>
class HochschildComplex {
public:
    using scalar = scalar_t<F>;
    using cochain_type = Cochain<scalar>;

    explicit HochschildComplex(Bicomodule<F> m) : m_(std::move(m)) {}

    const Bicomodule<F>& bicomodule() const { return m_; }
    const F& field() const { return m_.field(); }

    std::size_t cochain_dim(std::size_t n) const { return n == 0 ? 0 : ipow(m_.over().dim(), n) * m_.dim(); }

    cochain_type zero(std::size_t n) const { return {n, Matrix<scalar>(ipow(m_.over().dim(), n), m_.dim())}; }

    Vector<scalar> flatten(const cochain_type& s) const
    {
        check_shape(s);
        if (s.degree == 0)
            return {};
        return Vector<scalar>(s.map.entries().begin(), s.map.entries().end());
    }

    cochain_type unflatten(std::size_t n, const Vector<scalar>& v) const
    {
        if (v.size() != cochain_dim(n))
            throw std::invalid_argument("unflatten: length " + std::to_string(v.size()) + " for degree " +
                                        std::to_string(n) + ", expected " + std::to_string(cochain_dim(n)));
        if (n == 0)
            return zero(0);
        return {n, Matrix<scalar>::from_entries(ipow(m_.over().dim(), n), m_.dim(), v)};
    }

    cochain_type apply(const cochain_type& s) const { return delta_c(m_, s); }

    /// Flattened delta_c : C^n -> C^{n+1}, built from the index formulas.
    Matrix<scalar> differential_matrix(std::size_t n) const
    {
        Matrix<scalar> out(cochain_dim(n + 1), cochain_dim(n));
        detail::add_hochschild_block(out, 0, 0, m_, n, false);
        return out;
    }

    void check_shape(const cochain_type& s) const
    {
        if (s.map.rows() != ipow(m_.over().dim(), s.degree) || s.map.cols() != m_.dim())
            throw std::invalid_argument("cochain of degree " + std::to_string(s.degree) + " has shape " +
                                        s.map.shape());
    }

private:
    Bicomodule<F> m_;
};

/// The deformation complex (C^*(f), d_c) of a coalgebra morphism f : A -> B.
template <Field F>
class MorphismComplex {
public:
    using scalar = scalar_t<F>;
    using cochain_type = MorphismCochain<scalar>;

    explicit MorphismComplex(CoalgebraMorphism<F> f)
        : f_(std::move(f)),
          source_(regular_bicomodule(f_.source())),
          target_(regular_bicomodule(f_.target())),
          via_(bicomodule_via(f_))
    {
    }

    const CoalgebraMorphism<F>& morphism() const { return f_; }
    const F& field() const { return f_.field(); }
    const HochschildComplex<F>& source_complex() const { return source_; }
    const HochschildComplex<F>& target_complex() const { return target_; }
    const HochschildComplex<F>& via_complex() const { return via_; }

    std::size_t cochain_dim(std::size_t n) const
    {
        if (n == 0)
            return 0;
        return source_.cochain_dim(n) + target_.cochain_dim(n) + via_.cochain_dim(n - 1);
    }

    cochain_type zero(std::size_t n) const
    {
        if (n == 0)
            return {0, {}, {}, {}}; // C^0(f) = 0
        return {n, source_.zero(n).map, target_.zero(n).map, via_.zero(n - 1).map};
    }

    Vector<scalar> flatten(const cochain_type& w) const
    {
        check_shape(w);
        Vector<scalar> v = source_.flatten({w.degree, w.xi});
        auto p = target_.flatten({w.degree, w.pi});
        auto q = via_.flatten({w.degree - 1, w.phi});
        v.insert(v.end(), p.begin(), p.end());
        v.insert(v.end(), q.begin(), q.end());
        return v;
    }

    cochain_type unflatten(std::size_t n, const Vector<scalar>& v) const
    {
        if (n == 0 || v.size() != cochain_dim(n))
            throw std::invalid_argument("unflatten: bad length " + std::to_string(v.size()) + " for degree " +
                                        std::to_string(n));
        const std::size_t a = source_.cochain_dim(n), b = target_.cochain_dim(n);
        Vector<scalar> xs(v.begin(), v.begin() + a), ps(v.begin() + a, v.begin() + a + b),
            fs(v.begin() + a + b, v.end());
        return {n, source_.unflatten(n, xs).map, target_.unflatten(n, ps).map, via_.unflatten(n - 1, fs).map};
    }

    cochain_type apply(const cochain_type& w) const
    {
        check_shape(w);
        const std::size_t n = w.degree;
        const auto& f = f_.map();
        auto dxi = delta_c(source_.bicomodule(), Cochain<scalar>{n, w.xi});
        auto dpi = delta_c(target_.bicomodule(), Cochain<scalar>{n, w.pi});
        Matrix<scalar> third = w.pi * f - tensor_power_map(f, n, field().one()) * w.xi;
        if (n >= 2)
            third -= delta_c(via_.bicomodule(), Cochain<scalar>{n - 1, w.phi}).map;
        return {n + 1, std::move(dxi.map), std::move(dpi.map), std::move(third)};
    }

    /// Flattened d_c : C^n(f) -> C^{n+1}(f), built from the index formulas.
    Matrix<scalar> differential_matrix(std::size_t n) const
    {
        if (n == 0)
            return Matrix<scalar>(cochain_dim(1), 0);
        const std::size_t da = f_.source().dim(), db = f_.target().dim();
        const std::size_t xi_in = source_.cochain_dim(n), pi_in = target_.cochain_dim(n);
        const std::size_t xi_out = source_.cochain_dim(n + 1), pi_out = target_.cochain_dim(n + 1);
        Matrix<scalar> out(cochain_dim(n + 1), cochain_dim(n));

        detail::add_hochschild_block(out, 0, 0, source_.bicomodule(), n, false);
        detail::add_hochschild_block(out, xi_out, xi_in, target_.bicomodule(), n, false);
        const std::size_t third = xi_out + pi_out;
        detail::add_hochschild_block(out, third, xi_in + pi_in, via_.bicomodule(), n - 1, true);

        const auto& f = f_.map();
        const std::size_t dbn = ipow(db, n), dan = ipow(da, n);
        // pi f : pi[r][c] f[c][j] at ((r), j)
        for (std::size_t r = 0; r < dbn; ++r)
            for (std::size_t c = 0; c < db; ++c)
                for (std::size_t j = 0; j < da; ++j)
                    if (!is_zero(f(c, j)))
                        out(third + r * da + j, xi_in + r * db + c) += f(c, j);
        // -f^{(x)n} xi : xi[k][j] prod_t f[r_t][k_t] at (r, j)
        for (std::size_t r = 0; r < dbn; ++r) {
            auto rd = tensor_digits(r, db, n);
            for (std::size_t k = 0; k < dan; ++k) {
                auto kd = tensor_digits(k, da, n);
                scalar coef = field().one();
                for (std::size_t t = 0; t < n && !is_zero(coef); ++t)
                    coef *= f(rd[t], kd[t]);
                if (is_zero(coef))
                    continue;
                for (std::size_t j = 0; j < da; ++j)
                    out(third + r * da + j, k * da + j) -= coef;
            }
        }
        return out;
    }

    void check_shape(const cochain_type& w) const
    {
        const std::size_t n = w.degree;
        if (n == 0)
            throw std::invalid_argument("morphism cochains have degree >= 1");
        source_.check_shape({n, w.xi});
        target_.check_shape({n, w.pi});
        via_.check_shape({n - 1, w.phi});
    }

private:
    CoalgebraMorphism<F> f_;
    HochschildComplex<F> source_;
    HochschildComplex<F> target_;
    HochschildComplex<F> via_;
};

template <Field F>
MorphismCochain<scalar_t<F>> d_c(const CoalgebraMorphism<F>& f, const MorphismCochain<scalar_t<F>>& w)
{
    return MorphismComplex<F>(f).apply(w);
}

template <class C>
struct CohomologyReport {
    std::size_t degree = 0;
    std::size_t cocycle_dim = 0;
    std::size_t coboundary_dim = 0;
    std::size_t h_dim = 0;
    std::vector<C> representatives;
};

/// H^n of a complex, n >= 1, with the differential into degree 1 taken as 0.
template <class Complex>
CohomologyReport<typename Complex::cochain_type> cohomology(const Complex& complex, std::size_t n)
{
    using S = typename Complex::scalar;
    if (n == 0)
        throw std::invalid_argument("cohomology is defined for degrees n >= 1");
    const S one = complex.field().one();
    Subspace<S> ker = kernel_basis(complex.differential_matrix(n), one);
    Subspace<S> im = n == 1 ? Subspace<S>(complex.cochain_dim(1)) : image_basis(complex.differential_matrix(n - 1));
    QuotientData<S> q = quotient_data(ker, im);

    CohomologyReport<typename Complex::cochain_type> report;
    report.degree = n;
    report.cocycle_dim = ker.dim();
    report.coboundary_dim = im.dim();
    report.h_dim = q.dim;
    for (const auto& v : q.representatives)
        report.representatives.push_back(complex.unflatten(n, v));
    return report;
}

template <class Complex>
bool is_cocycle(const Complex& complex, const typename Complex::cochain_type& w)
{
    auto dw = complex.apply(w);
    return is_zero_vector(complex.flatten(dw));
}

/// Canonical u with d(u) = w, or nullopt. In degree 1 only w = 0 bounds.
template <class Complex>
auto is_coboundary(const Complex& complex, const typename Complex::cochain_type& w)
    -> std::optional<typename Complex::cochain_type>
{
    auto target = complex.flatten(w);
    if (w.degree == 1) {
        if (!is_zero_vector(target))
            return std::nullopt;
        return complex.zero(0);
    }
    auto x = solve(complex.differential_matrix(w.degree - 1), target);
    if (!x)
        return std::nullopt;
    return complex.unflatten(w.degree - 1, *x);
}

/// Coordinates of the class of the cocycle w against the representatives
/// of cohomology(complex, deg w). All zero when w is a coboundary.
template <class Complex>
Vector<typename Complex::scalar> class_coordinates(const Complex& complex, const typename Complex::cochain_type& w)
{
    using S = typename Complex::scalar;
    const std::size_t n = w.degree;
    if (!is_cocycle(complex, w))
        throw std::invalid_argument("class_coordinates: not a cocycle");
    auto report = cohomology(complex, n);
    std::vector<Vector<S>> columns;
    if (n >= 2)
        columns = image_basis(complex.differential_matrix(n - 1)).basis();
    const std::size_t boundary = columns.size();
    for (const auto& r : report.representatives)
        columns.push_back(complex.flatten(r));
    Matrix<S> m(complex.cochain_dim(n), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            m(i, j) = columns[j][i];
    auto x = solve(m, complex.flatten(w));
    if (!x)
        throw std::logic_error("class_coordinates: cocycle outside span of boundaries and representatives");
    return Vector<S>(x->begin() + static_cast<std::ptrdiff_t>(boundary), x->end());
}

} // namespace coalgdef

#endif
