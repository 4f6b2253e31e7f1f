#ifndef COALGDEF_DEFORMATION_HPP
#define COALGDEF_DEFORMATION_HPP

// Truncated formal deformations of a coalgebra morphism f : A -> B.
//
// A deformation of order N is Omega_t = sum_{n<=N} omega_n t^n with
// omega_n = (Delta_{A,n}; Delta_{B,n}; f_n) in C^2(f) and
// omega_0 = (Delta_A; Delta_B; f), such that Delta_{A,t} and Delta_{B,t}
// are coassociative and F_t is a coalgebra map, all modulo t^{N+1}.
// Formal isomorphisms Phi_t = sum phi_n t^n, phi_0 = (Id_A; Id_B), act by
//
//   Delta_{X,t} -> (Phi_X (x) Phi_X) Delta_{X,t} Phi_X^{-1},
//   F_t         -> Phi_B F_t Phi_A^{-1}.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cohomology.hpp"

namespace coalgdef {

template <Field F>
class TruncatedDeformation {
public:
    using scalar = scalar_t<F>;
    using cochain_type = MorphismCochain<scalar>;

    TruncatedDeformation() = default;

    /// omega_0 is taken from f; `higher` holds omega_1..omega_N.
    TruncatedDeformation(CoalgebraMorphism<F> f, std::vector<cochain_type> higher) : f_(std::move(f))
    {
        coeffs_.push_back({2, f_.source().delta(), f_.target().delta(), f_.map()});
        for (auto& w : higher) {
            check_slot(w);
            coeffs_.push_back(std::move(w));
        }
    }

    static TruncatedDeformation trivial(const CoalgebraMorphism<F>& f, std::size_t order)
    {
        std::vector<cochain_type> zeros;
        for (std::size_t n = 1; n <= order; ++n)
            zeros.push_back(zero_coefficient(f));
        return TruncatedDeformation(f, std::move(zeros));
    }

    static cochain_type zero_coefficient(const CoalgebraMorphism<F>& f)
    {
        const std::size_t da = f.source().dim(), db = f.target().dim();
        return {2, Matrix<scalar>(da * da, da), Matrix<scalar>(db * db, db), Matrix<scalar>(db, da)};
    }

    const CoalgebraMorphism<F>& morphism() const { return f_; }
    const F& field() const { return f_.field(); }
    std::size_t order() const { return coeffs_.size() - 1; }

    const cochain_type& coefficient(std::size_t n) const { return coeffs_.at(n); }
    const std::vector<cochain_type>& coefficients() const { return coeffs_; }

    const Matrix<scalar>& delta_a(std::size_t n) const { return coeffs_.at(n).xi; }
    const Matrix<scalar>& delta_b(std::size_t n) const { return coeffs_.at(n).pi; }
    const Matrix<scalar>& map(std::size_t n) const { return coeffs_.at(n).phi; }

    /// Omega_t + w t^{N+1}, without any validity check.
    TruncatedDeformation appended(cochain_type w) const
    {
        check_slot(w);
        TruncatedDeformation d = *this;
        d.coeffs_.push_back(std::move(w));
        return d;
    }

    /// Omega_t mod t^{m+1}.
    TruncatedDeformation truncated(std::size_t m) const
    {
        if (m > order())
            throw std::invalid_argument("cannot truncate an order-" + std::to_string(order()) + " deformation to order " +
                                        std::to_string(m));
        TruncatedDeformation d = *this;
        d.coeffs_.resize(m + 1);
        return d;
    }

    friend bool operator==(const TruncatedDeformation&, const TruncatedDeformation&) = default;

private:
    void check_slot(const cochain_type& w) const
    {
        auto z = zero_coefficient(f_);
        if (w.degree != 2 || !w.xi.same_shape(z.xi) || !w.pi.same_shape(z.pi) || !w.phi.same_shape(z.phi))
            throw std::invalid_argument("deformation coefficient is not a 2-cochain of the deformation complex (shapes " +
                                        w.xi.shape() + ", " + w.pi.shape() + ", " + w.phi.shape() + ")");
    }

    CoalgebraMorphism<F> f_;
    std::vector<cochain_type> coeffs_;
};

/// Phi_t = sum phi_n t^n with phi_n = (phi_{A,n}; phi_{B,n}) degree-1 cochains.
template <Field F>
class FormalIsomorphism {
public:
    using scalar = scalar_t<F>;
    using cochain_type = MorphismCochain<scalar>;

    FormalIsomorphism() = default;

    /// `coeffs` holds phi_0..phi_N.
    FormalIsomorphism(CoalgebraMorphism<F> f, std::vector<cochain_type> coeffs)
        : f_(std::move(f)), coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty())
            throw std::invalid_argument("formal isomorphism needs at least phi_0");
        const std::size_t da = f_.source().dim(), db = f_.target().dim();
        for (const auto& c : coeffs_)
            if (c.degree != 1 || c.xi.rows() != da || c.xi.cols() != da || c.pi.rows() != db || c.pi.cols() != db)
                throw std::invalid_argument("formal isomorphism coefficient is not a 1-cochain of the deformation complex");
    }

    static cochain_type make_coefficient(const CoalgebraMorphism<F>& f, Matrix<scalar> a, Matrix<scalar> b)
    {
        return {1, std::move(a), std::move(b), Matrix<scalar>(1, f.source().dim())};
    }

    static FormalIsomorphism identity(const CoalgebraMorphism<F>& f, std::size_t order)
    {
        const std::size_t da = f.source().dim(), db = f.target().dim();
        std::vector<cochain_type> c{make_coefficient(f, f.source().id(), f.target().id())};
        for (std::size_t n = 1; n <= order; ++n)
            c.push_back(make_coefficient(f, Matrix<scalar>(da, da), Matrix<scalar>(db, db)));
        return FormalIsomorphism(f, std::move(c));
    }

    const CoalgebraMorphism<F>& morphism() const { return f_; }
    std::size_t order() const { return coeffs_.size() - 1; }
    const cochain_type& coefficient(std::size_t n) const { return coeffs_.at(n); }
    const std::vector<cochain_type>& coefficients() const { return coeffs_; }
    const Matrix<scalar>& a(std::size_t n) const { return coeffs_.at(n).xi; }
    const Matrix<scalar>& b(std::size_t n) const { return coeffs_.at(n).pi; }

    bool starts_at_identity() const { return a(0) == f_.source().id() && b(0) == f_.target().id(); }

    friend bool operator==(const FormalIsomorphism&, const FormalIsomorphism&) = default;

private:
    CoalgebraMorphism<F> f_;
    std::vector<cochain_type> coeffs_;
};

template <class S>
struct ObstructionClass {
    MorphismCochain<S> cochain;  // Ob = (Ob_A; Ob_B; Ob_F), degree 3
    Vector<S> h3_class;          // coordinates in H^3(f); empty when Ob bounds

    bool cobounding() const { return h3_class.empty(); }
};

template <class S>
struct Infinitesimal {
    std::optional<MorphismCochain<S>> cochain; // absent: trivial to this order
    bool is_cocycle = false;
    std::size_t generalized_order = 0;
};

/// A supplied omega_{N+1} whose coboundary differs from Ob.
struct ExtensionRejected {
    Defect difference;
};

template <Field F>
using ExtendResult = std::variant<TruncatedDeformation<F>, ObstructionClass<scalar_t<F>>, ExtensionRejected>;

template <Field F>
struct IntegrationResult {
    TruncatedDeformation<F> deformation;                  // valid, possibly short of the target
    std::optional<ObstructionClass<scalar_t<F>>> obstruction; // set when integration stopped early

    bool complete() const { return !obstruction.has_value(); }
};

template <class S>
struct TrivializationFailure {
    std::size_t order = 0;           // the surviving leading coefficient
    MorphismCochain<S> cocycle;      // omega_order after the earlier orders were removed
    Vector<S> h2_class;              // its coordinates in H^2(f)
};

template <Field F>
using TrivializeResult = std::variant<FormalIsomorphism<F>, TrivializationFailure<scalar_t<F>>>;

// ---------------------------------------------------------------------------

/// s bar-comp t = (s (x) Id) t - (Id (x) s) t for 2-cochains on X.
template <class S>
Matrix<S> comp_bar(const Matrix<S>& s, const Matrix<S>& t, const S& one)
{
    const std::size_t d = t.cols();
    if (s.rows() != d * d || s.cols() != d || t.rows() != d * d)
        throw std::invalid_argument("comp_bar: expected two d^2 x d cochains, got " + s.shape() + " and " + t.shape());
    auto id = Matrix<S>::identity(d, one);
    return kron(s, id) * t - kron(id, s) * t;
}

template <Field F>
Cochain<scalar_t<F>> comp_bar(const Coalgebra<F>& x, const Cochain<scalar_t<F>>& s, const Cochain<scalar_t<F>>& t)
{
    if (s.degree != 2 || t.degree != 2 || t.map.cols() != x.dim())
        throw std::invalid_argument("comp_bar: expects 2-cochains on " + x.name());
    return {3, comp_bar(s.map, t.map, x.field().one())};
}

namespace detail {

// sum_{i+j+k=n, constraint} (f_j (x) f_k) Delta_{A,i}
template <Field F, class Pred>
Matrix<scalar_t<F>> coproduct_of_maps(const TruncatedDeformation<F>& d, std::size_t n, Pred keep)
{
    const std::size_t da = d.morphism().source().dim(), db = d.morphism().target().dim();
    Matrix<scalar_t<F>> acc(db * db, da);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; i + j <= n; ++j) {
            std::size_t k = n - i - j;
            if (!keep(i, j, k))
                continue;
            if (d.map(j).is_zero() || d.map(k).is_zero() || d.delta_a(i).is_zero())
                continue;
            acc += kron(d.map(j), d.map(k)) * d.delta_a(i);
        }
    return acc;
}

} // namespace detail

/// First nonzero entry of a morphism cochain, components tagged A, B, F.
template <Field F>
CheckReport first_difference(const F& field, const MorphismCochain<scalar_t<F>>& w, const std::string& what,
                             std::size_t order = 0)
{
    if (auto r = expect_zero(field, w.xi, what + " (A component)", order); !r)
        return r;
    if (auto r = expect_zero(field, w.pi, what + " (B component)", order); !r)
        return r;
    return expect_zero(field, w.phi, what + " (F component)", order);
}

/// Checks every coefficient of t^n, n <= N: coassociativity of Delta_{A,t}
/// and Delta_{B,t}, and sum_{i+j+k=n} (f_j (x) f_k) Delta_{A,i} =
/// sum_i Delta_{B,i} f_{n-i}.
template <Field F>
CheckReport verify_deformation(const TruncatedDeformation<F>& d)
{
    const auto& field = d.field();
    const auto one = field.one();
    const auto& f = d.morphism();
    const std::size_t da = f.source().dim(), db = f.target().dim();
    for (std::size_t n = 0; n <= d.order(); ++n) {
        Matrix<scalar_t<F>> coassoc_a(da * da * da, da), coassoc_b(db * db * db, db);
        for (std::size_t i = 0; i <= n; ++i) {
            coassoc_a += comp_bar(d.delta_a(i), d.delta_a(n - i), one);
            coassoc_b += comp_bar(d.delta_b(i), d.delta_b(n - i), one);
        }
        if (auto r = expect_zero(field, coassoc_a, "coassociativity of Delta_A,t", n); !r)
            return r;
        if (auto r = expect_zero(field, coassoc_b, "coassociativity of Delta_B,t", n); !r)
            return r;
        auto star = detail::coproduct_of_maps(d, n, [](auto, auto, auto) { return true; });
        for (std::size_t i = 0; i <= n; ++i)
            star -= d.delta_b(i) * d.map(n - i);
        if (auto r = expect_zero(field, star, "comultiplicativity of F_t", n); !r)
            return r;
    }
    return {};
}

namespace detail {

template <Field F>
void require_valid(const TruncatedDeformation<F>& d, const char* what)
{
    if (auto r = check_coassociative(d.morphism().source()); !r)
        throw std::invalid_argument(std::string(what) + ": " + r.defect->describe());
    if (auto r = check_coassociative(d.morphism().target()); !r)
        throw std::invalid_argument(std::string(what) + ": " + r.defect->describe());
    if (auto r = verify_deformation(d); !r)
        throw std::invalid_argument(std::string(what) + ": not a deformation (" + r.defect->describe() + ")");
}

} // namespace detail

/// The leading nonzero coefficient omega_l, l >= 1, with its cocycle check.
template <Field F>
Infinitesimal<scalar_t<F>> infinitesimal(const TruncatedDeformation<F>& d)
{
    detail::require_valid(d, "infinitesimal");
    for (std::size_t l = 1; l <= d.order(); ++l) {
        const auto& w = d.coefficient(l);
        if (w.is_zero())
            continue;
        MorphismComplex<F> complex(d.morphism());
        return {w, is_cocycle(complex, w), l};
    }
    return {};
}

/// The cochain Ob = (Ob_A; Ob_B; Ob_F) in C^3(f) of an order-N deformation:
///
///   Ob_X = sum_{i=1}^N Delta_{X,i} bar-comp Delta_{X,N+1-i},
///   Ob_F = sum' (f_j (x) f_k) Delta_{A,i} - sum_{i=1}^N Delta_{B,N+1-i} f_i,
///
/// sum' over i+j+k = N+1 with 0 <= i,j,k <= N.
template <Field F>
MorphismCochain<scalar_t<F>> obstruction_cochain(const TruncatedDeformation<F>& d)
{
    const std::size_t n = d.order();
    const auto one = d.field().one();
    const std::size_t da = d.morphism().source().dim(), db = d.morphism().target().dim();
    Matrix<scalar_t<F>> ob_a(da * da * da, da), ob_b(db * db * db, db);
    for (std::size_t i = 1; i <= n; ++i) {
        ob_a += comp_bar(d.delta_a(i), d.delta_a(n + 1 - i), one);
        ob_b += comp_bar(d.delta_b(i), d.delta_b(n + 1 - i), one);
    }
    auto ob_f = detail::coproduct_of_maps(d, n + 1, [n](std::size_t i, std::size_t j, std::size_t k) {
        return i <= n && j <= n && k <= n;
    });
    for (std::size_t i = 1; i <= n; ++i)
        ob_f -= d.delta_b(n + 1 - i) * d.map(i);
    return {3, std::move(ob_a), std::move(ob_b), std::move(ob_f)};
}

template <Field F>
ObstructionClass<scalar_t<F>> obstruction(const TruncatedDeformation<F>& d, const MorphismComplex<F>& complex)
{
    detail::require_valid(d, "obstruction");
    auto ob = obstruction_cochain(d);
    if (!is_cocycle(complex, ob))
        throw std::logic_error("obstruction cochain is not a 3-cocycle");
    ObstructionClass<scalar_t<F>> result{ob, {}};
    if (!is_coboundary(complex, ob))
        result.h3_class = class_coordinates(complex, ob);
    return result;
}

template <Field F>
ObstructionClass<scalar_t<F>> obstruction(const TruncatedDeformation<F>& d)
{
    return obstruction(d, MorphismComplex<F>(d.morphism()));
}

/// Extends to order N+1. With w given, accepts iff d_c(w) = Ob; without,
/// solves d_c(w) = Ob canonically or reports the obstruction.
template <Field F>
ExtendResult<F> extend(const TruncatedDeformation<F>& d, const std::optional<MorphismCochain<scalar_t<F>>>& w,
                       const MorphismComplex<F>& complex)
{
    detail::require_valid(d, "extend");
    auto ob = obstruction_cochain(d);
    if (w) {
        complex.check_shape(*w);
        if (w->degree != 2)
            throw std::invalid_argument("extend: the next coefficient must be a 2-cochain");
        if (auto r = first_difference(d.field(), complex.apply(*w) - ob, "d_c(w) - Ob", d.order() + 1); !r)
            return ExtensionRejected{*r.defect};
        return d.appended(*w);
    }
    auto x = solve(complex.differential_matrix(2), complex.flatten(ob));
    if (!x) {
        if (!is_cocycle(complex, ob))
            throw std::logic_error("obstruction cochain is not a 3-cocycle");
        return ObstructionClass<scalar_t<F>>{ob, class_coordinates(complex, ob)};
    }
    return d.appended(complex.unflatten(2, *x));
}

template <Field F>
ExtendResult<F> extend(const TruncatedDeformation<F>& d,
                       const std::optional<MorphismCochain<scalar_t<F>>>& w = std::nullopt)
{
    return extend(d, w, MorphismComplex<F>(d.morphism()));
}

/// Integrates the 2-cocycle w: starts from omega_0 + w t and extends with
/// canonical solutions until target_order or a nonvanishing obstruction.
template <Field F>
IntegrationResult<F> integrate(const CoalgebraMorphism<F>& f, const MorphismCochain<scalar_t<F>>& w,
                               std::size_t target_order)
{
    MorphismComplex<F> complex(f);
    complex.check_shape(w);
    if (w.degree != 2)
        throw std::invalid_argument("integrate: expected a 2-cochain");
    if (auto r = first_difference(f.field(), complex.apply(w), "d_c(w)"); !r)
        throw std::invalid_argument("not an infinitesimal candidate: " + r.defect->describe());
    if (target_order == 0)
        return {TruncatedDeformation<F>::trivial(f, 0), std::nullopt};

    TruncatedDeformation<F> d(f, {w});
    while (d.order() < target_order) {
        auto step = extend(d, std::nullopt, complex);
        if (auto* ob = std::get_if<ObstructionClass<scalar_t<F>>>(&step))
            return {std::move(d), std::move(*ob)};
        d = std::get<TruncatedDeformation<F>>(std::move(step));
    }
    return {std::move(d), std::nullopt};
}

namespace detail {

template <class S>
std::vector<Matrix<S>> series_inverse(const std::vector<Matrix<S>>& phi)
{
    std::vector<Matrix<S>> psi{phi[0]};
    for (std::size_t n = 1; n < phi.size(); ++n) {
        Matrix<S> acc(phi[0].rows(), phi[0].cols());
        for (std::size_t k = 1; k <= n; ++k)
            acc -= phi[k] * psi[n - k];
        psi.push_back(std::move(acc));
    }
    return psi;
}

template <class S>
std::vector<Matrix<S>> series_product(const std::vector<Matrix<S>>& a, const std::vector<Matrix<S>>& b,
                                      std::size_t order)
{
    std::vector<Matrix<S>> out;
    for (std::size_t n = 0; n <= order; ++n) {
        Matrix<S> acc(a[0].rows(), b[0].cols());
        for (std::size_t i = 0; i <= n; ++i)
            if (!a[i].is_zero() && !b[n - i].is_zero())
                acc += a[i] * b[n - i];
        out.push_back(std::move(acc));
    }
    return out;
}

template <class S>
std::vector<Matrix<S>> series_kron_square(const std::vector<Matrix<S>>& a, std::size_t order)
{
    std::vector<Matrix<S>> out;
    for (std::size_t n = 0; n <= order; ++n) {
        Matrix<S> acc(a[0].rows() * a[0].rows(), a[0].cols() * a[0].cols());
        for (std::size_t i = 0; i <= n; ++i)
            if (!a[i].is_zero() && !a[n - i].is_zero())
                acc += kron(a[i], a[n - i]);
        out.push_back(std::move(acc));
    }
    return out;
}

template <Field F>
std::vector<Matrix<scalar_t<F>>> component(const FormalIsomorphism<F>& p, bool source)
{
    std::vector<Matrix<scalar_t<F>>> out;
    for (std::size_t n = 0; n <= p.order(); ++n)
        out.push_back(source ? p.a(n) : p.b(n));
    return out;
}

} // namespace detail

/// Truncated inverse: psi_0 = Id, psi_n = -sum_{k=1}^n phi_k psi_{n-k}.
template <Field F>
FormalIsomorphism<F> invert_formal(const FormalIsomorphism<F>& p)
{
    if (!p.starts_at_identity())
        throw std::invalid_argument("invert_formal: phi_0 is not the identity");
    auto a = detail::series_inverse(detail::component(p, true));
    auto b = detail::series_inverse(detail::component(p, false));
    std::vector<MorphismCochain<scalar_t<F>>> c;
    for (std::size_t n = 0; n <= p.order(); ++n)
        c.push_back(FormalIsomorphism<F>::make_coefficient(p.morphism(), a[n], b[n]));
    return FormalIsomorphism<F>(p.morphism(), std::move(c));
}

/// outer o inner, truncated at the common order.
template <Field F>
FormalIsomorphism<F> compose_formal(const FormalIsomorphism<F>& outer, const FormalIsomorphism<F>& inner)
{
    if (outer.order() != inner.order())
        throw std::invalid_argument("compose_formal: orders differ");
    const std::size_t n = outer.order();
    auto a = detail::series_product(detail::component(outer, true), detail::component(inner, true), n);
    auto b = detail::series_product(detail::component(outer, false), detail::component(inner, false), n);
    std::vector<MorphismCochain<scalar_t<F>>> c;
    for (std::size_t k = 0; k <= n; ++k)
        c.push_back(FormalIsomorphism<F>::make_coefficient(outer.morphism(), a[k], b[k]));
    return FormalIsomorphism<F>(outer.morphism(), std::move(c));
}

/// The deformation transported along Phi_t, truncated at order N.
template <Field F>
TruncatedDeformation<F> apply_equivalence(const FormalIsomorphism<F>& p, const TruncatedDeformation<F>& d)
{
    using S = scalar_t<F>;
    if (p.order() != d.order())
        throw std::invalid_argument("apply_equivalence: isomorphism has order " + std::to_string(p.order()) +
                                    ", deformation has order " + std::to_string(d.order()));
    if (!p.starts_at_identity())
        throw std::invalid_argument("apply_equivalence: phi_0 is not the identity");
    const std::size_t n = d.order();
    auto phi_a = detail::component(p, true), phi_b = detail::component(p, false);
    auto psi_a = detail::series_inverse(phi_a), psi_b = detail::series_inverse(phi_b);

    std::vector<Matrix<S>> da, db, fs;
    for (std::size_t k = 0; k <= n; ++k) {
        da.push_back(d.delta_a(k));
        db.push_back(d.delta_b(k));
        fs.push_back(d.map(k));
    }
    auto new_a = detail::series_product(detail::series_kron_square(phi_a, n), detail::series_product(da, psi_a, n), n);
    auto new_b = detail::series_product(detail::series_kron_square(phi_b, n), detail::series_product(db, psi_b, n), n);
    auto new_f = detail::series_product(phi_b, detail::series_product(fs, psi_a, n), n);

    std::vector<MorphismCochain<S>> higher;
    for (std::size_t k = 1; k <= n; ++k)
        higher.push_back({2, new_a[k], new_b[k], new_f[k]});
    return TruncatedDeformation<F>(d.morphism(), std::move(higher));
}

/// Removes the coefficients of a deformation one order at a time: when the
/// leading omega_l equals d_c(chi), the isomorphism Id - chi t^l kills it.
/// Returns the composite isomorphism, or the first leading coefficient that
/// is a cocycle but not a coboundary.
template <Field F>
TrivializeResult<F> trivialize(const TruncatedDeformation<F>& d)
{
    using S = scalar_t<F>;
    detail::require_valid(d, "trivialize");
    const auto& f = d.morphism();
    const std::size_t n = d.order();
    MorphismComplex<F> complex(f);
    auto total = FormalIsomorphism<F>::identity(f, n);
    auto current = d;
    for (std::size_t l = 1; l <= n; ++l) {
        const auto& w = current.coefficient(l);
        if (w.is_zero())
            continue;
        if (!is_cocycle(complex, w))
            throw std::logic_error("trivialize: leading coefficient is not a 2-cocycle");
        auto chi = is_coboundary(complex, w);
        if (!chi)
            return TrivializationFailure<S>{l, w, class_coordinates(complex, w)};

        auto step = FormalIsomorphism<F>::identity(f, n).coefficients();
        step[l] = FormalIsomorphism<F>::make_coefficient(f, -chi->xi, -chi->pi);
        FormalIsomorphism<F> q(f, std::move(step));
        current = apply_equivalence(q, current);
        if (!current.coefficient(l).is_zero())
            throw std::logic_error("trivialize: order " + std::to_string(l) + " survived its coboundary");
        total = compose_formal(q, total);
    }
    return total;
}

} // namespace coalgdef

#endif
