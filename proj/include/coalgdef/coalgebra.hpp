#ifndef COALGDEF_COALGEBRA_HPP
#define COALGDEF_COALGEBRA_HPP

// Finite-dimensional coalgebras, coalgebra morphisms and bicomodules given by
// structure constants. Constructors only check shapes; the structural
// identities are checked by the explicit check_* functions so a caller can be
// told where an input fails.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "matrix.hpp"
#include "tensor.hpp"

namespace coalgdef {

/// Location of the first nonzero entry of an identity that should vanish.
struct Defect {
    std::string equation;
    std::size_t order = 0; // coefficient of t^order; 0 for undeformed checks
    std::size_t row = 0;
    std::size_t col = 0;
    std::string value;

    std::string describe() const
    {
        std::string s = equation;
        if (order > 0)
            s += " at order " + std::to_string(order);
        s += ": entry (" + std::to_string(row) + "," + std::to_string(col) + ") = " + value;
        return s;
    }
};

struct CheckReport {
    std::optional<Defect> defect;

    bool ok() const { return !defect.has_value(); }
    explicit operator bool() const { return ok(); }
};

template <Field F>
CheckReport expect_zero(const F& field, const Matrix<scalar_t<F>>& m, std::string equation, std::size_t order = 0)
{
    auto nz = m.first_nonzero();
    if (!nz)
        return {};
    return {Defect{std::move(equation), order, nz->first, nz->second, field.format(m(nz->first, nz->second))}};
}

template <Field F>
class Coalgebra {
public:
    using scalar = scalar_t<F>;

    Coalgebra() = default;

    /// delta is the (dim^2 x dim) matrix of the comultiplication.
    Coalgebra(F field, std::string name, Matrix<scalar> delta)
        : field_(std::move(field)), name_(std::move(name)), delta_(std::move(delta))
    {
        if (delta_.rows() != delta_.cols() * delta_.cols())
            throw std::invalid_argument("coalgebra '" + name_ + "': comultiplication must be d^2 x d, got " +
                                        delta_.shape());
    }

    const F& field() const { return field_; }
    const std::string& name() const { return name_; }
    std::size_t dim() const { return delta_.cols(); }
    const Matrix<scalar>& delta() const { return delta_; }

    Matrix<scalar> id() const { return Matrix<scalar>::identity(dim(), field_.one()); }

    friend bool operator==(const Coalgebra& a, const Coalgebra& b)
    {
        return a.field_ == b.field_ && a.name_ == b.name_ && a.delta_ == b.delta_;
    }

private:
    F field_;
    std::string name_;
    Matrix<scalar> delta_;
};

template <Field F>
class CoalgebraMorphism {
public:
    using scalar = scalar_t<F>;

    CoalgebraMorphism() = default;

    CoalgebraMorphism(Coalgebra<F> source, Coalgebra<F> target, Matrix<scalar> map)
        : source_(std::move(source)), target_(std::move(target)), map_(std::move(map))
    {
        if (map_.rows() != target_.dim() || map_.cols() != source_.dim())
            throw std::invalid_argument("morphism " + source_.name() + " -> " + target_.name() + ": matrix is " +
                                        map_.shape() + ", expected " + std::to_string(target_.dim()) + "x" +
                                        std::to_string(source_.dim()));
    }

    const Coalgebra<F>& source() const { return source_; }
    const Coalgebra<F>& target() const { return target_; }
    const Matrix<scalar>& map() const { return map_; }
    const F& field() const { return source_.field(); }

    friend bool operator==(const CoalgebraMorphism&, const CoalgebraMorphism&) = default;

private:
    Coalgebra<F> source_;
    Coalgebra<F> target_;
    Matrix<scalar> map_;
};

/// An A-bicomodule M: psi_l : M -> A (x) M and psi_r : M -> M (x) A.
template <Field F>
class Bicomodule {
public:
    using scalar = scalar_t<F>;

    Bicomodule() = default;

    Bicomodule(Coalgebra<F> over, std::size_t dim, Matrix<scalar> psi_l, Matrix<scalar> psi_r)
        : over_(std::move(over)), dim_(dim), psi_l_(std::move(psi_l)), psi_r_(std::move(psi_r))
    {
        std::size_t rows = over_.dim() * dim_;
        if (psi_l_.rows() != rows || psi_l_.cols() != dim_ || psi_r_.rows() != rows || psi_r_.cols() != dim_)
            throw std::invalid_argument("bicomodule over '" + over_.name() + "': coaction shapes " + psi_l_.shape() +
                                        ", " + psi_r_.shape() + " do not match dim " + std::to_string(dim_));
    }

    const Coalgebra<F>& over() const { return over_; }
    std::size_t dim() const { return dim_; }
    const Matrix<scalar>& psi_l() const { return psi_l_; }
    const Matrix<scalar>& psi_r() const { return psi_r_; }
    const F& field() const { return over_.field(); }

    friend bool operator==(const Bicomodule&, const Bicomodule&) = default;

private:
    Coalgebra<F> over_;
    std::size_t dim_ = 0;
    Matrix<scalar> psi_l_;
    Matrix<scalar> psi_r_;
};

template <Field F>
CheckReport check_coassociative(const Coalgebra<F>& a)
{
    const auto one = a.field().one();
    const auto& delta = a.delta();
    if (a.dim() == 0)
        return {};
    auto lhs = middle_insertion(delta, 2, 2, one) * delta; // (Id (x) D) D
    auto rhs = middle_insertion(delta, 2, 1, one) * delta; // (D (x) Id) D
    return expect_zero(a.field(), lhs - rhs, "coassociativity of " + a.name());
}

template <Field F>
CheckReport check_morphism(const CoalgebraMorphism<F>& f)
{
    const auto& m = f.map();
    auto lhs = f.target().delta() * m;
    auto rhs = kron(m, m) * f.source().delta();
    return expect_zero(f.field(), lhs - rhs,
                       "comultiplication compatibility of " + f.source().name() + " -> " + f.target().name());
}

template <Field F>
CheckReport check_bicomodule(const Bicomodule<F>& m)
{
    const auto one = m.field().one();
    const auto id_a = m.over().id();
    const auto id_m = Matrix<scalar_t<F>>::identity(m.dim(), one);
    const auto& l = m.psi_l();
    const auto& r = m.psi_r();
    const auto& delta = m.over().delta();

    if (auto rep = expect_zero(m.field(), kron(id_a, l) * l - kron(delta, id_m) * l, "left coassociativity"); !rep)
        return rep;
    if (auto rep = expect_zero(m.field(), kron(r, id_a) * r - kron(id_m, delta) * r, "right coassociativity"); !rep)
        return rep;
    return expect_zero(m.field(), kron(id_a, r) * l - kron(l, id_a) * r, "left/right compatibility");
}

/// A as a B-bicomodule through f : A -> B.
template <Field F>
Bicomodule<F> bicomodule_via(const CoalgebraMorphism<F>& f)
{
    if (auto rep = check_morphism(f); !rep)
        throw std::invalid_argument("bicomodule_via: not a coalgebra morphism (" + rep.defect->describe() + ")");
    const auto& a = f.source();
    auto id_a = a.id();
    auto psi_l = kron(f.map(), id_a) * a.delta();
    auto psi_r = kron(id_a, f.map()) * a.delta();
    return Bicomodule<F>(f.target(), a.dim(), std::move(psi_l), std::move(psi_r));
}

template <Field F>
Bicomodule<F> regular_bicomodule(const Coalgebra<F>& a)
{
    return Bicomodule<F>(a, a.dim(), a.delta(), a.delta());
}

} // namespace coalgdef

#endif
