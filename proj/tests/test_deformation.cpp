#include <gtest/gtest.h>

#include "coalgdef/deformation.hpp"
#include "coalgdef/fixtures.hpp"
#include "support.hpp"

using namespace coalgdef;
using namespace coalgdef::testing;

namespace {

using QF = RationalField;
using QDef = TruncatedDeformation<QF>;
using QIso = FormalIsomorphism<QF>;
using QMCochain = MorphismCochain<Q>;

// Structure-constant evaluation of the deformation equations, written
// directly on basis elements rather than through Kronecker products.
// Returns the first order at which something fails.
template <Field F>
std::optional<std::size_t> oracle_first_failure(const TruncatedDeformation<F>& d)
{
    using S = scalar_t<F>;
    const std::size_t da = d.morphism().source().dim(), db = d.morphism().target().dim();
    auto coassoc_fails = [](const std::vector<Matrix<S>>& delta, std::size_t dim, std::size_t m) {
        for (std::size_t a = 0; a < dim; ++a) {
            std::vector<S> diff(dim * dim * dim);
            for (std::size_t i = 0; i <= m; ++i) {
                const auto& di = delta[i];
                const auto& dj = delta[m - i];
                for (std::size_t p = 0; p < dim; ++p)
                    for (std::size_t q = 0; q < dim; ++q) {
                        const S& c = dj(p * dim + q, a);
                        if (is_zero(c))
                            continue;
                        for (std::size_t x = 0; x < dim; ++x)
                            for (std::size_t y = 0; y < dim; ++y) {
                                diff[(x * dim + y) * dim + q] += c * di(x * dim + y, p);
                                diff[(p * dim + x) * dim + y] -= c * di(x * dim + y, q);
                            }
                    }
            }
            for (const auto& v : diff)
                if (!is_zero(v))
                    return true;
        }
        return false;
    };
    std::vector<Matrix<S>> dA, dB, fs;
    for (std::size_t n = 0; n <= d.order(); ++n) {
        dA.push_back(d.delta_a(n));
        dB.push_back(d.delta_b(n));
        fs.push_back(d.map(n));
    }
    for (std::size_t m = 0; m <= d.order(); ++m) {
        if (coassoc_fails(dA, da, m) || coassoc_fails(dB, db, m))
            return m;
        for (std::size_t a = 0; a < da; ++a)
            for (std::size_t b = 0; b < db; ++b)
                for (std::size_t c = 0; c < db; ++c) {
                    S lhs{}, rhs{};
                    for (std::size_t i = 0; i <= m; ++i)
                        for (std::size_t j = 0; i + j <= m; ++j) {
                            std::size_t k = m - i - j;
                            for (std::size_t p = 0; p < da; ++p)
                                for (std::size_t q = 0; q < da; ++q)
                                    lhs += dA[i](p * da + q, a) * fs[j](b, p) * fs[k](c, q);
                        }
                    for (std::size_t i = 0; i <= m; ++i)
                        for (std::size_t p = 0; p < db; ++p)
                            rhs += dB[i](b * db + c, p) * fs[m - i](p, a);
                    if (lhs != rhs)
                        return m;
                }
    }
    return std::nullopt;
}

// t -> t^s.
QDef stretch(const QDef& d, std::size_t s)
{
    std::vector<QMCochain> higher;
    for (std::size_t m = 1; m <= s * d.order(); ++m)
        higher.push_back(m % s == 0 ? d.coefficient(m / s) : QDef::zero_coefficient(d.morphism()));
    return QDef(d.morphism(), std::move(higher));
}

QIso random_isomorphism(const CoalgebraMorphism<QF>& f, std::size_t order, Sampler<QF>& rnd)
{
    std::vector<QMCochain> c{QIso::make_coefficient(f, f.source().id(), f.target().id())};
    for (std::size_t n = 1; n <= order; ++n)
        c.push_back(QIso::make_coefficient(f, rnd.matrix(f.source().dim(), f.source().dim(), 0.4),
                                           rnd.matrix(f.target().dim(), f.target().dim(), 0.4)));
    return QIso(f, std::move(c));
}

QMCochain random_cocycle(const MorphismComplex<QF>& c, Sampler<QF>& rnd)
{
    auto ker = kernel_basis(c.differential_matrix(2));
    Vector<Q> v(c.cochain_dim(2));
    for (const auto& b : ker.basis()) {
        Q k = rnd.scalar(0.3);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += k * b[i];
    }
    return c.unflatten(2, v);
}

std::vector<CoalgebraMorphism<QF>> fixture_morphisms()
{
    return {identity_morphism(grouplike(QQ, 1)),
            identity_morphism(divided_power(QQ, 2)),
            collapse_morphism(QQ, 2),
            standard_inclusion(divided_power(QQ, 1), divided_power(QQ, 2)),
            standard_inclusion(grouplike(QQ, 1), grouplike(QQ, 2)),
            identity_morphism(null_coalgebra(QQ, 1))};
}

Matrix<Q> e1_squared()
{
    Matrix<Q> s(4, 2);
    s(3, 1) = 1;
    return s;
}

} // namespace

TEST(VerifyDeformation, TrivialDeformationsAreValid)
{
    for (const auto& f : fixture_morphisms())
        for (std::size_t n = 0; n <= 3; ++n)
            EXPECT_TRUE(verify_deformation(QDef::trivial(f, n))) << f.source().name() << " N=" << n;
}

TEST(VerifyDeformation, DividedPowerFixture)
{
    auto d = divided_power_deformation(QQ, 2);
    EXPECT_TRUE(verify_deformation(d));
    EXPECT_EQ(d.delta_a(1), e1_squared());
    EXPECT_TRUE(d.coefficient(2).is_zero());
}

TEST(VerifyDeformation, MissingTargetTermFailsAtOrderOne)
{
    auto good = divided_power_deformation(QQ, 2);
    auto w = good.coefficient(1);
    w.pi = Matrix<Q>(4, 2);
    QDef bad(good.morphism(), {w, good.coefficient(2)});
    auto r = verify_deformation(bad);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.defect->order, 1u);
    EXPECT_EQ(r.defect->equation, "comultiplicativity of F_t");
    // LHS e_1 -> e_1 (x) e_1, RHS 0
    EXPECT_EQ(r.defect->row, 3u);
    EXPECT_EQ(r.defect->col, 1u);
    EXPECT_EQ(r.defect->value, "1");
}

TEST(VerifyDeformation, MalformedShapesAreRejected)
{
    auto f = identity_morphism(divided_power(QQ, 2));
    QMCochain w{2, Matrix<Q>(4, 2), Matrix<Q>(3, 2), Matrix<Q>(2, 2)};
    EXPECT_THROW(QDef(f, {w}), std::invalid_argument);
    QMCochain wrong_degree{3, Matrix<Q>(8, 2), Matrix<Q>(8, 2), Matrix<Q>(4, 2)};
    EXPECT_THROW(QDef(f, {wrong_degree}), std::invalid_argument);
}

TEST(VerifyDeformation, AgreesWithStructureConstantOracle)
{
    Sampler<QF> rnd(QQ, 101);
    int invalid_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto fs = fixture_morphisms();
        const auto& f = fs[rnd.index(fs.size())];
        MorphismComplex<QF> c(f);
        auto d = integrate(f, random_cocycle(c, rnd), 1 + rnd.index(3)).deformation;
        if (rnd.coin()) {
            // perturb one entry of one coefficient
            std::size_t n = 1 + rnd.index(d.order());
            auto coeffs = d.coefficients();
            std::vector<QMCochain> higher(coeffs.begin() + 1, coeffs.end());
            auto& w = higher[n - 1];
            Matrix<Q>& slot = rnd.index(3) == 0 ? w.xi : (rnd.coin() ? w.pi : w.phi);
            slot(rnd.index(slot.rows()), rnd.index(slot.cols())) += Q(1 + static_cast<int>(rnd.index(3)));
            d = QDef(f, std::move(higher));
        }
        auto expected = oracle_first_failure(d);
        auto r = verify_deformation(d);
        ASSERT_EQ(r.ok(), !expected.has_value()) << trial;
        if (expected) {
            EXPECT_EQ(r.defect->order, *expected);
            ++invalid_seen;
        }
    }
    EXPECT_GT(invalid_seen, 5);
}

TEST(Infinitesimal, DividedPowerFixture)
{
    auto inf = infinitesimal(divided_power_deformation(QQ, 2));
    ASSERT_TRUE(inf.cochain.has_value());
    EXPECT_EQ(inf.cochain->xi, e1_squared());
    EXPECT_EQ(inf.cochain->pi, e1_squared());
    EXPECT_TRUE(inf.cochain->phi.is_zero());
    EXPECT_TRUE(inf.is_cocycle);
    EXPECT_EQ(inf.generalized_order, 1u);
    // the cocycle property, component by component
    auto dw = d_c(identity_morphism(divided_power(QQ, 2)), *inf.cochain);
    EXPECT_TRUE(dw.xi.is_zero());
    EXPECT_TRUE(dw.pi.is_zero());
    EXPECT_TRUE(dw.phi.is_zero());
}

TEST(Infinitesimal, TrivialToThisOrder)
{
    auto inf = infinitesimal(QDef::trivial(identity_morphism(divided_power(QQ, 2)), 3));
    EXPECT_FALSE(inf.cochain.has_value());
    EXPECT_FALSE(infinitesimal(QDef::trivial(collapse_morphism(QQ, 2), 0)).cochain.has_value());
}

TEST(Infinitesimal, ShiftedFixtureHasGeneralizedOrderTwo)
{
    auto shifted = stretch(divided_power_deformation(QQ, 2), 2);
    ASSERT_TRUE(verify_deformation(shifted));
    auto inf = infinitesimal(shifted);
    ASSERT_TRUE(inf.cochain.has_value());
    EXPECT_EQ(inf.generalized_order, 2u);
    EXPECT_TRUE(inf.is_cocycle);
    EXPECT_EQ(inf.cochain->xi, e1_squared());
}

TEST(Infinitesimal, RejectsInvalidInput)
{
    auto good = divided_power_deformation(QQ, 1);
    auto w = good.coefficient(1);
    w.pi = Matrix<Q>(4, 2);
    EXPECT_THROW(infinitesimal(QDef(good.morphism(), {w})), std::invalid_argument);
}

TEST(CompBar, HandExamples)
{
    auto dp2 = divided_power(QQ, 2);
    const Q one(1);
    EXPECT_TRUE(comp_bar(dp2.delta(), dp2.delta(), one).is_zero());
    EXPECT_TRUE(comp_bar(Matrix<Q>(4, 2), dp2.delta(), one).is_zero());
    EXPECT_TRUE(comp_bar(dp2.delta(), Matrix<Q>(4, 2), one).is_zero());
    EXPECT_TRUE(comp_bar(e1_squared(), e1_squared(), one).is_zero());

    // s(e_0) = e_0 (x) e_1 on null(2): (s (x) Id) s (e_0) = e_0 e_1 e_1, (Id (x) s) s (e_0) = 0
    Matrix<Q> s(4, 2);
    s(1, 0) = 1;
    auto c = comp_bar(s, s, one);
    EXPECT_EQ(c(flat_index({0, 1, 1}, 2), 0), Q(1));
    EXPECT_EQ(c.first_nonzero(), (std::pair<std::size_t, std::size_t>{flat_index({0, 1, 1}, 2), 0}));

    auto cc = comp_bar(dp2, Cochain<Q>{2, dp2.delta()}, Cochain<Q>{2, dp2.delta()});
    EXPECT_EQ(cc.degree, 3u);
    EXPECT_THROW(comp_bar(Matrix<Q>(3, 2), dp2.delta(), one), std::invalid_argument);
}

TEST(Obstruction, TrivialAndDividedPowerVanish)
{
    for (const auto& f : fixture_morphisms())
        for (std::size_t n = 0; n <= 2; ++n) {
            auto ob = obstruction(QDef::trivial(f, n));
            EXPECT_TRUE(ob.cochain.is_zero());
            EXPECT_TRUE(ob.cobounding());
        }
    auto ob = obstruction(divided_power_deformation(QQ, 1));
    EXPECT_TRUE(ob.cochain.is_zero());
    EXPECT_EQ(ob.cochain.degree, 3u);
}

TEST(Obstruction, NullCoalgebraCocycleIsObstructed)
{
    auto w = obstructed_cocycle(QQ);
    auto f = identity_morphism(null_coalgebra(QQ, 2));
    QDef d(f, {w});
    ASSERT_TRUE(verify_deformation(d));
    auto ob = obstruction(d);
    // Ob_A(e_0) = Ob_B(e_0) = e_0 e_1 e_1, Ob_F = 0
    std::size_t row = flat_index({0, 1, 1}, 2);
    EXPECT_EQ(ob.cochain.xi(row, 0), Q(1));
    EXPECT_EQ(ob.cochain.pi(row, 0), Q(1));
    EXPECT_TRUE(ob.cochain.phi.is_zero());
    EXPECT_FALSE(ob.cobounding());
    EXPECT_TRUE(is_cocycle(MorphismComplex<QF>(f), ob.cochain));

    // independent check: Ob lies outside the column space of D_2
    MorphismComplex<QF> c(f);
    EXPECT_FALSE(image_basis(c.differential_matrix(2)).contains(c.flatten(ob.cochain)));
}

TEST(Obstruction, IsACocycleOnGeneratedDeformations)
{
    Sampler<QF> rnd(QQ, 202);
    for (int trial = 0; trial < 30; ++trial) {
        auto fs = fixture_morphisms();
        const auto& f = fs[rnd.index(fs.size())];
        MorphismComplex<QF> c(f);
        auto d = integrate(f, random_cocycle(c, rnd), 1 + rnd.index(3)).deformation;
        auto ob = obstruction(d, c);
        EXPECT_TRUE(c.apply(ob.cochain).is_zero());
    }
}

TEST(Extend, TrivialWithZero)
{
    auto f = collapse_morphism(QQ, 2);
    auto d = QDef::trivial(f, 2);
    auto r = extend(d, QDef::zero_coefficient(f));
    ASSERT_TRUE(std::holds_alternative<QDef>(r));
    EXPECT_EQ(std::get<QDef>(r), QDef::trivial(f, 3));
}

TEST(Extend, DividedPowerCanonicalAndSupplied)
{
    auto d = divided_power_deformation(QQ, 1);
    auto r = extend(d);
    ASSERT_TRUE(std::holds_alternative<QDef>(r));
    const auto& e = std::get<QDef>(r);
    EXPECT_EQ(e.order(), 2u);
    EXPECT_TRUE(verify_deformation(e));
    // Ob = 0, so the canonical solve picks the zero solution
    EXPECT_TRUE(e.coefficient(2).is_zero());

    Sampler<QF> rnd(QQ, 303);
    MorphismComplex<QF> c(d.morphism());
    for (int k = 0; k < 5; ++k) {
        auto w = random_cocycle(c, rnd);
        auto r2 = extend(d, w);
        ASSERT_TRUE(std::holds_alternative<QDef>(r2));
        EXPECT_EQ(std::get<QDef>(r2).coefficient(2), w);
        EXPECT_TRUE(verify_deformation(std::get<QDef>(r2)));
    }
}

TEST(Extend, MismatchedCoefficientIsRejected)
{
    auto d = divided_power_deformation(QQ, 1);
    auto w = QDef::zero_coefficient(d.morphism());
    // e_1 -> e_0 is not a coderivation: d_c(w) has third component -e_1 -> e_0 (x) e_0
    w.phi(0, 1) = 1;
    auto r = extend(d, w);
    ASSERT_TRUE(std::holds_alternative<ExtensionRejected>(r));
    const auto& def = std::get<ExtensionRejected>(r).difference;
    EXPECT_EQ(def.order, 2u);
    EXPECT_NE(def.equation.find("F component"), std::string::npos);
    EXPECT_EQ(def.row, 0u);
    EXPECT_EQ(def.col, 1u);
    EXPECT_EQ(def.value, "-1");
    EXPECT_FALSE(verify_deformation(d.appended(w)));
}

TEST(Extend, ObstructedCocycleReportsClass)
{
    auto f = identity_morphism(null_coalgebra(QQ, 2));
    auto r = extend(QDef(f, {obstructed_cocycle(QQ)}));
    ASSERT_TRUE(std::holds_alternative<ObstructionClass<Q>>(r));
    const auto& ob = std::get<ObstructionClass<Q>>(r);
    EXPECT_FALSE(ob.cobounding());
    EXPECT_EQ(ob.h3_class.size(), cohomology(MorphismComplex<QF>(f), 3).h_dim);
}

TEST(Extend, ConverseDirectionOnGeneratedDeformations)
{
    Sampler<QF> rnd(QQ, 404);
    for (int trial = 0; trial < 20; ++trial) {
        auto fs = fixture_morphisms();
        const auto& f = fs[rnd.index(fs.size())];
        MorphismComplex<QF> c(f);
        auto full = integrate(f, random_cocycle(c, rnd), 2 + rnd.index(2)).deformation;
        auto n = full.order() - 1;
        auto ob = obstruction_cochain(full.truncated(n));
        EXPECT_EQ(c.apply(full.coefficient(n + 1)), ob);
    }
}

TEST(Integrate, ZeroCocycleGivesTrivialDeformation)
{
    auto f = identity_morphism(divided_power(QQ, 2));
    auto r = integrate(f, QDef::zero_coefficient(f), 3);
    ASSERT_TRUE(r.complete());
    EXPECT_EQ(r.deformation, QDef::trivial(f, 3));
}

TEST(Integrate, DividedPowerToOrderFour)
{
    auto fixture = divided_power_deformation(QQ, 1);
    auto w = *infinitesimal(fixture).cochain;
    auto r = integrate(fixture.morphism(), w, 4);
    ASSERT_TRUE(r.complete());
    EXPECT_EQ(r.deformation.order(), 4u);
    for (std::size_t n = 1; n <= 4; ++n)
        EXPECT_TRUE(verify_deformation(r.deformation.truncated(n))) << n;
    EXPECT_EQ(*infinitesimal(r.deformation).cochain, w);
    EXPECT_EQ(r.deformation, divided_power_deformation(QQ, 4));
}

TEST(Integrate, RejectsNonCocycle)
{
    auto f = identity_morphism(grouplike(QQ, 1));
    QMCochain w{2, qmat({{1}}), qmat({{0}}), qmat({{0}})};
    try {
        integrate(f, w, 2);
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("not an infinitesimal candidate"), std::string::npos);
    }
}

TEST(Integrate, NeverObstructedWhenThirdCohomologyVanishes)
{
    auto f = identity_morphism(grouplike(QQ, 1));
    MorphismComplex<QF> c(f);
    ASSERT_EQ(cohomology(c, 3).h_dim, 0u);
    Sampler<QF> rnd(QQ, 505);
    for (int trial = 0; trial < 10; ++trial) {
        auto r = integrate(f, random_cocycle(c, rnd), 4);
        EXPECT_TRUE(r.complete());
        EXPECT_TRUE(verify_deformation(r.deformation));
    }
}

TEST(Integrate, StopsAtObstruction)
{
    auto f = identity_morphism(null_coalgebra(QQ, 2));
    auto r = integrate(f, obstructed_cocycle(QQ), 3);
    ASSERT_FALSE(r.complete());
    EXPECT_EQ(r.deformation.order(), 1u);
    EXPECT_TRUE(verify_deformation(r.deformation));
    EXPECT_FALSE(r.obstruction->cobounding());
}

TEST(InvertFormal, HandExamples)
{
    auto f = identity_morphism(divided_power(QQ, 2));
    EXPECT_EQ(invert_formal(QIso::identity(f, 3)), QIso::identity(f, 3));

    auto g = qmat({{1, 2}, {0, 3}});
    auto h = qmat({{0, 1}, {1, 0}});
    QIso p1(f, {QIso::make_coefficient(f, f.source().id(), f.target().id()), QIso::make_coefficient(f, g, h)});
    auto i1 = invert_formal(p1);
    EXPECT_EQ(i1.order(), 1u);
    EXPECT_EQ(i1.a(1), -g);
    EXPECT_EQ(i1.b(1), -h);

    auto zero = Matrix<Q>(2, 2);
    QIso p2(f, {QIso::make_coefficient(f, f.source().id(), f.target().id()), QIso::make_coefficient(f, g, h),
                QIso::make_coefficient(f, zero, zero)});
    auto i2 = invert_formal(p2);
    EXPECT_EQ(i2.a(2), g * g);
    EXPECT_EQ(i2.b(2), h * h);

    QIso bad(f, {QIso::make_coefficient(f, g, h)});
    EXPECT_THROW(invert_formal(bad), std::invalid_argument);
}

TEST(InvertFormal, ComposesToIdentity)
{
    Sampler<QF> rnd(QQ, 606);
    for (const auto& f : fixture_morphisms()) {
        auto p = random_isomorphism(f, 3, rnd);
        auto q = invert_formal(p);
        EXPECT_EQ(compose_formal(p, q), QIso::identity(f, 3));
        EXPECT_EQ(compose_formal(q, p), QIso::identity(f, 3));
    }
}

TEST(ApplyEquivalence, IdentityLeavesDeformationUnchanged)
{
    auto d = divided_power_deformation(QQ, 3);
    EXPECT_EQ(apply_equivalence(QIso::identity(d.morphism(), 3), d), d);
}

TEST(ApplyEquivalence, TransportsValidDeformations)
{
    Sampler<QF> rnd(QQ, 707);
    for (const auto& f : fixture_morphisms()) {
        for (int k = 0; k < 3; ++k) {
            std::size_t n = 1 + rnd.index(3);
            auto p = random_isomorphism(f, n, rnd);
            auto moved = apply_equivalence(p, QDef::trivial(f, n));
            EXPECT_TRUE(verify_deformation(moved));

            MorphismComplex<QF> c(f);
            auto d = integrate(f, random_cocycle(c, rnd), n).deformation;
            auto e = apply_equivalence(p, d);
            EXPECT_TRUE(verify_deformation(e));
            EXPECT_TRUE(is_coboundary(c, e.coefficient(1) - d.coefficient(1)).has_value());
            EXPECT_EQ(apply_equivalence(invert_formal(p), e), d);
        }
    }
}

TEST(ApplyEquivalence, FirstOrderChangeIsTheCoboundaryOfPhiOne)
{
    // omega_1 -> omega_1 + d_c(phi_1)
    Sampler<QF> rnd(QQ, 808);
    auto d = divided_power_deformation(QQ, 1);
    const auto& f = d.morphism();
    auto p = random_isomorphism(f, 1, rnd);
    auto e = apply_equivalence(p, d);
    EXPECT_EQ(e.coefficient(1), d.coefficient(1) + d_c(f, p.coefficient(1)));
}

TEST(ApplyEquivalence, OrderMismatchIsAnError)
{
    auto d = divided_power_deformation(QQ, 2);
    EXPECT_THROW(apply_equivalence(QIso::identity(d.morphism(), 3), d), std::invalid_argument);
}

TEST(Trivialize, TrivialGivesIdentity)
{
    for (const auto& f : fixture_morphisms()) {
        auto r = trivialize(QDef::trivial(f, 2));
        ASSERT_TRUE(std::holds_alternative<QIso>(r));
        EXPECT_EQ(std::get<QIso>(r), QIso::identity(f, 2));
    }
}

TEST(Trivialize, GrouplikeIdentityIsRigid)
{
    auto f = identity_morphism(grouplike(QQ, 1));
    Sampler<QF> rnd(QQ, 909);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 1 + rnd.index(4);
        auto d = apply_equivalence(random_isomorphism(f, n, rnd), QDef::trivial(f, n));
        auto r = trivialize(d);
        ASSERT_TRUE(std::holds_alternative<QIso>(r));
        EXPECT_EQ(apply_equivalence(std::get<QIso>(r), d), QDef::trivial(f, n));
    }
}

TEST(Trivialize, OppositeSignLeavesTheLeadingTerm)
{
    // the staircase step uses Id - chi t^l; Id + chi t^l doubles omega_l instead
    auto f = identity_morphism(grouplike(QQ, 1));
    Sampler<QF> rnd(QQ, 1010);
    auto d = apply_equivalence(random_isomorphism(f, 2, rnd), QDef::trivial(f, 2));
    ASSERT_FALSE(d.coefficient(1).is_zero());
    MorphismComplex<QF> c(f);
    auto chi = *is_coboundary(c, d.coefficient(1));
    auto step = [&](const Q& sign) {
        auto coeffs = QIso::identity(f, 2).coefficients();
        coeffs[1] = QIso::make_coefficient(f, sign * chi.xi, sign * chi.pi);
        return apply_equivalence(QIso(f, coeffs), d).coefficient(1);
    };
    EXPECT_TRUE(step(Q(-1)).is_zero());
    EXPECT_EQ(step(Q(1)), Q(2) * d.coefficient(1));
}

TEST(Trivialize, BlockedByNonzeroSecondCohomology)
{
    auto d = squaring_deformation(QQ, 2);
    ASSERT_TRUE(verify_deformation(d));
    MorphismComplex<QF> c(d.morphism());
    ASSERT_GT(cohomology(c, 2).h_dim, 0u);
    auto r = trivialize(d);
    ASSERT_TRUE(std::holds_alternative<TrivializationFailure<Q>>(r));
    const auto& fail = std::get<TrivializationFailure<Q>>(r);
    EXPECT_EQ(fail.order, 1u);
    ASSERT_EQ(fail.h2_class.size(), 1u);
    EXPECT_NE(fail.h2_class[0], Q(0));
    // the leading cocycle is outside the image of the independently built D_1
    EXPECT_FALSE(image_basis(c.differential_matrix(1)).contains(c.flatten(fail.cocycle)));
}

TEST(Trivialize, RejectsInvalidInput)
{
    auto good = divided_power_deformation(QQ, 1);
    auto w = good.coefficient(1);
    w.phi(0, 0) = 1;
    EXPECT_THROW(trivialize(QDef(good.morphism(), {w})), std::invalid_argument);
}

TEST(PrimeFieldDeformations, DividedPowerIntegratesOverGF5)
{
    PrimeField gf(5);
    auto fixture = divided_power_deformation(gf, 1);
    auto r = integrate(fixture.morphism(), fixture.coefficient(1), 5);
    ASSERT_TRUE(r.complete());
    EXPECT_TRUE(verify_deformation(r.deformation));
    EXPECT_TRUE(obstruction(r.deformation).cochain.is_zero());
    auto blocked = trivialize(squaring_deformation(gf, 3));
    EXPECT_TRUE(std::holds_alternative<TrivializationFailure<ModP>>(blocked));
}
