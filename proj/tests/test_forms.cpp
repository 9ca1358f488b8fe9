// Polynomial forms, metrics and the algebraic identities.

#include "extcalc/identities.hpp"
#include "extcalc/metric.hpp"
#include "extcalc/poly_form.hpp"
#include "extcalc/random.hpp"

#include <gtest/gtest.h>

using namespace extcalc;

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial num(int n, long c) { return Polynomial::constant(n, Rational(c)); }

PolyForm one_form(int n, const std::vector<Polynomial>& coeffs, Parity p = Parity::Straight) {
    PolyForm w(n, 1, p);
    for (int i = 0; i < n; ++i) w.add({i}, coeffs[i]);
    return w;
}

PolyVectorField field(const std::vector<Polynomial>& comps) { return PolyVectorField{comps, Parity::Straight}; }

}  // namespace

TEST(Forms, AdditionAndScaling) {
    const auto dx = PolyForm::basis(2, {0}), dy = PolyForm::basis(2, {1});
    const auto sum = dx + dy;
    EXPECT_EQ(sum.component({0}), num(2, 1));
    EXPECT_EQ(sum.component({1}), num(2, 1));
    EXPECT_TRUE((sum + scale(Rational(-1), sum)).is_zero());
    EXPECT_EQ(scale(Rational(1), sum), sum);
    EXPECT_EQ(scale(Rational(-1), dx), -dx);
}

TEST(Forms, ClosedFormsAddToClosedForms) {
    const auto a = one_form(2, {var(2, 1), var(2, 0)});  // y dx + x dy
    const auto b = PolyForm::basis(2, {1});
    EXPECT_TRUE(exterior_derivative(a).is_zero());
    EXPECT_TRUE(exterior_derivative(a + b).is_zero());
}

TEST(Forms, ScalingByAFunctionBreaksClosedness) {
    const auto xdy = scale(var(2, 0), PolyForm::basis(2, {1}));
    EXPECT_EQ(exterior_derivative(xdy), PolyForm::basis(2, {0, 1}));
}

TEST(Forms, WedgeAntisymmetryAndParity) {
    const auto dx = PolyForm::basis(2, {0}), dy = PolyForm::basis(2, {1});
    EXPECT_EQ(wedge(dx, dy), PolyForm::basis(2, {0, 1}));
    EXPECT_EQ(wedge(dy, dx), -PolyForm::basis(2, {0, 1}));
    const auto tx = PolyForm::basis(2, {0}, 1, Parity::Twisted), ty = PolyForm::basis(2, {1}, 1, Parity::Twisted);
    const auto w = wedge(tx, ty);
    EXPECT_EQ(w.parity(), Parity::Straight);
    EXPECT_EQ(w, PolyForm::basis(2, {0, 1}));
    EXPECT_EQ(wedge(tx, dy).parity(), Parity::Twisted);
}

TEST(Forms, FWedgeFInFourDimensions) {
    const auto F = PolyForm::basis(4, {0, 1}) + PolyForm::basis(4, {2, 3});
    EXPECT_EQ(wedge(F, F), PolyForm::basis(4, {0, 1, 2, 3}, 2));
    // A decomposable 2-form wedges to zero with itself.
    EXPECT_TRUE(wedge(PolyForm::basis(4, {0, 1}), PolyForm::basis(4, {0, 1})).is_zero());
}

TEST(Forms, ExteriorDerivativeExamples) {
    const int n = 2;
    const auto f = var(n, 0) * var(n, 0) + var(n, 1);
    EXPECT_EQ(exterior_derivative(PolyForm::scalar(f)), one_form(n, {var(n, 0) * Rational(2), num(n, 1)}));
    const auto xy = PolyForm::scalar(var(n, 0) * var(n, 1));
    EXPECT_TRUE(exterior_derivative(exterior_derivative(xy)).is_zero());
}

TEST(Forms, VectorOneFormPairing) {
    const int n = 2;
    EXPECT_EQ(pair(PolyForm::basis(n, {1}), PolyVectorField::constant({0, -5})).value, num(n, -5));
    EXPECT_EQ(pair(PolyForm::basis(n, {0}), PolyVectorField::constant({0, 1})).value, num(n, 0));
    const auto xdy = scale(var(n, 0), PolyForm::basis(n, {1}));
    EXPECT_EQ(pair(xdy, field({num(n, 0), var(n, 0)})).value, var(n, 0) * var(n, 0));
}

TEST(Forms, VectorOnScalar) {
    const int n = 2;
    EXPECT_EQ(vector_on_scalar(PolyVectorField::constant({1, 0}), var(n, 0)).value, num(n, 1));
    EXPECT_EQ(vector_on_scalar(PolyVectorField::constant({1, 0}), var(n, 1)).value, num(n, 0));
    const auto V = field({var(n, 1), var(n, 0)});
    EXPECT_EQ(vector_on_scalar(V, var(n, 0) * var(n, 1)).value, var(n, 1) * var(n, 1) + var(n, 0) * var(n, 0));
}

TEST(Forms, InteriorProduct) {
    EXPECT_EQ(interior_product(PolyVectorField::constant({1, 0}), PolyForm::basis(2, {0, 1})), PolyForm::basis(2, {1}));
    const auto V = PolyVectorField::constant({1, 2, 3});
    EXPECT_TRUE(interior_product(V, interior_product(V, PolyForm::basis(3, {0, 1, 2}))).is_zero());
    EXPECT_TRUE(interior_product(PolyVectorField::constant({0, 0, 1}), PolyForm::basis(3, {0, 1})).is_zero());
    EXPECT_THROW(interior_product(V, PolyForm::scalar(num(3, 1))), FormError);
}

TEST(Forms, Pullbacks) {
    // z -> (z, 0, 0)
    PolyMap line{1, {var(1, 0), num(1, 0), num(1, 0)}};
    EXPECT_EQ(pullback(line, PolyForm::basis(3, {0})), PolyForm::basis(1, {0}));
    // The plane x = 1 parametrised by (u, v) -> (1, u, v).
    PolyMap plane{2, {num(2, 1), var(2, 0), var(2, 1)}};
    EXPECT_TRUE(pullback(plane, PolyForm::basis(3, {0})).is_zero());
    // Projection (x, y, z) -> (x, y).
    PolyMap proj{3, {var(3, 0), var(3, 1)}};
    EXPECT_EQ(pullback(proj, PolyForm::basis(2, {0, 1})), PolyForm::basis(3, {0, 1}));
}

TEST(Forms, Integrability) {
    EXPECT_TRUE(is_integrable_1form(scale(var(3, 0), PolyForm::basis(3, {1}))));
    const auto helix = PolyForm::basis(3, {2}) + scale(var(3, 0), PolyForm::basis(3, {1}));
    EXPECT_FALSE(is_integrable_1form(helix));
    EXPECT_TRUE(is_integrable_1form(exterior_derivative(PolyForm::scalar(var(3, 0) * var(3, 2)))));
}

TEST(Forms, TextRoundTrip) {
    random::Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const int n = random::uniform_int(rng, 1, 4);
        const auto w = random::form(rng, n, random::uniform_int(rng, 0, n), random::parity(rng));
        EXPECT_EQ(PolyForm::parse(w.str()), w) << w.str();
    }
    const auto w = PolyForm::parse("p=2 parity=twisted; [1,2]: 3/2*x0^2");
    EXPECT_EQ(w.parity(), Parity::Twisted);
    EXPECT_EQ(w.degree(), 2);
    EXPECT_EQ(w.component({1, 2}), var(3, 0) * var(3, 0) * make_rational(3, 2));
    EXPECT_EQ(PolyForm::parse("p=2; [2,1]: 1"), -PolyForm::basis(3, {1, 2}));
    EXPECT_THROW(PolyForm::parse("q=2; [0]: 1"), ParseError);
}

TEST(Hodge, EuclideanThreeSpace) {
    const auto g = Metric::euclidean(3);
    EXPECT_EQ(hodge(PolyForm::basis(3, {0}), g), PolyForm::basis(3, {1, 2}, 1, Parity::Twisted));
    EXPECT_EQ(hodge(PolyForm::basis(3, {1}), g), PolyForm::basis(3, {0, 2}, -1, Parity::Twisted));
    EXPECT_EQ(hodge(PolyForm::basis(3, {0, 1}), g).parity(), Parity::Twisted);
}

TEST(Hodge, Minkowski) {
    const auto g = parse_metric("diag(-1,1,1,1)");
    const auto F = PolyForm::basis(4, {0, 1});
    EXPECT_EQ(hodge(F, g), PolyForm::basis(4, {2, 3}, -1, Parity::Twisted));
    for (const auto& I : detail::index_sets(4, 2)) {
        const auto w = PolyForm::basis(4, I);
        EXPECT_EQ(hodge(hodge(w, g), g), -w);
    }
}

TEST(Hodge, DoubleDualSignOnRandomMetrics) {
    random::Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const int n = random::uniform_int(rng, 1, 5);
        const bool lor = n >= 2 && random::uniform_int(rng, 0, 1);
        const auto g = random::metric(rng, n, lor);
        const int p = random::uniform_int(rng, 0, n);
        const auto w = random::form(rng, n, p, random::parity(rng));
        const int s = ((p * (n - p)) % 2 ? -1 : 1) * g.det_sign();
        EXPECT_EQ(hodge(hodge(w, g), g), scale(Rational(s), w));
        EXPECT_EQ(hodge(w, g).parity(), flip(w.parity()));
    }
}

TEST(Metric, ParseLiterals) {
    const auto g = parse_metric("diag(-1,1,1,1)");
    EXPECT_EQ(g.dim(), 4);
    EXPECT_EQ(g.det_sign(), -1);
    EXPECT_FALSE(g.is_riemannian());
    const auto h = parse_metric("[2, 1; 1, 2]");
    EXPECT_EQ(h.determinant(), 3);
    EXPECT_THROW(parse_metric("[1, 2; 3, 4]"), std::exception);
    EXPECT_THROW(parse_metric("diag(1, 0)"), std::exception);
    EXPECT_THROW(parse_metric("banana"), ParseError);
    EXPECT_EQ(parse_metric(metric_literal(h)).determinant(), 3);
}

TEST(Metric, CausalClassification) {
    const auto g = Metric::minkowski(4);
    const Vector<Rational> t = {1, 0, 0, 0}, l = {1, 1, 0, 0}, s = {0, 2, 0, 0};
    EXPECT_EQ(g.inner(t, t), -1);
    EXPECT_EQ(classify(t, g).type, CausalType::Timelike);
    EXPECT_EQ(classify(t, g).orientation, TimeOrientation::Future);
    EXPECT_EQ(g.inner(l, l), 0);
    EXPECT_EQ(classify(l, g).type, CausalType::Lightlike);
    EXPECT_EQ(classify(l, g).orientation, TimeOrientation::Future);
    EXPECT_EQ(g.inner(s, s), 4);
    EXPECT_EQ(classify(s, g).type, CausalType::Spacelike);
    EXPECT_EQ(classify(s, g).orientation, TimeOrientation::NotApplicable);
    EXPECT_EQ(classify(Vector<Rational>{-1, 0, 0, 0}, g).orientation, TimeOrientation::Past);
}

TEST(Metric, GammaFactor) {
    const auto g = Metric::minkowski(2);
    const Vector<Rational> u = {1, 0}, v = {make_rational(5, 4), make_rational(3, 4)};
    EXPECT_EQ(gamma_factor(u, u, g).value, 1);
    EXPECT_EQ(gamma_factor(u, v, g).value, make_rational(5, 4));
    const auto e = Metric::euclidean(2);
    EXPECT_EQ(gamma_factor(Vector<Rational>{1, 0}, Vector<Rational>{0, 1}, e).value, 0);
    EXPECT_THROW(gamma_factor(Vector<Rational>{2, 0}, v, g), MetricError);
}

TEST(Metric, OrthogonalComplements) {
    auto spans = [](const std::vector<Vector<Rational>>& basis, const BasicMetric<Rational>& g, const Vector<Rational>& v) {
        for (const auto& b : basis)
            if (g.inner(b, v) != 0) return false;
        return static_cast<int>(basis.size()) == g.dim() - 1;
    };
    const auto e3 = Metric::euclidean(3);
    const Vector<Rational> z = {0, 0, 1};
    const auto cz = orthogonal_complement(z, e3);
    EXPECT_TRUE(spans(cz, e3, z));
    for (const auto& b : cz) EXPECT_EQ(b[2], 0);
    const auto m2 = Metric::minkowski(2);
    const auto cl = orthogonal_complement(Vector<Rational>{1, 1}, m2);
    ASSERT_EQ(cl.size(), 1u);
    EXPECT_EQ(cl[0][0], cl[0][1]);
    const auto ct = orthogonal_complement(Vector<Rational>{1, 0}, m2);
    ASSERT_EQ(ct.size(), 1u);
    EXPECT_EQ(ct[0][0], 0);
}

TEST(Metric, FormMagnitudes) {
    const auto w = PolyForm::basis(1, {0}, make_rational(7, 2));
    EXPECT_EQ(*form_magnitude(w, Metric::euclidean(1)).exact, make_rational(7, 2));
    EXPECT_EQ(*form_magnitude(PolyForm::basis(3, {0, 1}), Metric::euclidean(3)).exact, 1);
    const auto m = form_magnitude(PolyForm::basis(4, {0, 1}), Metric::minkowski(4));
    EXPECT_EQ(*m.exact, 1);
    EXPECT_EQ(m.sign, -1);
}

TEST(Metric, MetricDualOfLightlikeVectorAnnihilatesIt) {
    const auto g = Metric::minkowski(4);
    const auto V = PolyVectorField::constant({1, 1, 0, 0});
    EXPECT_TRUE(pair(flat(V, g), V).value == num(4, 0));
}

TEST(Metric, InducedMetrics) {
    const auto e3 = Metric::euclidean(3);
    AffineMap<Rational> plane{{{1, 0}, {0, 1}, {0, 0}}, {0, 0, 0}};
    const auto h = induced_metric(plane, e3);
    EXPECT_EQ(h(0, 0), 1);
    EXPECT_EQ(h(0, 1), 0);
    EXPECT_EQ(h(1, 1), 1);
    AffineMap<Rational> scaled{{{2, 0}, {0, 2}, {0, 0}}, {0, 0, 0}};
    EXPECT_EQ(induced_metric(scaled, e3)(1, 1), 4);
    AffineMap<Rational> slice{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 0, 0, 0}};
    const auto s = induced_metric(slice, Metric::minkowski(4));
    EXPECT_TRUE(s.is_riemannian());
    EXPECT_EQ(s.determinant(), 1);
    AffineMap<Rational> null{{{1}, {1}}, {0, 0}};
    EXPECT_THROW(induced_metric(null, Metric::minkowski(2)), MetricError);
}

TEST(Identities, SmallRandomSuite) {
    for (const auto& t : run_identity_suite(100, 99)) {
        EXPECT_EQ(t.checks, 100) << t.name;
        EXPECT_EQ(t.failures, 0) << t.name << ": " << t.first_failure;
    }
}
