// Cubical complexes, Yee-grid electromagnetism, spacetime conservation,
// the Lorentz force and scenario files.

#include "extcalc/cubical.hpp"
#include "extcalc/maxwell.hpp"
#include "extcalc/random.hpp"
#include "extcalc/scenario.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace extcalc;
using namespace extcalc::maxwell;

namespace {

std::vector<Rational> random_values(random::Rng& rng, long n) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = random::rational(rng);
    return v;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST(Cubical, CoboundarySquaresToZero) {
    random::Rng rng(1);
    for (const auto& G : {CubicalGrid({3, 2, 2}), CubicalGrid({3, 3, 2}, {true, false, true}), CubicalGrid({2, 1, 3}, {false, true, true}),
                          CubicalGrid({2, 2, 2, 2}, {true, false, false, true})})
        for (int k = 0; k + 2 <= G.dim(); ++k) {
            const auto dd = G.d(k + 1, G.d(k, random_values(rng, G.count(k))));
            for (const auto& x : dd) EXPECT_EQ(x, 0);
        }
}

TEST(Cubical, CellCounts) {
    const CubicalGrid G({2, 3, 4});
    EXPECT_EQ(G.count(0), 3 * 4 * 5);
    EXPECT_EQ(G.count(3), 24);
    const CubicalGrid P({2, 3, 4}, {true, true, true});
    EXPECT_EQ(P.count(0), 24);
    EXPECT_EQ(P.count(1), 72);
    long chi = 0;
    for (int k = 0; k <= 3; ++k) chi += (k % 2 ? -1 : 1) * P.count(k);
    EXPECT_EQ(chi, 0);
}

TEST(Cubical, TransposeIsAdjoint) {
    random::Rng rng(2);
    const CubicalGrid G({3, 2, 2}, {true, false, false});
    for (int k = 0; k < 3; ++k) {
        const auto a = random_values(rng, G.count(k)), b = random_values(rng, G.count(k + 1));
        const auto da = G.d(k, a), dtb = G.d_transpose(k, b);
        Rational lhs = 0, rhs = 0;
        for (size_t i = 0; i < b.size(); ++i) lhs += da[i] * b[i];
        for (size_t i = 0; i < a.size(); ++i) rhs += a[i] * dtb[i];
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(Cubical, SparseMatchesDense) {
    random::Rng rng(3);
    const CubicalGrid G({3, 1, 2}, {true, true, false});
    for (int k = 0; k < 3; ++k) {
        const SparseCoboundary S(G, k);
        std::vector<double> x(G.count(k));
        for (auto& v : x) v = random::uniform_int(rng, -5, 5);
        std::vector<double> y;
        S.apply(x, y);
        const auto ref = G.d(k, x);
        for (size_t i = 0; i < y.size(); ++i) EXPECT_EQ(y[i], ref[i]);
    }
}

TEST(Cubical, RejectsBadGrids) {
    EXPECT_THROW(CubicalGrid({0, 2}), GridError);
    EXPECT_THROW(CubicalGrid({2, 2}, {true}), GridError);
}

TEST(Dictionary, Validation) {
    std::vector<LabeledField> good;
    for (const auto& e : field_dictionary()) good.push_back({e.name, e.degree, e.parity, e.home});
    EXPECT_TRUE(validate_dictionary(good).empty());
    const auto bad = validate_dictionary({{"B", 2, Parity::Twisted, Home::Space}, {"rho", 0, Parity::Twisted, Home::Space}});
    ASSERT_EQ(bad.size(), 2u);
    EXPECT_EQ(bad[0].rfind("B:", 0), 0u);
    EXPECT_EQ(bad[1].rfind("rho:", 0), 0u);
}

TEST(Electrostatics, FluxIsSurfaceIndependent) {
    YeeGrid G({16, 16, 16}, {1.0, 1.0, 1.0});
    std::vector<double> rho(G.count(0), 0.0);
    rho[G.vertex(8, 8, 8)] = 2.0;
    const auto sol = solve_electrostatics(G, rho);
    for (int r = 1; r <= 6; ++r) {
        const VertexBox box{{8 - r, 8 - r, 8 - r}, {8 + r, 8 + r + 1, 8 + r}};
        EXPECT_NEAR(flux_through_box(G, sol.D, box), 2.0, 1e-7);
    }
    EXPECT_NEAR(flux_through_box(G, sol.D, {{1, 1, 1}, {4, 4, 4}}), 0.0, 1e-7);
    // Gauss's law holds at every interior vertex; wall vertices are grounded.
    const auto res = gauss_residual(G, sol.D, rho);
    double worst = 0.0;
    for (int i = 1; i < 16; ++i)
        for (int j = 1; j < 16; ++j)
            for (int k = 1; k < 16; ++k) worst = std::max(worst, std::abs(res[G.vertex(i, j, k)]));
    EXPECT_LT(worst, 1e-8);
}

TEST(Electrostatics, ZeroChargeGivesZeroField) {
    YeeGrid G({6, 6, 6}, {1.0, 1.0, 1.0});
    const auto sol = solve_electrostatics(G, std::vector<double>(G.count(0), 0.0));
    EXPECT_EQ(max_abs(sol.E), 0.0);
}

TEST(Electrostatics, OppositeChargesHaveNoNetFlux) {
    YeeGrid G({16, 16, 16}, {1.0, 0.5, 1.0});
    std::vector<double> rho(G.count(0), 0.0);
    rho[G.vertex(6, 8, 8)] = 1.0;
    rho[G.vertex(10, 8, 8)] = -1.0;
    const auto sol = solve_electrostatics(G, rho);
    EXPECT_NEAR(flux_through_box(G, sol.D, {{2, 2, 2}, {14, 14, 14}}), 0.0, 1e-8);
    EXPECT_NEAR(flux_through_box(G, sol.D, {{4, 4, 4}, {7, 12, 12}}), 1.0, 1e-7);
}

TEST(Electrostatics, DielectricBlockKeepsGaussLaw) {
    YeeGrid G({12, 12, 12}, {1.0, 1.0, 1.0});
    std::vector<double> eps(G.cell_count(), 1.0), mu(G.cell_count(), 1.0);
    for (int i = 7; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            for (int k = 0; k < 12; ++k) eps[G.cell(i, j, k)] = 5.0;
    G.set_materials(eps, mu);
    std::vector<double> rho(G.count(0), 0.0);
    rho[G.vertex(5, 6, 6)] = 1.0;
    const auto sol = solve_electrostatics(G, rho);
    EXPECT_NEAR(flux_through_box(G, sol.D, {{2, 2, 2}, {10, 10, 10}}), 1.0, 1e-7);
}

TEST(Electrostatics, InputChecks) {
    YeeGrid G({4, 4, 4}, {1.0, 1.0, 1.0});
    std::vector<double> rho(G.count(0), 0.0);
    rho[G.vertex(0, 2, 2)] = 1.0;
    EXPECT_THROW(solve_electrostatics(G, rho), MaxwellError);
    YeeGrid P({4, 4, 4}, {1.0, 1.0, 1.0}, {true, true, true});
    std::vector<double> q(P.count(0), 0.0);
    q[0] = 1.0;
    EXPECT_THROW(solve_electrostatics(P, q, Boundary::Periodic), MaxwellError);
    EXPECT_THROW(YeeGrid({4, 4, 4}, {1.0, 0.0, 1.0}), MaxwellError);
}

TEST(Magnetostatics, Ampere) {
    YeeGrid G({16, 16, 2}, {1.0, 1.0, 1.0}, {false, false, true});
    const auto J = wire_current(G, 8, 8, 3.0);
    const auto sol = solve_magnetostatics(G, J);
    EXPECT_NEAR(circulation_around(G, sol.H, 7, 9, 7, 9, 1), 3.0, 1e-7);
    EXPECT_NEAR(circulation_around(G, sol.H, 2, 13, 3, 12, 0), 3.0, 1e-7);
    EXPECT_NEAR(circulation_around(G, sol.H, 1, 4, 1, 4, 0), 0.0, 1e-7);
    EXPECT_DOUBLE_EQ(current_through(G, J, 2, 13, 3, 12, 0), 3.0);
    std::vector<double> divB;
    G.d(2).apply(sol.B, divB);
    EXPECT_EQ(max_abs(divB), 0.0);
}

TEST(Magnetostatics, ZeroCurrentAndConservationCheck) {
    YeeGrid G({6, 6, 2}, {1.0, 1.0, 1.0}, {false, false, true});
    EXPECT_EQ(max_abs(solve_magnetostatics(G, std::vector<double>(G.count(1), 0.0)).H), 0.0);
    std::vector<double> J(G.count(1), 0.0);
    J[G.edge(0, 2, 3, 0)] = 1.0;
    EXPECT_THROW(solve_magnetostatics(G, J), MaxwellError);
}

TEST(Evolution, ZeroStaysZero) {
    YeeGrid G({4, 4, 4}, {1.0, 1.0, 1.0}, {true, true, true});
    Leapfrog L(G, 0.5 * G.cfl_limit());
    auto s = EMState::zeros(G);
    for (int i = 0; i < 20; ++i) L.step(s);
    EXPECT_EQ(max_abs(s.E), 0.0);
    EXPECT_EQ(max_abs(s.B), 0.0);
}

TEST(Evolution, CflViolationIsRejected) {
    YeeGrid G({4, 4, 4}, {1.0, 1.0, 1.0});
    EXPECT_THROW(Leapfrog(G, 1.01 * G.cfl_limit()), MaxwellError);
}

TEST(Evolution, PlaneWaveConvergesAtSecondOrder) {
    const auto a = plane_wave(16), b = plane_wave(32), c = plane_wave(64);
    EXPECT_GT(std::log2(a.l2_error / b.l2_error), 1.8);
    EXPECT_GT(std::log2(b.l2_error / c.l2_error), 1.8);
    EXPECT_LE(c.max_divB_relative, 1e-12);
    EXPECT_LT(c.energy_drift, 1e-2);
}

TEST(Evolution, VacuumEnergyBoundedOverManySteps) {
    YeeGrid G({6, 5, 4}, {1.0, 1.0, 1.0}, {true, true, true});
    Leapfrog L(G, 0.9 * G.cfl_limit());
    random::Rng rng(21);
    auto s = EMState::zeros(G);
    // Divergence-free initial B from a random vector potential.
    std::vector<double> A(G.count(1));
    for (auto& a : A) a = random::uniform_int(rng, -100, 100) / 100.0;
    G.d(1).apply(A, s.B);
    // The half-step energy oscillates; at Courant number nu it stays within
    // a factor 1/(1 - nu^2) of the conserved leapfrog energy.
    const double bound = 1.0 / (1.0 - 0.81);
    const double e0 = L.step(s).energy;
    double lo = e0, hi = e0;
    for (int i = 0; i < 10000; ++i) {
        const auto d = L.step(s);
        lo = std::min(lo, d.energy);
        hi = std::max(hi, d.energy);
        ASSERT_LE(d.max_divB, 1e-12 * std::max(1.0, d.max_B));
    }
    EXPECT_LT(hi / lo, bound * bound);
    EXPECT_GT(lo, 0.0);
}

TEST(Evolution, ChargeConservingDeposition) {
    const auto r = continuity_run(6, 500);
    EXPECT_LT(r.max_gauss_drift, 1e-12);
    EXPECT_LT(r.max_continuity_error, 1e-12);
    EXPECT_LT(r.max_divB_relative, 1e-12);
}

TEST(Evolution, SingleSegmentDepositionMatchesChargeChange) {
    YeeGrid G({4, 4, 4}, {1.0, 1.0, 1.0}, {true, true, true});
    const Vec3 a{1.2, 1.7, 2.1}, b{1.9, 2.3, 1.6};
    std::vector<double> ra(G.count(0), 0.0), rb(G.count(0), 0.0), J(G.count(1), 0.0);
    deposit_charge(G, 1.0, a, ra);
    deposit_charge(G, 1.0, b, rb);
    deposit_current(G, 1.0, a, b, 0.5, J);
    std::vector<double> div;
    G.d(0).apply_transpose(J, div);
    for (size_t v = 0; v < div.size(); ++v) EXPECT_NEAR(rb[v] - ra[v], 0.5 * div[v], 1e-14);
}

TEST(Spacetime, StaticChargeHasNoSideFlux) {
    const CubicalGrid G({6, 5});
    std::vector<std::vector<int>> path;
    for (int t = 0; t < 6; ++t) path.push_back({t, 2});
    const auto J = worldline_current(G, path);
    const auto rep = charge_conservation_check(G, J, {{1, 1}, {4, 3}});
    EXPECT_EQ(rep.initial_charge, 1);
    EXPECT_EQ(rep.final_charge, 1);
    EXPECT_EQ(rep.side_flux, 0);
    EXPECT_EQ(rep.leak, 0);
}

TEST(Spacetime, WorldlineLeavingTheRegion) {
    const CubicalGrid G({6, 6});
    const std::vector<std::vector<int>> path = {{0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}, {4, 4}, {5, 4}};
    const auto J = worldline_current(G, path);
    const auto rep = charge_conservation_check(G, J, {{1, 0}, {4, 3}});
    EXPECT_EQ(rep.initial_charge, 1);
    EXPECT_EQ(rep.final_charge, 0);
    EXPECT_EQ(rep.side_flux, 1);
    EXPECT_EQ(rep.leak, 0);
}

TEST(Spacetime, RandomClosedCurrentsConserveCharge) {
    random::Rng rng(22);
    const CubicalGrid G({4, 3, 3, 3});
    for (int trial = 0; trial < 10; ++trial) {
        const auto J = G.d(2, random_values(rng, G.count(2)));
        const auto rep = charge_conservation_check(G, J, {{1, 0, 1, 0}, {2, 2, 1, 2}});
        EXPECT_TRUE(rep.closed);
        EXPECT_EQ(rep.leak, 0);
    }
    auto J = G.d(2, random_values(rng, G.count(2)));
    J[0] += 1;
    EXPECT_FALSE(charge_conservation_check(G, J, {{0, 0, 0, 0}, {3, 2, 2, 2}}).closed);
}

TEST(Spacetime, SliceCommutesWithCoboundary) {
    random::Rng rng(23);
    const CubicalGrid G({3, 3, 2, 2});
    for (int axis = 0; axis < 4; ++axis)
        for (Parity par : {Parity::Straight, Parity::Twisted}) {
            const auto A = random_values(rng, G.count(1));
            const auto F = G.d(1, A);
            const auto sA = restrict_to_slice(G, 1, A, axis, 1, par);
            const auto sF = restrict_to_slice(G, 2, F, axis, 1, par);
            EXPECT_EQ(sA.grid.d(1, sA.values), sF.values);
        }
}

TEST(Lorentz, RestChargeInElectricField) {
    const auto g = Metric::minkowski(4);
    const auto F = two_form_matrix(PolyForm::basis(4, {1, 0}, 5));
    const auto f = lorentz_force(Rational(3), Vector<Rational>{1, 0, 0, 0}, F, g);
    EXPECT_EQ(f.vector, (Vector<Rational>{0, 15, 0, 0}));
}

TEST(Lorentz, VelocityInsideFormSubmanifoldFeelsNoForce) {
    const auto g = Metric::minkowski(4);
    // F = dy^dz has form-submanifolds spanned by t and x.
    const auto F = two_form_matrix(PolyForm::basis(4, {2, 3}));
    const Vector<Rational> V = {make_rational(5, 4), make_rational(3, 4), 0, 0};
    const auto f = lorentz_force(Rational(1), V, F, g);
    EXPECT_EQ(f.vector, (Vector<Rational>{0, 0, 0, 0}));
}

TEST(Lorentz, MagneticForceIsOrthogonal) {
    const auto g = Metric::minkowski(4);
    const auto F = two_form_matrix(PolyForm::basis(4, {1, 2}, 2));  // B along z
    const Vector<Rational> V = {make_rational(5, 4), 0, make_rational(3, 4), 0};
    const auto f = lorentz_force(Rational(1), V, F, g);
    EXPECT_EQ(g.inner(f.vector, V), 0);
    EXPECT_EQ(f.vector[3], 0);  // no component along B
    EXPECT_EQ(f.vector[0], 0);  // no work done
    EXPECT_NE(f.vector[1], 0);
}

TEST(Lorentz, RejectsNonUnitVelocity) {
    const auto g = Metric::minkowski(4);
    const auto F = two_form_matrix(PolyForm::basis(4, {1, 2}));
    EXPECT_THROW(lorentz_force(Rational(1), Vector<Rational>{2, 0, 0, 0}, F, g), MaxwellError);
    EXPECT_THROW(lorentz_force(Rational(1), Vector<Rational>{0, 1, 0, 0}, F, g), MaxwellError);
}

TEST(Scenario, ParsesAndReportsLineNumbers) {
    std::istringstream good("kind = static-e\ncells = 8 8 8\ncharge = 4 4 4 1 # centre\nprobe_box = a 2 2 2 6 6 6\n");
    const auto c = scenario::parse_config(good);
    EXPECT_EQ(c.cells[0], 8);
    ASSERT_EQ(c.boxes.size(), 1u);
    auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            scenario::parse_config(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("kind = static-e\ncells = 8 8\n"), 2);
    EXPECT_EQ(line_of("kind = static-e\ncells = 8 8 8\n\ncharge = 1 1 x 1\n"), 4);
    EXPECT_EQ(line_of("kind = bogus\n"), 1);
    EXPECT_EQ(line_of("cells = 2 2 2\nkind = evolve\ncells = 2 2 2\n"), 3);
    EXPECT_EQ(line_of("kind = static-e\nnonsense\n"), 2);
    EXPECT_EQ(line_of("kind = static-e\nfoo = 1\n"), 2);
}

TEST(Scenario, RunsAreDeterministic) {
    const std::string text =
        "kind = evolve\ncells = 6 6 6\nperiodic = 1 1 1\nparticle = 2.5 2.5 2.5 0.3 0.1 -0.2 1\n"
        "dt = 0.25\nsteps = 30\nprobe_box = c 1 1 1 4 4 4\n";
    std::string out[2];
    for (auto& o : out) {
        std::istringstream in(text);
        const auto r = scenario::run(scenario::parse_config(in));
        EXPECT_TRUE(r.passed);
        std::ostringstream os;
        r.table.write(os);
        o = os.str();
    }
    EXPECT_EQ(out[0], out[1]);
    EXPECT_FALSE(out[0].empty());
}
