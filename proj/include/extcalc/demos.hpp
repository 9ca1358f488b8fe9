#pragma once

// Named, self-checking demonstrations.  Each returns its report lines and a
// pass/fail verdict against fixed expected values.

#include "cochain.hpp"
#include "cohomology.hpp"
#include "identities.hpp"
#include "maxwell.hpp"
#include "meshes.hpp"
#include "metric.hpp"
#include "poly_form.hpp"
#include "random.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace extcalc::demos {

struct DemoResult {
    std::string id;
    bool passed = true;
    std::vector<std::string> lines;
    double seconds = 0.0;

    explicit DemoResult(std::string name) : id(std::move(name)) {}

    void check(bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
        passed = passed && ok;
    }
    void note(const std::string& what) { lines.push_back("      " + what); }
};

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

inline std::string betti_str(const std::vector<int>& b) {
    std::string s = "(";
    for (size_t i = 0; i < b.size(); ++i) s += (i ? ", " : "") + std::to_string(b[i]);
    return s + ")";
}

}  // namespace detail

/// Disk with seven negative dots: a twisted 1-form w with dw = rho, where rho
/// has -1 on seven triangles near the rim, so <dw, disk> = <w, boundary> = -7.
inline DemoResult stokes_disk_minus7() {
    DemoResult r("stokes-disk-minus7");
    const auto K = meshes::disk(8, 2);
    // Outer-band triangles are indices of the second ring; pick seven of them.
    ExactCochain rho = ExactCochain::zeros(K, 2, Parity::Twisted);
    int placed = 0;
    for (int t = 0; t < K.count(2) && placed < 7; ++t) {
        const auto& s = K.simplex(2, t);
        if (s[0] == 0) continue;  // fan triangles touch the centre
        rho.values[t] = -1;
        ++placed;
    }
    const auto solved = is_exact(rho, K);
    r.check(solved.exact && solved.primitive.has_value(), "solved d w = rho exactly for a twisted 1-form w");
    if (!solved.primitive) return r;
    const auto& w = *solved.primitive;
    r.check(coboundary(w, K) == rho, "d w reproduces the seven negative dots");
    const Chain disk = twisted_fundamental_chain(K);
    const auto pair = stokes_pairing_check(w, disk, K);
    r.note("<dw, disk> = " + to_string(pair.lhs));
    r.note("<w, boundary disk> = " + to_string(pair.rhs));
    r.check(pair.lhs == -7 && pair.rhs == -7, "both pairings equal -7 exactly");
    return r;
}

inline DemoResult identity_suite(int count = 1000) {
    DemoResult r("identity-suite");
    for (const auto& t : run_identity_suite(count)) {
        r.check(t.failures == 0, t.name + ": " + std::to_string(t.checks) + " checks, " + std::to_string(t.failures) + " failures");
        if (t.failures) r.note("first failure: " + t.first_failure);
    }
    return r;
}

inline DemoResult annulus_hole() {
    DemoResult r("annulus-hole");
    const int k = 4;
    const auto K = meshes::annulus(k);
    const auto rep = betti_numbers(K);
    r.check(rep.betti == std::vector<int>{1, 1, 0}, "annulus Betti numbers " + detail::betti_str(rep.betti));
    const auto w = meshes::winding_cochain(K, k);
    r.check(is_closed(w, K), "winding 1-cochain is closed");
    r.check(!is_exact(w, K).exact, "winding 1-cochain is not exact");
    const Rational around = integrate(w, meshes::annulus_inner_cycle(K, k), K);
    r.check(around != 0, "integral around the hole = " + to_string(around));
    // A contractible cycle: the boundary of two adjacent triangles.
    const auto [t1, s1] = *K.find({0, 1, k + 1});
    const auto [t2, s2] = *K.find({0, k + 1, k});
    Chain two(2);
    two.add(t1, s1);
    two.add(t2, s2);
    const Rational contractible = integrate(w, boundary(two, K), K);
    r.check(contractible == 0, "integral around a contractible cycle = " + to_string(contractible));
    return r;
}

inline DemoResult torus_betti() {
    DemoResult r("torus-betti");
    struct Row {
        std::string name;
        SimplicialComplex K;
        std::vector<int> expected;
        bool orientable;
    };
    std::vector<Row> rows = {
        {"annulus", meshes::annulus(4), {1, 1, 0}, true},
        {"torus", meshes::torus(3, 3), {1, 2, 1}, true},
        {"sphere", meshes::sphere(), {1, 0, 1}, true},
        {"disk", meshes::disk(8, 2), {1, 0, 0}, true},
        {"mobius", meshes::mobius(), {1, 1, 0}, false},
    };
    for (const auto& row : rows) {
        const auto rep = betti_numbers(row.K);
        long alt = 0;
        for (size_t i = 0; i < rep.betti.size(); ++i) alt += (i % 2 ? -1 : 1) * rep.betti[i];
        r.check(rep.betti == row.expected && rep.orientable == row.orientable && alt == rep.euler,
                row.name + ": b = " + detail::betti_str(rep.betti) + ", orientable = " + (rep.orientable ? "yes" : "no") +
                    ", chi = " + std::to_string(rep.euler));
    }
    return r;
}

inline DemoResult mobius_twisted_only(int round_trips = 1000) {
    DemoResult r("mobius-twisted-only");
    const int k = 4;
    const auto M = meshes::mobius_squares(k);
    const auto area = measure_from_edge_lengths(M, meshes::mobius_edge_lengths(M, k));
    const double total = integrate_over_manifold(area.density, M);
    r.check(std::abs(total - k) < 1e-12, "twisted area form integrates to " + detail::fmt(total) + " (" +
                                             std::to_string(k) + " unit squares)");
    bool raised = false;
    std::string message;
    try {
        FloatCochain straight = area.density;
        straight.parity = Parity::Straight;
        integrate_over_manifold(straight, M);
    } catch (const NonOrientableError& e) {
        raised = true;
        message = e.what();
    }
    r.check(raised, "straight top-form integration raises: " + message);
    bool twist_raised = false;
    try {
        twist_cochain(ExactCochain::zeros(M, 1), M);
    } catch (const NonOrientableError&) {
        twist_raised = true;
    }
    r.check(twist_raised, "twisting on the Moebius strip is refused");

    random::Rng rng(7);
    const std::vector<SimplicialComplex> spaces = {meshes::torus(3, 4), meshes::sphere(), meshes::annulus(5),
                                                   meshes::tetrahedron()};
    int failures = 0;
    for (int i = 0; i < round_trips; ++i) {
        const auto& K = spaces[i % spaces.size()];
        const int p = random::uniform_int(rng, 0, K.dim());
        ExactCochain w = ExactCochain::zeros(K, p, random::parity(rng));
        for (auto& v : w.values) v = random::rational(rng);
        auto o = *orientability(K).orientation;
        if (random::uniform_int(rng, 0, 1)) {
            for (auto& s : o) s = -s;
        }
        const auto back = twist_cochain(twist_cochain(w, K, o), K, o);
        if (!(back == w)) ++failures;
    }
    r.check(failures == 0, "twist/untwist round trip on " + std::to_string(round_trips) + " random cochains: " +
                               std::to_string(failures) + " failures");
    return r;
}

inline DemoResult ffwedge_4d() {
    DemoResult r("ffwedge-4d");
    const auto F = add(PolyForm::basis(4, {0, 1}), PolyForm::basis(4, {2, 3}));
    const auto FF = wedge(F, F);
    r.note("F = " + F.str());
    r.note("F^F = " + FF.str());
    r.check(FF == PolyForm::basis(4, {0, 1, 2, 3}, 2), "F^F = 2 dt^dx^dy^dz exactly");
    return r;
}

inline DemoResult gauss_point_charge(int n = 32, double Q = 1.0) {
    DemoResult r("gauss-point-charge");
    maxwell::YeeGrid G({n, n, n}, {1.0, 1.0, 1.0});
    std::vector<double> rho(G.count(0), 0.0);
    const int c = n / 2;
    rho[G.vertex(c, c, c)] = Q;
    const auto sol = maxwell::solve_electrostatics(G, rho, maxwell::Boundary::Grounded, 1e-10);
    r.note("CG iterations " + std::to_string(sol.solve.iterations) + ", relative residual " + detail::fmt(sol.solve.relative_residual));
    for (int half : {2, n / 4, 3 * n / 8}) {
        const maxwell::VertexBox box{{c - half, c - half, c - half}, {c + half, c + half, c + half}};
        const double flux = maxwell::flux_through_box(G, sol.D, box);
        r.check(std::abs(flux - Q) <= 0.01 * std::abs(Q),
                "flux through box of half-width " + std::to_string(half) + " = " + detail::fmt(flux));
    }
    return r;
}

inline DemoResult ampere_wire(int n = 32, int nz = 4, double I = 1.0) {
    DemoResult r("ampere-wire");
    maxwell::YeeGrid G({n, n, nz}, {1.0, 1.0, 1.0}, {false, false, true});
    const int c = n / 2;
    const auto J = maxwell::wire_current(G, c, c, I);
    const auto sol = maxwell::solve_magnetostatics(G, J, 1e-10);
    r.note("CG iterations " + std::to_string(sol.solve.iterations) + ", relative residual " + detail::fmt(sol.solve.relative_residual));
    for (int half : {1, n / 4}) {
        const double circ = maxwell::circulation_around(G, sol.H, c - half, c + half, c - half, c + half, nz / 2);
        r.check(std::abs(circ - I) <= 0.01 * std::abs(I),
                "linking loop of half-width " + std::to_string(half) + ": circulation " + detail::fmt(circ));
    }
    const double off = maxwell::circulation_around(G, sol.H, 2, 6, 2, 6, nz / 2);
    r.check(std::abs(off) <= 0.01 * std::abs(I), "non-linking loop: circulation " + detail::fmt(off));
    return r;
}

inline DemoResult plane_wave(int continuity_steps = 10000) {
    DemoResult r("plane-wave");
    std::vector<maxwell::PlaneWaveResult> runs;
    for (int n : {64, 128, 256}) runs.push_back(maxwell::plane_wave(n));
    double worst_divB = 0.0;
    for (size_t i = 0; i < runs.size(); ++i) {
        std::string line = std::to_string(runs[i].cells) + " cells: L2 error " + detail::fmt(runs[i].l2_error);
        if (i > 0) {
            const double order = std::log2(runs[i - 1].l2_error / runs[i].l2_error);
            line += ", observed order " + detail::fmt(order);
            r.check(order >= 1.8, line);
        } else {
            r.note(line);
        }
        worst_divB = std::max(worst_divB, runs[i].max_divB_relative);
    }
    r.check(worst_divB <= 1e-12, "max |dB| per step relative to field scale " + detail::fmt(worst_divB));
    const auto cont = maxwell::continuity_run(8, continuity_steps);
    r.check(cont.max_gauss_drift <= 1e-11,
            "Gauss residual drift over " + std::to_string(cont.steps) + " steps with a moving charge: " + detail::fmt(cont.max_gauss_drift));
    r.check(cont.max_continuity_error <= 1e-11, "deposited charge matches cloud-in-cell charge to " + detail::fmt(cont.max_continuity_error));
    r.check(cont.max_divB_relative <= 1e-12, "max |dB| relative during particle run " + detail::fmt(cont.max_divB_relative));
    return r;
}

inline DemoResult metric_suite() {
    DemoResult r("metric-suite");
    // Relative speed 3/5: u at rest, v boosted.
    const auto g = Metric::minkowski(4);
    const Vector<Rational> u = {1, 0, 0, 0};
    const Vector<Rational> v = {make_rational(5, 4), make_rational(3, 4), 0, 0};
    const auto gamma = gamma_factor(u, v, g);
    r.check(gamma.value == make_rational(5, 4), "exact gamma factor " + to_string(gamma.value));
    const auto gd = to_float(g);
    const double beta = 0.6, gam = 1.0 / std::sqrt(1 - beta * beta);
    const auto gamma_d = gamma_factor(Vector<double>{1, 0, 0, 0}, Vector<double>{gam, gam * beta, 0, 0}, gd);
    r.check(std::abs(gamma_d.value - 1.25) <= 1e-12, "float gamma factor " + detail::fmt(gamma_d.value));
    // A lightlike vector is orthogonal to itself; its metric dual annihilates it.
    const Vector<Rational> L = {1, 1, 0, 0};
    const auto Lflat = g.flat(L);
    Rational pairing = 0;
    for (int i = 0; i < 4; ++i) pairing += Lflat[i] * L[i];
    r.check(pairing == 0 && g.inner(L, L) == 0, "lightlike V: V_flat(V) = g(V, V) = " + to_string(pairing));
    const auto comp = orthogonal_complement(L, g);
    bool contains_self = false;
    for (const auto& b : comp)
        if (b == L || b == Vector<Rational>{-1, -1, 0, 0}) contains_self = true;
    Rational span_check = 0;
    for (const auto& b : comp) span_check += g.inner(b, L) * g.inner(b, L);
    r.check(span_check == 0, "orthogonal complement of V has " + std::to_string(comp.size()) + " vectors, all orthogonal to V" +
                                 (contains_self ? " (including V)" : ""));
    const auto w = PolyForm::basis(3, {0}, make_rational(7, 2));
    const auto mag = form_magnitude(w, Metric::euclidean(3));
    r.check(mag.exact && *mag.exact == make_rational(7, 2), "|3.5 dx| = " + (mag.exact ? to_string(*mag.exact) : "irrational"));
    return r;
}

namespace detail {

inline Vector<Rational> random_unit_timelike(random::Rng& rng) {
    // Rational points on the unit hyperboloid: rapidity and direction from
    // stereographic parameters.
    Rational s = make_rational(random::uniform_int(rng, -6, 6), 7);
    const Rational a = random::rational(rng, 3), b = random::rational(rng, 3);
    const Rational denom = 1 + a * a + b * b;
    const Vector<Rational> n = {2 * a / denom, 2 * b / denom, (1 - a * a - b * b) / denom};
    const Rational ch = (1 + s * s) / (1 - s * s), sh = 2 * s / (1 - s * s);
    return {ch, sh * n[0], sh * n[1], sh * n[2]};
}

}  // namespace detail

inline DemoResult lorentz_rest_charge(int samples = 1000) {
    DemoResult r("lorentz-rest-charge");
    const auto g = Metric::minkowski(4);
    const auto gd = to_float(g);
    random::Rng rng(11);
    int exact_fail = 0, float_fail = 0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto V = detail::random_unit_timelike(rng);
        Matrix<Rational> F(4, Vector<Rational>(4, Rational(0)));
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                F[a][b] = random::rational(rng);
                F[b][a] = -F[a][b];
            }
        const Rational q = random::rational(rng);
        const auto f = maxwell::lorentz_force(q, V, F, g);
        if (g.inner(f.vector, V) != 0) ++exact_fail;
        Vector<double> Vd(4);
        Matrix<double> Fd(4, Vector<double>(4));
        for (int a = 0; a < 4; ++a) {
            Vd[a] = to_double(V[a]);
            for (int b = 0; b < 4; ++b) Fd[a][b] = to_double(F[a][b]);
        }
        const auto fd = maxwell::lorentz_force(to_double(q), Vd, Fd, gd);
        const double gv = std::abs(gd.inner(fd.vector, Vd));
        worst = std::max(worst, gv);
        if (gv > 1e-12) ++float_fail;
    }
    r.check(exact_fail == 0, "g(f, V) = 0 exactly on " + std::to_string(samples) + " random rational samples");
    r.check(float_fail == 0, "g(f, V) <= 1e-12 on " + std::to_string(samples) + " float samples (worst " + detail::fmt(worst) + ")");
    // Charge at rest in a pure electric field F = E0 dx^dt.
    const Rational E0 = 3, q = 2;
    const auto F = maxwell::two_form_matrix(PolyForm::basis(4, {1, 0}, E0));
    const auto f = maxwell::lorentz_force(q, Vector<Rational>{1, 0, 0, 0}, F, g);
    r.note("rest charge q = 2 in F = 3 dx^dt: force vector (" + to_string(f.vector[0]) + ", " + to_string(f.vector[1]) + ", " +
           to_string(f.vector[2]) + ", " + to_string(f.vector[3]) + ")");
    r.check(f.vector == Vector<Rational>{0, q * E0, 0, 0}, "rest-charge force is the spatial vector q E0 d/dx");
    return r;
}

using DemoFn = std::function<DemoResult()>;

inline const std::map<std::string, DemoFn>& registry() {
    static const std::map<std::string, DemoFn> table = {
        {"stokes-disk-minus7", [] { return stokes_disk_minus7(); }},
        {"identity-suite", [] { return identity_suite(); }},
        {"annulus-hole", [] { return annulus_hole(); }},
        {"torus-betti", [] { return torus_betti(); }},
        {"mobius-twisted-only", [] { return mobius_twisted_only(); }},
        {"ffwedge-4d", [] { return ffwedge_4d(); }},
        {"gauss-point-charge", [] { return gauss_point_charge(); }},
        {"ampere-wire", [] { return ampere_wire(); }},
        {"plane-wave", [] { return plane_wave(); }},
        {"metric-suite", [] { return metric_suite(); }},
        {"lorentz-rest-charge", [] { return lorentz_rest_charge(); }},
    };
    return table;
}

/// Runs a demo by id and records its wall time.
inline DemoResult run(const std::string& id) {
    const auto& table = registry();
    auto it = table.find(id);
    if (it == table.end()) throw std::invalid_argument("unknown demo '" + id + "'");
    const auto t0 = std::chrono::steady_clock::now();
    DemoResult r = it->second();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace extcalc::demos
