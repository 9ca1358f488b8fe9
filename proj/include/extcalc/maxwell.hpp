#pragma once

// Electromagnetism on rectilinear grids in the language of forms.
//
// Space (3-dim): E is a straight 1-form on primal edges, B a straight 2-form on
// primal faces, D a twisted 2-form on dual faces (one per primal edge), H a
// twisted 1-form on dual edges (one per primal face), rho a twisted 3-form on
// dual cells (one per primal vertex) and J a twisted 2-form on dual faces.
// Dual cochains are indexed by their primal partners.  With d0, d1, d2 the
// primal coboundaries the equations read
//
//   dB = d2 B = 0,   dE = -dB/dt        (Faraday)
//   div D = -d0^T D = rho               (Gauss)
//   d1^T H = J + dD/dt                   (Ampere-Maxwell)
//   D = eps * E,  H = nu * B             (diagonal Hodge stars)

#include "cubical.hpp"
#include "metric.hpp"
#include "parity.hpp"
#include "poly_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace extcalc::maxwell {

class MaxwellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// The field dictionary.

enum class Home { Space, Spacetime };

inline std::string to_string(Home h) { return h == Home::Space ? "space" : "spacetime"; }

struct FieldDictionaryEntry {
    std::string name;
    int degree;
    Parity parity;
    Home home;
};

inline const std::vector<FieldDictionaryEntry>& field_dictionary() {
    static const std::vector<FieldDictionaryEntry> table = {
        {"E", 1, Parity::Straight, Home::Space},      {"D", 2, Parity::Twisted, Home::Space},
        {"B", 2, Parity::Straight, Home::Space},      {"H", 1, Parity::Twisted, Home::Space},
        {"rho", 3, Parity::Twisted, Home::Space},     {"J", 2, Parity::Twisted, Home::Space},
        {"F", 2, Parity::Straight, Home::Spacetime},  {"Hcal", 2, Parity::Twisted, Home::Spacetime},
        {"Jcal", 3, Parity::Twisted, Home::Spacetime},
    };
    return table;
}

struct LabeledField {
    std::string name;
    int degree;
    Parity parity;
    Home home;
};

/// Lists every field whose degree, parity or home disagrees with the dictionary.
inline std::vector<std::string> validate_dictionary(const std::vector<LabeledField>& bundle) {
    std::vector<std::string> violations;
    for (const auto& f : bundle) {
        const auto& table = field_dictionary();
        auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.name == f.name; });
        if (it == table.end()) {
            violations.push_back(f.name + ": not an electromagnetic field");
            continue;
        }
        auto describe = [](int deg, Parity p, Home h) {
            return to_string(p) + " " + std::to_string(deg) + "-form in " + to_string(h);
        };
        if (it->degree != f.degree || it->parity != f.parity || it->home != f.home)
            violations.push_back(f.name + ": expected " + describe(it->degree, it->parity, it->home) + ", got " +
                                 describe(f.degree, f.parity, f.home));
    }
    return violations;
}

// ---------------------------------------------------------------------------
// Grid, materials and Hodge stars.

struct Vec3 {
    double x = 0, y = 0, z = 0;
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

class YeeGrid {
public:
    YeeGrid(std::array<int, 3> cells, std::array<double, 3> spacing, std::array<bool, 3> periodic = {false, false, false})
        : grid_({cells[0], cells[1], cells[2]}, {periodic[0], periodic[1], periodic[2]}), h_(spacing), periodic_(periodic) {
        for (double h : h_)
            if (!(h > 0.0)) throw MaxwellError("grid spacings must be positive");
        d_.reserve(3);
        for (int k = 0; k < 3; ++k) d_.emplace_back(grid_, k);
        eps_.assign(cell_count(), 1.0);
        mu_.assign(cell_count(), 1.0);
        rebuild_hodge();
    }

    const CubicalGrid& grid() const { return grid_; }
    const SparseCoboundary& d(int k) const { return d_.at(k); }
    double spacing(int a) const { return h_[a]; }
    int cells(int a) const { return grid_.cells(a); }
    bool periodic(int a) const { return periodic_[a]; }
    long count(int k) const { return grid_.count(k); }
    long cell_count() const { return grid_.count(3); }

    long vertex(int i, int j, int k) const { return grid_.index(0u, {i, j, k}); }
    long edge(int axis, int i, int j, int k) const { return grid_.index(1u << axis, {i, j, k}); }
    long face(int normal_axis, int i, int j, int k) const { return grid_.index(7u & ~(1u << normal_axis), {i, j, k}); }
    long cell(int i, int j, int k) const { return grid_.index(7u, {i, j, k}); }

    /// Per-cell permittivity and permeability; both must be positive.
    void set_materials(std::vector<double> eps, std::vector<double> mu) {
        if (static_cast<long>(eps.size()) != cell_count() || static_cast<long>(mu.size()) != cell_count())
            throw MaxwellError("one material value per cell expected");
        for (size_t i = 0; i < eps.size(); ++i)
            if (!(eps[i] > 0.0) || !(mu[i] > 0.0)) throw MaxwellError("material map must be positive");
        eps_ = std::move(eps);
        mu_ = std::move(mu);
        rebuild_hodge();
    }

    void set_uniform_materials(double eps, double mu) {
        set_materials(std::vector<double>(cell_count(), eps), std::vector<double>(cell_count(), mu));
    }

    double eps(long c) const { return eps_.at(c); }
    double mu(long c) const { return mu_.at(c); }

    /// D = eps_star[e] * E on each edge.
    const std::vector<double>& eps_star() const { return eps_star_; }
    /// H = nu_star[f] * B on each face.
    const std::vector<double>& nu_star() const { return nu_star_; }

    double max_wave_speed() const {
        double c = 0.0;
        for (long i = 0; i < cell_count(); ++i) c = std::max(c, 1.0 / std::sqrt(eps_[i] * mu_[i]));
        return c;
    }

    /// Largest stable leapfrog step; axes with a single periodic cell carry no variation.
    double cfl_limit() const {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            if (!(periodic_[a] && cells(a) == 1)) s += 1.0 / (h_[a] * h_[a]);
        if (s == 0.0) return std::numeric_limits<double>::infinity();
        return 1.0 / (max_wave_speed() * std::sqrt(s));
    }

    /// Physical centre of a cell or the position of a vertex.
    Vec3 vertex_position(int i, int j, int k) const { return {i * h_[0], j * h_[1], k * h_[2]}; }

private:
    // Cells adjacent to a lower-dimensional cell: vary each transverse axis by 0
    // or -1.  On a periodic axis with one cell both choices are the same cell,
    // which then correctly counts twice.
    template <class F>
    void for_adjacent_cells(const CubicalGrid::Cell& c, F&& f) const {
        std::vector<int> transverse;
        for (int a = 0; a < 3; ++a)
            if (!(c.mask >> a & 1u)) transverse.push_back(a);
        const int m = static_cast<int>(transverse.size());
        for (int bits = 0; bits < (1 << m); ++bits) {
            auto p = c.pos;
            for (int t = 0; t < m; ++t)
                if (bits >> t & 1) --p[transverse[t]];
            const long idx = grid_.index(7u, p);
            if (idx >= 0) f(idx);
        }
    }

    void rebuild_hodge() {
        eps_star_.assign(count(1), 0.0);
        for (long e = 0; e < count(1); ++e) {
            const auto c = grid_.cell(1, e);
            int axis = 0;
            while (!(c.mask >> axis & 1u)) ++axis;
            // Each adjacent cell contributes a quarter of the dual face.
            double quarter = 1.0;
            for (int a = 0; a < 3; ++a)
                if (a != axis) quarter *= 0.5 * h_[a];
            double total = 0.0;
            for_adjacent_cells(c, [&](long cell) { total += eps_[cell] * quarter; });
            eps_star_[e] = total / h_[axis];
        }
        nu_star_.assign(count(2), 0.0);
        for (long f = 0; f < count(2); ++f) {
            const auto c = grid_.cell(2, f);
            int normal = 0;
            while (c.mask >> normal & 1u) ++normal;
            double area = 1.0;
            for (int a = 0; a < 3; ++a)
                if (a != normal) area *= h_[a];
            double total = 0.0;
            for_adjacent_cells(c, [&](long cell) { total += 0.5 * h_[normal] / mu_[cell]; });
            nu_star_[f] = total / area;
        }
    }

    CubicalGrid grid_;
    std::array<double, 3> h_;
    std::array<bool, 3> periodic_;
    std::vector<SparseCoboundary> d_;
    std::vector<double> eps_, mu_;
    std::vector<double> eps_star_, nu_star_;
};

// ---------------------------------------------------------------------------
// Conjugate gradients on a symmetric positive (semi)definite operator.

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

inline SolveReport conjugate_gradient(const std::function<void(const std::vector<double>&, std::vector<double>&)>& A,
                                      const std::vector<double>& b, std::vector<double>& x, double tol = 1e-10,
                                      int max_iter = 20000) {
    const size_t n = b.size();
    x.assign(n, 0.0);
    auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return s;
    };
    const double bnorm = std::sqrt(dot(b, b));
    SolveReport rep;
    if (bnorm == 0.0) {
        rep.converged = true;
        return rep;
    }
    std::vector<double> r = b, p = b, Ap;
    double rr = dot(r, r);
    for (rep.iterations = 0; rep.iterations < max_iter; ++rep.iterations) {
        rep.relative_residual = std::sqrt(rr) / bnorm;
        if (rep.relative_residual <= tol) {
            rep.converged = true;
            break;
        }
        A(p, Ap);
        const double pAp = dot(p, Ap);
        if (pAp <= 0.0) break;
        const double alpha = rr / pAp;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    // Report the true residual, not the recursively updated one.
    A(x, Ap);
    double res = 0.0;
    for (size_t i = 0; i < n; ++i) res += (b[i] - Ap[i]) * (b[i] - Ap[i]);
    rep.relative_residual = std::sqrt(res) / bnorm;
    rep.converged = rep.relative_residual <= tol * 10;
    return rep;
}

// ---------------------------------------------------------------------------
// Electrostatics.

enum class Boundary { Grounded, Periodic };

struct ElectrostaticSolution {
    std::vector<double> phi;  // vertices
    std::vector<double> E;    // primal edges
    std::vector<double> D;    // dual faces
    SolveReport solve;
};

/// Solves -d0^T (eps * (-d0 phi)) = rho for the potential, with phi = 0 on the
/// box boundary (grounded) or on a fully periodic grid (zero net charge).
inline ElectrostaticSolution solve_electrostatics(const YeeGrid& G, const std::vector<double>& rho,
                                                  Boundary bc = Boundary::Grounded, double tol = 1e-10) {
    if (static_cast<long>(rho.size()) != G.count(0)) throw MaxwellError("one charge per vertex expected");
    std::vector<char> fixed(G.count(0), 0);
    if (bc == Boundary::Grounded) {
        for (int a = 0; a < 3; ++a)
            if (G.periodic(a)) throw MaxwellError("grounded boundary needs non-periodic axes");
        for (long v = 0; v < G.count(0); ++v) {
            const auto c = G.grid().cell(0, v);
            for (int a = 0; a < 3; ++a)
                if (c.pos[a] == 0 || c.pos[a] == G.cells(a)) fixed[v] = 1;
        }
        for (long v = 0; v < G.count(0); ++v)
            if (fixed[v] && rho[v] != 0.0) throw MaxwellError("charge placed on the grounded boundary");
    } else {
        for (int a = 0; a < 3; ++a)
            if (!G.periodic(a)) throw MaxwellError("periodic boundary needs periodic axes");
        const double total = std::accumulate(rho.begin(), rho.end(), 0.0);
        double scale = 0.0;
        for (double r : rho) scale += std::abs(r);
        if (std::abs(total) > 1e-12 * std::max(1.0, scale))
            throw MaxwellError("incompatible charge: periodic problems need zero net charge");
    }
    const auto& d0 = G.d(0);
    const auto& eps = G.eps_star();
    auto op = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::vector<double> tmp;
        d0.apply(x, tmp);
        for (size_t e = 0; e < tmp.size(); ++e) tmp[e] *= eps[e];
        d0.apply_transpose(tmp, y);
        for (size_t v = 0; v < y.size(); ++v)
            if (fixed[v]) y[v] = 0.0;
    };
    std::vector<double> b = rho;
    for (size_t v = 0; v < b.size(); ++v)
        if (fixed[v]) b[v] = 0.0;
    ElectrostaticSolution sol;
    sol.solve = conjugate_gradient(op, b, sol.phi, tol);
    if (!sol.solve.converged)
        throw MaxwellError("electrostatic solve did not converge (residual " + std::to_string(sol.solve.relative_residual) + ")");
    d0.apply(sol.phi, sol.E);
    for (auto& e : sol.E) e = -e;
    sol.D.resize(sol.E.size());
    for (size_t e = 0; e < sol.E.size(); ++e) sol.D[e] = eps[e] * sol.E[e];
    return sol;
}

/// Box of vertices lo..hi (inclusive) on a grid.
struct VertexBox {
    std::array<int, 3> lo;
    std::array<int, 3> hi;
    bool contains(const std::vector<int>& p) const {
        for (int a = 0; a < 3; ++a)
            if (p[a] < lo[a] || p[a] > hi[a]) return false;
        return true;
    }
};

/// Outward flux of a dual 2-cochain through the closed dual surface around a
/// box of vertices: the sum over edges leaving the box.
inline double flux_through_box(const YeeGrid& G, const std::vector<double>& D, const VertexBox& box) {
    double flux = 0.0;
    for (long e = 0; e < G.count(1); ++e) {
        const auto c = G.grid().cell(1, e);
        int axis = 0;
        while (!(c.mask >> axis & 1u)) ++axis;
        auto tail = c.pos, head = c.pos;
        ++head[axis];
        if (G.periodic(axis)) head[axis] %= G.cells(axis);
        const bool t_in = box.contains(tail), h_in = box.contains(head);
        if (t_in && !h_in) flux += D[e];
        else if (!t_in && h_in) flux -= D[e];
    }
    return flux;
}

/// Total charge on the vertices of a box.
inline double charge_in_box(const YeeGrid& G, const std::vector<double>& rho, const VertexBox& box) {
    double q = 0.0;
    for (long v = 0; v < G.count(0); ++v)
        if (box.contains(G.grid().cell(0, v).pos)) q += rho[v];
    return q;
}

/// Gauss residual div D - rho on each dual cell.
inline std::vector<double> gauss_residual(const YeeGrid& G, const std::vector<double>& D, const std::vector<double>& rho) {
    std::vector<double> div;
    G.d(0).apply_transpose(D, div);
    for (size_t v = 0; v < div.size(); ++v) div[v] = -div[v] - rho[v];
    return div;
}

// ---------------------------------------------------------------------------
// Magnetostatics.

struct MagnetostaticSolution {
    std::vector<double> A;  // primal edges
    std::vector<double> B;  // primal faces
    std::vector<double> H;  // dual edges
    SolveReport solve;
};

/// Edges lying in a non-periodic wall plane parallel to them: tangential A = 0 there.
inline std::vector<char> wall_tangential_edges(const YeeGrid& G) {
    std::vector<char> fixed(G.count(1), 0);
    for (long e = 0; e < G.count(1); ++e) {
        const auto c = G.grid().cell(1, e);
        for (int a = 0; a < 3; ++a)
            if (!(c.mask >> a & 1u) && !G.periodic(a) && (c.pos[a] == 0 || c.pos[a] == G.cells(a))) fixed[e] = 1;
    }
    return fixed;
}

/// Solves d1^T (nu * d1 A) = J with tangential A = 0 on the walls and returns
/// B = dA and H = nu B.  The current must satisfy the discrete continuity
/// equation d0^T J = 0 away from the walls.
inline MagnetostaticSolution solve_magnetostatics(const YeeGrid& G, const std::vector<double>& J, double tol = 1e-10) {
    if (static_cast<long>(J.size()) != G.count(1)) throw MaxwellError("one current value per edge expected");
    const auto fixed = wall_tangential_edges(G);
    std::vector<double> Jf = J;
    for (size_t e = 0; e < Jf.size(); ++e)
        if (fixed[e]) Jf[e] = 0.0;
    {
        std::vector<double> div;
        G.d(0).apply_transpose(Jf, div);
        double scale = 0.0;
        for (double j : Jf) scale = std::max(scale, std::abs(j));
        for (long v = 0; v < G.count(0); ++v) {
            const auto c = G.grid().cell(0, v);
            bool on_wall = false;
            for (int a = 0; a < 3; ++a)
                if (!G.periodic(a) && (c.pos[a] == 0 || c.pos[a] == G.cells(a))) on_wall = true;
            if (!on_wall && std::abs(div[v]) > 1e-12 * std::max(1.0, scale))
                throw MaxwellError("current is not conserved (dJ != 0 at vertex " + std::to_string(v) + ")");
        }
    }
    const auto& d1 = G.d(1);
    const auto& nu = G.nu_star();
    auto op = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::vector<double> tmp;
        d1.apply(x, tmp);
        for (size_t f = 0; f < tmp.size(); ++f) tmp[f] *= nu[f];
        d1.apply_transpose(tmp, y);
        for (size_t e = 0; e < y.size(); ++e)
            if (fixed[e]) y[e] = 0.0;
    };
    MagnetostaticSolution sol;
    sol.solve = conjugate_gradient(op, Jf, sol.A, tol);
    if (!sol.solve.converged)
        throw MaxwellError("magnetostatic solve did not converge (residual " + std::to_string(sol.solve.relative_residual) + ")");
    d1.apply(sol.A, sol.B);
    sol.H.resize(sol.B.size());
    for (size_t f = 0; f < sol.B.size(); ++f) sol.H[f] = nu[f] * sol.B[f];
    return sol;
}

/// Straight wire along z through vertex column (i, j) carrying current I.
inline std::vector<double> wire_current(const YeeGrid& G, int i, int j, double I) {
    std::vector<double> J(G.count(1), 0.0);
    for (int k = 0; k < G.cells(2); ++k) J[G.edge(2, i, j, k)] = I;
    return J;
}

/// Circulation of H around the dual loop bounding the dual surface made of the
/// dual faces of z-edges (i, j, k) with i0 <= i <= i1, j0 <= j <= j1.
/// The loop lies in the plane z = k + 1/2 and runs through cell centres.
inline double circulation_around(const YeeGrid& G, const std::vector<double>& H, int i0, int i1, int j0, int j1, int k) {
    std::vector<double> surface(G.count(1), 0.0);
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) surface[G.edge(2, i, j, k)] = 1.0;
    // The loop is the dual boundary of the surface: coefficients d1(surface) on faces.
    std::vector<double> loop;
    G.d(1).apply(surface, loop);
    double c = 0.0;
    for (size_t f = 0; f < loop.size(); ++f) c += loop[f] * H[f];
    return c;
}

/// Current through the same dual surface.
inline double current_through(const YeeGrid& G, const std::vector<double>& J, int i0, int i1, int j0, int j1, int k) {
    double s = 0.0;
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) s += J[G.edge(2, i, j, k)];
    return s;
}

// ---------------------------------------------------------------------------
// Time evolution.

struct EMState {
    std::vector<double> E;    // edges, time n
    std::vector<double> D;    // dual faces, time n
    std::vector<double> B;    // faces, time n - 1/2
    std::vector<double> rho;  // vertices, time n
    double time = 0.0;

    static EMState zeros(const YeeGrid& G) {
        return {std::vector<double>(G.count(1), 0.0), std::vector<double>(G.count(1), 0.0),
                std::vector<double>(G.count(2), 0.0), std::vector<double>(G.count(0), 0.0), 0.0};
    }
};

struct StepDiagnostics {
    double max_divB = 0.0;       // max |d2 B| after the step
    double max_B = 0.0;          // field scale
    double energy = 0.0;         // 1/2 (E.D + B.H) with B at the half step
};

class Leapfrog {
public:
    Leapfrog(const YeeGrid& G, double dt) : G_(G), dt_(dt) {
        if (!(dt > 0.0)) throw MaxwellError("time step must be positive");
        if (dt > G.cfl_limit() * (1 + 1e-12))
            throw MaxwellError("CFL violation: dt = " + std::to_string(dt) + " exceeds " + std::to_string(G.cfl_limit()));
        pec_ = wall_tangential_edges(G);
    }

    double dt() const { return dt_; }

    /// Advances (E, D) from n to n+1 and B from n-1/2 to n+1/2, driven by the
    /// current J at n+1/2 (on dual faces) which also updates rho.
    StepDiagnostics step(EMState& s, const std::vector<double>* J = nullptr) const {
        const auto& d1 = G_.d(1);
        std::vector<double> curlE, curlH;
        d1.apply(s.E, curlE);
        for (size_t f = 0; f < s.B.size(); ++f) s.B[f] -= dt_ * curlE[f];
        std::vector<double> H(s.B.size());
        for (size_t f = 0; f < H.size(); ++f) H[f] = G_.nu_star()[f] * s.B[f];
        d1.apply_transpose(H, curlH);
        for (size_t e = 0; e < s.D.size(); ++e) {
            double rhs = curlH[e];
            if (J) rhs -= (*J)[e];
            s.D[e] += dt_ * rhs;
            s.E[e] = pec_[e] ? 0.0 : s.D[e] / G_.eps_star()[e];
            if (pec_[e]) s.D[e] = 0.0;
        }
        if (J) {
            std::vector<double> divJ;
            G_.d(0).apply_transpose(*J, divJ);
            for (size_t v = 0; v < s.rho.size(); ++v) s.rho[v] += dt_ * divJ[v];
        }
        s.time += dt_;
        StepDiagnostics diag;
        std::vector<double> divB;
        G_.d(2).apply(s.B, divB);
        for (double x : divB) diag.max_divB = std::max(diag.max_divB, std::abs(x));
        for (double x : s.B) diag.max_B = std::max(diag.max_B, std::abs(x));
        double e = 0.0;
        for (size_t i = 0; i < s.E.size(); ++i) e += s.E[i] * s.D[i];
        for (size_t f = 0; f < H.size(); ++f) e += s.B[f] * H[f];
        diag.energy = 0.5 * e;
        return diag;
    }

private:
    const YeeGrid& G_;
    double dt_;
    std::vector<char> pec_;
};

// ---------------------------------------------------------------------------
// Plane wave on a periodic 1+1 grid (x varying, one cell in y and z).

struct PlaneWaveResult {
    int cells = 0;
    double l2_error = 0.0;
    double max_divB_relative = 0.0;
    double energy_drift = 0.0;
};

/// Right-moving wave E_y = B_z = sin(2 pi (x - t)/L) with c = 1.  Initial data
/// are exact integrals over edges (time 0) and faces (time -dt/2).
inline PlaneWaveResult plane_wave(int n, double cfl = 0.5, double t_end = 1.0) {
    const double L = 1.0, h = L / n;
    YeeGrid G({n, 1, 1}, {h, h, h}, {true, true, true});
    const double dt_nominal = cfl * h;
    const int steps = static_cast<int>(std::ceil(t_end / dt_nominal - 1e-9));
    const double dt = t_end / steps;
    Leapfrog stepper(G, dt);
    const double k = 2 * std::numbers::pi / L;
    EMState s = EMState::zeros(G);
    for (int i = 0; i < n; ++i) {
        s.E[G.edge(1, i, 0, 0)] = h * std::sin(k * i * h);
        s.D[G.edge(1, i, 0, 0)] = G.eps_star()[G.edge(1, i, 0, 0)] * s.E[G.edge(1, i, 0, 0)];
        // B_z through the xy-face [x_i, x_i+1] x [0, h] at t = -dt/2.
        const double t = -0.5 * dt;
        const double integral = (std::cos(k * (i * h - t)) - std::cos(k * ((i + 1) * h - t))) / k;
        s.B[G.face(2, i, 0, 0)] = h * integral;
    }
    PlaneWaveResult r;
    r.cells = n;
    double e0 = 0.0;
    for (int st = 0; st < steps; ++st) {
        const auto diag = stepper.step(s);
        if (diag.max_B > 0) r.max_divB_relative = std::max(r.max_divB_relative, diag.max_divB / diag.max_B);
        if (st == 0) e0 = diag.energy;
        else r.energy_drift = std::max(r.energy_drift, std::abs(diag.energy - e0) / e0);
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const double exact = h * std::sin(k * (i * h - s.time));
        const double diff = s.E[G.edge(1, i, 0, 0)] - exact;
        err += diff * diff / (h * h) * h;
    }
    r.l2_error = std::sqrt(err / L);
    return r;
}

// ---------------------------------------------------------------------------
// Charge-conserving deposition of point charges.

/// Cloud-in-cell charge of a point charge at position x on the vertices.
inline void deposit_charge(const YeeGrid& G, double q, Vec3 x, std::vector<double>& rho) {
    int base[3];
    double w[3];
    for (int a = 0; a < 3; ++a) {
        const double u = x[a] / G.spacing(a);
        base[a] = static_cast<int>(std::floor(u));
        w[a] = u - base[a];
    }
    for (int c = 0; c < 8; ++c) {
        double weight = 1.0;
        std::vector<int> p(3);
        for (int a = 0; a < 3; ++a) {
            const int up = c >> a & 1;
            weight *= up ? w[a] : 1.0 - w[a];
            p[a] = base[a] + up;
        }
        const long v = G.grid().index(0u, p);
        if (v < 0) throw MaxwellError("particle left the grid");
        rho[v] += q * weight;
    }
}

namespace detail {

// Current of a straight move that stays inside one cell, exactly consistent
// with cloud-in-cell charge (trilinear weights need the cross terms).
inline void deposit_segment(const YeeGrid& G, double q, const Vec3& a, const Vec3& b, double dt, std::vector<double>& J) {
    int base[3];
    double wa[3], wb[3], mid[3], delta[3];
    for (int ax = 0; ax < 3; ++ax) {
        const double ua = a[ax] / G.spacing(ax), ub = b[ax] / G.spacing(ax);
        base[ax] = static_cast<int>(std::floor(std::min(ua, ub)));
        if (std::max(ua, ub) - base[ax] > 1.0 + 1e-12) throw MaxwellError("segment leaves its cell");
        wa[ax] = ua - base[ax];
        wb[ax] = ub - base[ax];
        mid[ax] = 0.5 * (wa[ax] + wb[ax]);
        delta[ax] = wb[ax] - wa[ax];
    }
    for (int ax = 0; ax < 3; ++ax) {
        if (delta[ax] == 0.0) continue;
        const int p1 = (ax + 1) % 3, p2 = (ax + 2) % 3;
        const double cross = delta[p1] * delta[p2] / 12.0;
        for (int c = 0; c < 4; ++c) {
            const int u1 = c & 1, u2 = c >> 1 & 1;
            const double w1 = u1 ? mid[p1] : 1.0 - mid[p1];
            const double w2 = u2 ? mid[p2] : 1.0 - mid[p2];
            const double weight = w1 * w2 + ((u1 == u2) ? cross : -cross);
            std::vector<int> pos(3);
            pos[ax] = base[ax];
            pos[p1] = base[p1] + u1;
            pos[p2] = base[p2] + u2;
            const long e = G.grid().index(1u << ax, pos);
            if (e < 0) throw MaxwellError("particle left the grid");
            J[e] += q * delta[ax] * weight / dt;
        }
    }
}

}  // namespace detail

/// Current of a point charge moving from x1 to x2 during dt, on dual faces.
/// The move is split at a relay point so each piece stays in one cell
/// (zig-zag scheme); the result satisfies rho(x2) - rho(x1) = dt d0^T J
/// exactly up to round-off.  Moves must be shorter than one cell per axis.
inline void deposit_current(const YeeGrid& G, double q, Vec3 x1, Vec3 x2, double dt, std::vector<double>& J) {
    Vec3 relay;
    for (int a = 0; a < 3; ++a) {
        const double h = G.spacing(a);
        if (std::abs(x2[a] - x1[a]) >= h) throw MaxwellError("particle moved a full cell in one step");
        const double i1 = std::floor(x1[a] / h), i2 = std::floor(x2[a] / h);
        relay[a] = std::min(std::min(i1, i2) * h + h, std::max(std::max(i1, i2) * h, 0.5 * (x1[a] + x2[a])));
    }
    detail::deposit_segment(G, q, x1, relay, dt, J);
    detail::deposit_segment(G, q, relay, x2, dt, J);
}

struct ContinuityResult {
    int steps = 0;
    double max_gauss_drift = 0.0;      // max over steps of |residual_n - residual_0|
    double max_continuity_error = 0.0; // max |rho_cic(n+1) - rho_cic(n) - dt d0^T J|
    double max_divB_relative = 0.0;
};

/// Runs a charge on a prescribed closed orbit through a periodic grid for
/// `steps` steps, depositing its current, and tracks the Gauss residual.
inline ContinuityResult continuity_run(int n = 8, int steps = 10000, double q = 1.0) {
    const double h = 1.0;
    YeeGrid G({n, n, n}, {h, h, h}, {true, true, true});
    const double dt = 0.5 * G.cfl_limit();
    Leapfrog stepper(G, dt);
    const double L = n * h;
    auto orbit = [&](double t) {
        const double w = 0.37;
        Vec3 p{0.5 * L + 0.31 * L * std::cos(w * t), 0.5 * L + 0.27 * L * std::sin(w * t), 0.5 * L + 0.2 * L * std::sin(0.5 * w * t) + 0.013 * t};
        auto wrap = [&](double x) { return x - L * std::floor(x / L); };
        return Vec3{wrap(p.x), wrap(p.y), wrap(p.z)};
    };
    auto unwrap_near = [&](Vec3 from, Vec3 to) {
        for (int a = 0; a < 3; ++a) {
            while (to[a] - from[a] > 0.5 * L) to[a] -= L;
            while (to[a] - from[a] < -0.5 * L) to[a] += L;
        }
        return to;
    };
    auto wrap_pos = [&](Vec3 p) {
        for (int a = 0; a < 3; ++a) p[a] -= L * std::floor(p[a] / L);
        return p;
    };
    EMState s = EMState::zeros(G);
    deposit_charge(G, q, orbit(0.0), s.rho);
    const auto r0 = gauss_residual(G, s.D, s.rho);
    ContinuityResult res;
    res.steps = steps;
    for (int st = 0; st < steps; ++st) {
        const Vec3 a = orbit(st * dt);
        Vec3 b = unwrap_near(a, orbit((st + 1) * dt));
        std::vector<double> J(G.count(1), 0.0);
        deposit_current(G, q, a, b, dt, J);
        const auto diag = stepper.step(s, &J);
        if (diag.max_B > 0) res.max_divB_relative = std::max(res.max_divB_relative, diag.max_divB / diag.max_B);
        std::vector<double> cic(G.count(0), 0.0);
        deposit_charge(G, q, wrap_pos(b), cic);
        for (size_t v = 0; v < cic.size(); ++v)
            res.max_continuity_error = std::max(res.max_continuity_error, std::abs(cic[v] - s.rho[v]));
        const auto r = gauss_residual(G, s.D, s.rho);
        for (size_t v = 0; v < r.size(); ++v) res.max_gauss_drift = std::max(res.max_gauss_drift, std::abs(r[v] - r0[v]));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Lorentz force.

template <class S>
struct LorentzForce {
    Vector<S> covector;  // f_a = q F(e_a, V)
    Vector<S> vector;    // metric sharp of the covector
};

/// Force on a charge q with unit timelike 4-velocity V in the field F (an
/// antisymmetric component matrix F[a][b] = F(e_a, e_b)).  The covector is
/// q F(., V); it annihilates V because F is antisymmetric.
template <class S>
LorentzForce<S> lorentz_force(const S& q, const Vector<S>& V, const Matrix<S>& F, const BasicMetric<S>& g, double tol = 1e-9) {
    const int n = g.dim();
    if (static_cast<int>(V.size()) != n || static_cast<int>(F.size()) != n) throw MaxwellError("dimension mismatch");
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(F[a].size()) != n) throw MaxwellError("F must be square");
        for (int b = 0; b < n; ++b)
            if (!ScalarTraits<S>::is_zero(F[a][b] + F[b][a], tol)) throw MaxwellError("F must be antisymmetric");
    }
    const S vv = g.inner(V, V);
    if (!(vv < S(0))) throw MaxwellError("4-velocity must be timelike");
    if (!ScalarTraits<S>::is_zero(vv + S(1), tol)) throw MaxwellError("4-velocity must be unit (g(V, V) = -1)");
    LorentzForce<S> out;
    out.covector.assign(n, S(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.covector[a] += q * F[a][b] * V[b];
    out.vector = g.sharp(out.covector);
    return out;
}

/// Component matrix of a constant 2-form.
inline Matrix<Rational> two_form_matrix(const PolyForm& F) {
    if (F.degree() != 2) throw MaxwellError("expected a 2-form");
    const int n = F.ambient_dim();
    Matrix<Rational> m(n, Vector<Rational>(n, Rational(0)));
    for (const auto& [I, c] : F.terms()) {
        if (!c.is_constant()) throw MaxwellError("F must be evaluated at a point (constant coefficients)");
        m[I[0]][I[1]] = c.constant_term();
        m[I[1]][I[0]] = -c.constant_term();
    }
    return m;
}

// ---------------------------------------------------------------------------
// Spacetime charge conservation on a rectilinear grid (axis 0 is time).

struct ConservationReport {
    bool closed = false;
    Rational initial_charge;
    Rational final_charge;
    Rational side_flux;
    Rational leak;  // initial - final - side
};

/// Region of top cells lo <= pos <= hi (inclusive).
struct CellBox {
    std::vector<int> lo;
    std::vector<int> hi;
    bool contains(const std::vector<int>& p) const {
        for (size_t a = 0; a < p.size(); ++a)
            if (p[a] < lo[a] || p[a] > hi[a]) return false;
        return true;
    }
};

/// Checks d Jcal = 0 and splits the flux of Jcal out of a space x time box into
/// the charge on the initial and final slices and the flux through the sides.
inline ConservationReport charge_conservation_check(const CubicalGrid& G, const std::vector<Rational>& Jcal, const CellBox& region) {
    const int n = G.dim();
    if (static_cast<long>(Jcal.size()) != G.count(n - 1)) throw MaxwellError("Jcal must be a top-minus-one cochain");
    ConservationReport rep;
    const auto dJ = G.d(n - 1, Jcal);
    rep.closed = std::all_of(dJ.begin(), dJ.end(), [](const Rational& x) { return sgn(x) == 0; });
    const unsigned full = (1u << n) - 1;
    for (long c = 0; c < G.count(n); ++c) {
        const auto cell = G.cell(n, c);
        if (!region.contains(cell.pos)) continue;
        int j = 0;
        for (int a = 0; a < n; ++a, ++j) {
            const int s = (j % 2 == 0) ? 1 : -1;
            const unsigned fm = full & ~(1u << a);
            for (int side = 0; side < 2; ++side) {
                auto nb = cell.pos;
                nb[a] += side == 0 ? 1 : -1;
                if (region.contains(nb)) continue;
                auto fpos = cell.pos;
                if (side == 0) ++fpos[a];
                const long f = G.index(fm, fpos);
                const Rational contrib = (side == 0 ? s : -s) * Jcal[f];
                if (a == 0) {
                    if (side == 0) rep.final_charge += Jcal[f];
                    else rep.initial_charge += Jcal[f];
                } else {
                    rep.side_flux += contrib;
                }
            }
        }
    }
    rep.leak = rep.initial_charge - rep.final_charge - rep.side_flux;
    return rep;
}

/// Current of a unit charge whose worldline visits the given sequence of
/// neighbouring top cells: +-1 on each crossed face, oriented so that the
/// worldline leaves one cell and enters the next.
inline std::vector<Rational> worldline_current(const CubicalGrid& G, const std::vector<std::vector<int>>& path) {
    const int n = G.dim();
    std::vector<Rational> J(G.count(n - 1), Rational(0));
    const unsigned full = (1u << n) - 1;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int axis = -1, dir = 0;
        for (int a = 0; a < n; ++a) {
            const int diff = path[i + 1][a] - path[i][a];
            if (diff == 0) continue;
            if (axis >= 0 || std::abs(diff) != 1) throw MaxwellError("worldline steps must cross one face");
            axis = a;
            dir = diff;
        }
        if (axis < 0) throw MaxwellError("worldline step does not move");
        const int s = (axis % 2 == 0) ? 1 : -1;
        auto fpos = path[i];
        if (dir > 0) ++fpos[axis];
        const long f = G.index(full & ~(1u << axis), fpos);
        if (f < 0) throw MaxwellError("worldline leaves the grid");
        J[f] += dir > 0 ? s : -s;
    }
    return J;
}

/// Restriction of a k-cochain on G to the slice {x_axis = position}.  Returns
/// the slice grid and the values; twisted forms are read with the transverse
/// direction +x_axis, which costs the sign of moving that axis last.
struct Slice {
    CubicalGrid grid;
    std::vector<Rational> values;
};

inline Slice restrict_to_slice(const CubicalGrid& G, int k, const std::vector<Rational>& w, int axis, int position, Parity parity) {
    const int n = G.dim();
    if (axis < 0 || axis >= n || n < 2) throw MaxwellError("bad slice axis");
    if (k > n - 1) throw MaxwellError("cochain degree too large for the slice");
    std::vector<int> cells;
    std::vector<bool> per;
    for (int a = 0; a < n; ++a)
        if (a != axis) {
            cells.push_back(G.cells(a));
            per.push_back(G.periodic(a));
        }
    Slice out{CubicalGrid(cells, per), {}};
    out.values.assign(out.grid.count(k), Rational(0));
    const int sign = (parity == Parity::Twisted && (n - 1 - axis) % 2 == 1) ? -1 : 1;
    for (long i = 0; i < out.grid.count(k); ++i) {
        const auto c = out.grid.cell(k, i);
        unsigned mask = 0;
        std::vector<int> pos(n);
        for (int a = 0, b = 0; a < n; ++a) {
            if (a == axis) {
                pos[a] = position;
                continue;
            }
            if (c.mask >> b & 1u) mask |= 1u << a;
            pos[a] = c.pos[b];
            ++b;
        }
        const long idx = G.index(mask, pos);
        if (idx < 0) throw MaxwellError("slice position outside the grid");
        out.values[i] = sign * w[idx];
    }
    return out;
}

}  // namespace extcalc::maxwell
