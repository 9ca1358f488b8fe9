#pragma once

// Field scenarios on a Yee grid, described in a plain key = value file:
//
//   kind      = static-e | static-b | evolve
//   cells     = nx ny nz
//   spacing   = hx hy hz               (default 1 1 1)
//   periodic  = px py pz               (0 or 1 each, default 0 0 0)
//   eps, mu   = background material    (default 1)
//   block     = i0 i1 j0 j1 k0 k1 eps mu   cells i0 <= i < i1 etc.
//   charge    = i j k q                point charge on a vertex
//   wire      = i j I                  z-directed line current at column (i, j)
//   particle  = x y z vx vy vz q       moving charge (evolve)
//   source    = none | plane-wave      initial field (evolve)
//   dt, steps                          time stepping (evolve)
//   tol                                linear solver tolerance (default 1e-10)
//   probe_box  = name i0 j0 k0 i1 j1 k1   closed dual surface around a vertex box
//   probe_loop = name i0 i1 j0 j1 k       dual loop around z-edges (i0..i1, j0..j1, k)
//
// Repeatable keys: block, charge, wire, particle, probe_box, probe_loop.

#include "maxwell.hpp"
#include "rational.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace extcalc::scenario {

struct Block {
    std::array<int, 6> range{};
    double eps = 1.0, mu = 1.0;
};

struct PointCharge {
    std::array<int, 3> vertex{};
    double q = 0.0;
};

struct Wire {
    int i = 0, j = 0;
    double current = 0.0;
};

struct Particle {
    maxwell::Vec3 position;
    maxwell::Vec3 velocity;
    double q = 0.0;
};

struct ProbeBox {
    std::string name;
    maxwell::VertexBox box;
};

struct ProbeLoop {
    std::string name;
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0, k = 0;
};

enum class Kind { StaticE, StaticB, Evolve };

struct Config {
    Kind kind = Kind::StaticE;
    std::array<int, 3> cells{};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<bool, 3> periodic{false, false, false};
    double eps = 1.0, mu = 1.0;
    std::vector<Block> blocks;
    std::vector<PointCharge> charges;
    std::vector<Wire> wires;
    std::vector<Particle> particles;
    std::string source = "none";
    double dt = 0.0;
    int steps = 0;
    double tol = 1e-10;
    std::vector<ProbeBox> boxes;
    std::vector<ProbeLoop> loops;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

inline double to_real(const std::string& t, int line) {
    try {
        size_t used = 0;
        const double v = std::stod(t, &used);
        if (used == t.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("bad number '" + t + "'", line);
}

inline int to_int(const std::string& t, int line) {
    try {
        size_t used = 0;
        const int v = std::stoi(t, &used);
        if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("bad integer '" + t + "'", line);
}

inline void expect_count(const std::vector<std::string>& v, size_t n, const std::string& key, int line) {
    if (v.size() != n) throw ParseError("'" + key + "' needs " + std::to_string(n) + " values, got " + std::to_string(v.size()), line);
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
    using detail::to_int;
    using detail::to_real;
    Config c;
    bool have_kind = false, have_cells = false;
    std::map<std::string, int> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
        const auto key_toks = detail::split_ws(raw.substr(0, eq));
        if (key_toks.size() != 1) throw ParseError("expected a single key before '='", line);
        const std::string key = key_toks[0];
        const auto v = detail::split_ws(raw.substr(eq + 1));
        static const std::vector<std::string> repeatable = {"block", "charge", "wire", "particle", "probe_box", "probe_loop"};
        const bool repeats = std::find(repeatable.begin(), repeatable.end(), key) != repeatable.end();
        if (!repeats && seen[key]++) throw ParseError("duplicate key '" + key + "'", line);
        if (key == "kind") {
            detail::expect_count(v, 1, key, line);
            if (v[0] == "static-e") c.kind = Kind::StaticE;
            else if (v[0] == "static-b") c.kind = Kind::StaticB;
            else if (v[0] == "evolve") c.kind = Kind::Evolve;
            else throw ParseError("unknown kind '" + v[0] + "'", line);
            have_kind = true;
        } else if (key == "cells") {
            detail::expect_count(v, 3, key, line);
            for (int a = 0; a < 3; ++a) {
                c.cells[a] = to_int(v[a], line);
                if (c.cells[a] < 1) throw ParseError("cell counts must be positive", line);
            }
            have_cells = true;
        } else if (key == "spacing") {
            detail::expect_count(v, 3, key, line);
            for (int a = 0; a < 3; ++a) {
                c.spacing[a] = to_real(v[a], line);
                if (!(c.spacing[a] > 0)) throw ParseError("spacings must be positive", line);
            }
        } else if (key == "periodic") {
            detail::expect_count(v, 3, key, line);
            for (int a = 0; a < 3; ++a) {
                const int p = to_int(v[a], line);
                if (p != 0 && p != 1) throw ParseError("periodic flags are 0 or 1", line);
                c.periodic[a] = p == 1;
            }
        } else if (key == "eps" || key == "mu") {
            detail::expect_count(v, 1, key, line);
            const double x = to_real(v[0], line);
            if (!(x > 0)) throw ParseError("'" + key + "' must be positive", line);
            (key == "eps" ? c.eps : c.mu) = x;
        } else if (key == "block") {
            detail::expect_count(v, 8, key, line);
            Block b;
            for (int i = 0; i < 6; ++i) b.range[i] = to_int(v[i], line);
            b.eps = to_real(v[6], line);
            b.mu = to_real(v[7], line);
            if (!(b.eps > 0) || !(b.mu > 0)) throw ParseError("block materials must be positive", line);
            c.blocks.push_back(b);
        } else if (key == "charge") {
            detail::expect_count(v, 4, key, line);
            c.charges.push_back({{to_int(v[0], line), to_int(v[1], line), to_int(v[2], line)}, to_real(v[3], line)});
        } else if (key == "wire") {
            detail::expect_count(v, 3, key, line);
            c.wires.push_back({to_int(v[0], line), to_int(v[1], line), to_real(v[2], line)});
        } else if (key == "particle") {
            detail::expect_count(v, 7, key, line);
            Particle p;
            for (int a = 0; a < 3; ++a) {
                p.position[a] = to_real(v[a], line);
                p.velocity[a] = to_real(v[3 + a], line);
            }
            p.q = to_real(v[6], line);
            c.particles.push_back(p);
        } else if (key == "source") {
            detail::expect_count(v, 1, key, line);
            if (v[0] != "none" && v[0] != "plane-wave") throw ParseError("unknown source '" + v[0] + "'", line);
            c.source = v[0];
        } else if (key == "dt") {
            detail::expect_count(v, 1, key, line);
            c.dt = to_real(v[0], line);
            if (!(c.dt > 0)) throw ParseError("dt must be positive", line);
        } else if (key == "steps") {
            detail::expect_count(v, 1, key, line);
            c.steps = to_int(v[0], line);
            if (c.steps < 0) throw ParseError("steps must be non-negative", line);
        } else if (key == "tol") {
            detail::expect_count(v, 1, key, line);
            c.tol = to_real(v[0], line);
            if (!(c.tol > 0)) throw ParseError("tol must be positive", line);
        } else if (key == "probe_box") {
            detail::expect_count(v, 7, key, line);
            ProbeBox p{v[0], {}};
            for (int a = 0; a < 3; ++a) {
                p.box.lo[a] = to_int(v[1 + a], line);
                p.box.hi[a] = to_int(v[4 + a], line);
                if (p.box.lo[a] > p.box.hi[a]) throw ParseError("probe box corners out of order", line);
            }
            c.boxes.push_back(p);
        } else if (key == "probe_loop") {
            detail::expect_count(v, 6, key, line);
            ProbeLoop p{v[0], to_int(v[1], line), to_int(v[2], line), to_int(v[3], line), to_int(v[4], line), to_int(v[5], line)};
            if (p.i0 > p.i1 || p.j0 > p.j1) throw ParseError("probe loop corners out of order", line);
            c.loops.push_back(p);
        } else {
            throw ParseError("unknown key '" + key + "'", line);
        }
    }
    if (!have_kind) throw ParseError("missing 'kind'", line);
    if (!have_cells) throw ParseError("missing 'cells'", line);
    if (c.kind == Kind::Evolve && c.dt == 0.0) throw ParseError("evolve scenarios need 'dt'", line);
    return c;
}

inline Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    return parse_config(in);
}

/// A CSV table with fixed number formatting, so reruns are byte-identical.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static std::string num(double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12e", x == 0.0 ? 0.0 : x);
        return buf;
    }

    void write(std::ostream& os) const {
        for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
    }
};

struct Outcome {
    bool passed = true;
    std::vector<std::string> messages;
    Table table;
    maxwell::YeeGrid grid{{1, 1, 1}, {1.0, 1.0, 1.0}};
    std::vector<double> vertex_field;  // potential or charge, for plots
    std::vector<double> edge_field;    // E or A, for plots

    void check(bool ok, const std::string& what) {
        messages.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
        passed = passed && ok;
    }
};

inline maxwell::YeeGrid build_grid(const Config& c) {
    maxwell::YeeGrid G(c.cells, c.spacing, c.periodic);
    std::vector<double> eps(G.cell_count(), c.eps), mu(G.cell_count(), c.mu);
    for (const auto& b : c.blocks)
        for (int i = std::max(0, b.range[0]); i < std::min(c.cells[0], b.range[1]); ++i)
            for (int j = std::max(0, b.range[2]); j < std::min(c.cells[1], b.range[3]); ++j)
                for (int k = std::max(0, b.range[4]); k < std::min(c.cells[2], b.range[5]); ++k) {
                    eps[G.cell(i, j, k)] = b.eps;
                    mu[G.cell(i, j, k)] = b.mu;
                }
    G.set_materials(eps, mu);
    return G;
}

inline std::vector<double> charge_density(const maxwell::YeeGrid& G, const Config& c) {
    std::vector<double> rho(G.count(0), 0.0);
    for (const auto& q : c.charges) {
        const long v = G.vertex(q.vertex[0], q.vertex[1], q.vertex[2]);
        if (v < 0) throw maxwell::MaxwellError("charge outside the grid");
        rho[v] += q.q;
    }
    return rho;
}

inline std::vector<double> wire_density(const maxwell::YeeGrid& G, const Config& c) {
    std::vector<double> J(G.count(1), 0.0);
    for (const auto& w : c.wires) {
        if (G.vertex(w.i, w.j, 0) < 0) throw maxwell::MaxwellError("wire outside the grid");
        const auto one = maxwell::wire_current(G, w.i, w.j, w.current);
        for (size_t e = 0; e < J.size(); ++e) J[e] += one[e];
    }
    return J;
}

inline Outcome run_static_e(const Config& c) {
    Outcome out;
    out.grid = build_grid(c);
    const auto& G = out.grid;
    const auto rho = charge_density(G, c);
    const bool periodic = c.periodic[0] && c.periodic[1] && c.periodic[2];
    const auto sol = maxwell::solve_electrostatics(G, rho, periodic ? maxwell::Boundary::Periodic : maxwell::Boundary::Grounded, c.tol);
    out.check(sol.solve.converged, "conjugate gradients: " + std::to_string(sol.solve.iterations) + " iterations, residual " +
                                       Table::num(sol.solve.relative_residual));
    double scale = 0.0;
    for (double q : rho) scale += std::abs(q);
    out.table.header = {"probe", "flux", "enclosed_charge", "difference"};
    for (const auto& p : c.boxes) {
        const double flux = maxwell::flux_through_box(G, sol.D, p.box);
        const double q = maxwell::charge_in_box(G, rho, p.box);
        out.table.rows.push_back({p.name, Table::num(flux), Table::num(q), Table::num(flux - q)});
        out.check(std::abs(flux - q) <= 0.01 * std::max(scale, 1e-300), "Gauss law on '" + p.name + "': flux " + Table::num(flux) +
                                                                          ", enclosed " + Table::num(q));
    }
    out.vertex_field = sol.phi;
    out.edge_field = sol.E;
    return out;
}

inline Outcome run_static_b(const Config& c) {
    Outcome out;
    out.grid = build_grid(c);
    const auto& G = out.grid;
    const auto J = wire_density(G, c);
    const auto sol = maxwell::solve_magnetostatics(G, J, c.tol);
    out.check(sol.solve.converged, "conjugate gradients: " + std::to_string(sol.solve.iterations) + " iterations, residual " +
                                       Table::num(sol.solve.relative_residual));
    double scale = 0.0;
    for (const auto& w : c.wires) scale += std::abs(w.current);
    out.table.header = {"probe", "circulation", "enclosed_current", "difference"};
    for (const auto& p : c.loops) {
        const double circ = maxwell::circulation_around(G, sol.H, p.i0, p.i1, p.j0, p.j1, p.k);
        const double I = maxwell::current_through(G, J, p.i0, p.i1, p.j0, p.j1, p.k);
        out.table.rows.push_back({p.name, Table::num(circ), Table::num(I), Table::num(circ - I)});
        out.check(std::abs(circ - I) <= 0.01 * std::max(scale, 1e-300), "Ampere law on '" + p.name + "': circulation " +
                                                                            Table::num(circ) + ", enclosed " + Table::num(I));
    }
    out.edge_field = sol.A;
    return out;
}

inline Outcome run_evolve(const Config& c) {
    using maxwell::Vec3;
    Outcome out;
    out.grid = build_grid(c);
    const auto& G = out.grid;
    maxwell::Leapfrog stepper(G, c.dt);
    auto s = maxwell::EMState::zeros(G);
    s.rho = charge_density(G, c);
    for (const auto& p : c.particles) maxwell::deposit_charge(G, p.q, p.position, s.rho);
    if (c.source == "plane-wave") {
        // y-polarised wave travelling along +x: E_y and B_z integrated over
        // edges at t = 0 and faces at t = -dt/2.
        const double L = c.cells[0] * c.spacing[0], hx = c.spacing[0], hy = c.spacing[1];
        const double k = 2 * std::numbers::pi / L, speed = G.max_wave_speed();
        for (int i = 0; i < G.grid().extent(0, 2u); ++i)
            for (int j = 0; j < G.grid().extent(1, 2u); ++j)
                for (int kk = 0; kk < G.grid().extent(2, 2u); ++kk) {
                    const long e = G.edge(1, i, j, kk);
                    if (e >= 0) s.E[e] = std::sin(k * i * hx) * hy;
                }
        for (int i = 0; i < G.cells(0); ++i)
            for (int j = 0; j < G.cells(1); ++j)
                for (int kk = 0; kk < G.grid().extent(2, 3u); ++kk) {
                    const long f = G.face(2, i, j, kk);
                    if (f < 0) continue;
                    const double t = -0.5 * c.dt;
                    // Exact cell average of sin(k (x - c t)) / c over [x_i, x_i + hx].
                    const double x0 = i * hx - speed * t;
                    s.B[f] = (std::cos(k * x0) - std::cos(k * (x0 + hx))) / (k * speed) * hy;
                }
        for (size_t e = 0; e < s.D.size(); ++e) s.D[e] = G.eps_star()[e] * s.E[e];
    }
    if (!c.charges.empty() || !c.particles.empty()) {
        // Start from the electrostatic field of the initial charges when possible.
        const bool periodic = c.periodic[0] && c.periodic[1] && c.periodic[2];
        double net = 0.0;
        for (double q : s.rho) net += q;
        if (!periodic || std::abs(net) < 1e-12) {
            const auto es = maxwell::solve_electrostatics(G, s.rho, periodic ? maxwell::Boundary::Periodic : maxwell::Boundary::Grounded, c.tol);
            for (size_t e = 0; e < s.E.size(); ++e) {
                s.E[e] += es.E[e];
                s.D[e] += es.D[e];
            }
        }
    }
    const auto J_wire = wire_density(G, c);
    const auto r0 = maxwell::gauss_residual(G, s.D, s.rho);
    auto particles = c.particles;
    out.table.header = {"step", "time", "energy", "max_divB_relative", "gauss_drift"};
    for (const auto& p : c.boxes) out.table.header.push_back("flux_" + p.name);
    for (const auto& p : c.loops) out.table.header.push_back("circulation_" + p.name);
    double worst_divB = 0.0, worst_drift = 0.0, charge_scale = 0.0;
    for (double q : s.rho) charge_scale += std::abs(q);
    for (const auto& w : c.wires) charge_scale += std::abs(w.current) * c.dt * c.steps;
    std::array<double, 3> L{};
    for (int a = 0; a < 3; ++a) L[a] = c.cells[a] * c.spacing[a];
    for (int st = 1; st <= c.steps; ++st) {
        std::vector<double> J = J_wire;
        for (auto& p : particles) {
            Vec3 next;
            for (int a = 0; a < 3; ++a) next[a] = p.position[a] + c.dt * p.velocity[a];
            maxwell::deposit_current(G, p.q, p.position, next, c.dt, J);
            for (int a = 0; a < 3; ++a)
                if (c.periodic[a]) next[a] -= L[a] * std::floor(next[a] / L[a]);
            p.position = next;
        }
        const auto diag = stepper.step(s, &J);
        const double rel = diag.max_B > 0 ? diag.max_divB / diag.max_B : diag.max_divB;
        worst_divB = std::max(worst_divB, rel);
        const auto r = maxwell::gauss_residual(G, s.D, s.rho);
        double drift = 0.0;
        for (size_t v = 0; v < r.size(); ++v) drift = std::max(drift, std::abs(r[v] - r0[v]));
        worst_drift = std::max(worst_drift, drift);
        std::vector<double> H(s.B.size());
        for (size_t f = 0; f < H.size(); ++f) H[f] = G.nu_star()[f] * s.B[f];
        std::vector<std::string> row = {std::to_string(st), Table::num(s.time), Table::num(diag.energy), Table::num(rel), Table::num(drift)};
        for (const auto& p : c.boxes) row.push_back(Table::num(maxwell::flux_through_box(G, s.D, p.box)));
        for (const auto& p : c.loops) row.push_back(Table::num(maxwell::circulation_around(G, H, p.i0, p.i1, p.j0, p.j1, p.k)));
        out.table.rows.push_back(std::move(row));
    }
    out.check(worst_divB <= 1e-12, "max |dB| relative to field scale " + Table::num(worst_divB));
    out.check(worst_drift <= 1e-10 * std::max(1.0, charge_scale), "Gauss residual drift " + Table::num(worst_drift));
    out.vertex_field = s.rho;
    out.edge_field = s.E;
    return out;
}

inline Outcome run(const Config& c) {
    switch (c.kind) {
        case Kind::StaticE: return run_static_e(c);
        case Kind::StaticB: return run_static_b(c);
        case Kind::Evolve: return run_evolve(c);
    }
    throw maxwell::MaxwellError("unknown scenario kind");
}

}  // namespace extcalc::scenario
