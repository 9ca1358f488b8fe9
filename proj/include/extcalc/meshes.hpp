#pragma once

// Small standard triangulations used by tests, demos and the CLI.

#include "cochain.hpp"
#include "complex.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace extcalc::meshes {

namespace detail {

inline std::vector<Rational> point(std::initializer_list<double> xs) {
    std::vector<Rational> p;
    for (double x : xs) p.emplace_back(x);
    return p;
}

inline Rational on_circle(double r, double angle, bool cosine) {
    // Snap tiny round-off so axis-aligned points have exact coordinates.
    double v = r * (cosine ? std::cos(angle) : std::sin(angle));
    if (std::abs(v) < 1e-14) v = 0.0;
    const double snapped = std::round(v);
    if (std::abs(v - snapped) < 1e-14) v = snapped;
    return Rational(v);
}

}  // namespace detail

inline SimplicialComplex triangle() {
    return build_complex({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

inline SimplicialComplex tetrahedron() {
    return build_complex({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
}

/// Boundary of the octahedron: an oriented 2-sphere with 6 vertices, 8 faces.
inline SimplicialComplex sphere() {
    std::vector<std::vector<Rational>> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    // Outward normals: each face (a, b, c) ordered counter-clockwise seen from outside.
    std::vector<Simplex> f = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                              {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return build_complex(std::move(v), std::move(f));
}

/// Boundary of the tetrahedron, the minimal triangulated sphere.
inline SimplicialComplex tetra_sphere() {
    return build_complex({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}});
}

/// Periodic m x n grid of squares, each split along its diagonal, embedded as
/// a torus of revolution.  Vertex (i, j) has index i*n + j.
inline SimplicialComplex torus(int m = 3, int n = 3) {
    if (m < 3 || n < 3) throw ComplexError("torus needs at least 3 x 3 vertices");
    std::vector<std::vector<Rational>> v;
    const double R = 2.0, r = 1.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double a = 2 * std::numbers::pi * i / m, b = 2 * std::numbers::pi * j / n;
            v.push_back(detail::point({(R + r * std::cos(b)) * std::cos(a), (R + r * std::cos(b)) * std::sin(a),
                                       r * std::sin(b)}));
        }
    auto id = [&](int i, int j) { return ((i % m + m) % m) * n + ((j % n + n) % n); };
    std::vector<Simplex> t;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return build_complex(std::move(v), std::move(t));
}

/// Annulus with k sectors between an inner ring (vertices 0..k-1, radius 1)
/// and an outer ring (vertices k..2k-1, radius 2); 2k triangles.  k = 4 gives
/// the 8-triangle annulus.
inline SimplicialComplex annulus(int k = 4) {
    if (k < 3) throw ComplexError("annulus needs at least 3 sectors");
    std::vector<std::vector<Rational>> v;
    for (int ring = 1; ring <= 2; ++ring)
        for (int i = 0; i < k; ++i) {
            const double a = 2 * std::numbers::pi * i / k;
            v.push_back({detail::on_circle(ring, a, true), detail::on_circle(ring, a, false)});
        }
    std::vector<Simplex> t;
    for (int i = 0; i < k; ++i) {
        const int j = (i + 1) % k;
        t.push_back({i, j, k + j});
        t.push_back({i, k + j, k + i});
    }
    return build_complex(std::move(v), std::move(t));
}

/// Sector index of an annulus vertex.
inline int annulus_sector(int vertex, int k) { return vertex % k; }

/// Angular 1-cochain on annulus(k): the wrapped change of sector index along
/// each edge divided by k.  Closed, with period 1 around the hole.
inline ExactCochain winding_cochain(const SimplicialComplex& K, int k) {
    ExactCochain w = ExactCochain::zeros(K, 1);
    for (int e = 0; e < K.count(1); ++e) {
        const auto& s = K.simplex(1, e);
        int d = annulus_sector(s[1], k) - annulus_sector(s[0], k);
        if (d > k / 2) d -= k;
        if (d < -k / 2) d += k;
        w.values[e] = make_rational(d, k);
    }
    return w;
}

/// The inner boundary circle of annulus(k) traversed counter-clockwise.
inline Chain annulus_inner_cycle(const SimplicialComplex& K, int k) {
    Chain c(1);
    for (int i = 0; i < k; ++i) {
        const auto [idx, s] = *K.find({i, (i + 1) % k});
        c.add(idx, s);
    }
    return c;
}

/// Disk made of a central vertex and `rings` concentric rings of `m` vertices;
/// the innermost ring forms a fan, later rings are joined by quads split in two.
inline SimplicialComplex disk(int m = 8, int rings = 2) {
    if (m < 3 || rings < 1) throw ComplexError("disk needs m >= 3 and at least one ring");
    std::vector<std::vector<Rational>> v = {{0, 0}};
    for (int r = 1; r <= rings; ++r)
        for (int i = 0; i < m; ++i) {
            const double a = 2 * std::numbers::pi * i / m;
            v.push_back({detail::on_circle(r, a, true), detail::on_circle(r, a, false)});
        }
    auto id = [&](int r, int i) { return 1 + (r - 1) * m + (i % m); };
    std::vector<Simplex> t;
    for (int i = 0; i < m; ++i) t.push_back({0, id(1, i), id(1, i + 1)});
    for (int r = 1; r < rings; ++r)
        for (int i = 0; i < m; ++i) {
            t.push_back({id(r, i), id(r + 1, i), id(r + 1, i + 1)});
            t.push_back({id(r, i), id(r + 1, i + 1), id(r, i + 1)});
        }
    return build_complex(std::move(v), std::move(t));
}

/// Minimal 5-vertex Moebius strip.
inline SimplicialComplex mobius() {
    std::vector<std::vector<Rational>> v;
    for (int i = 0; i < 5; ++i) {
        const double a = 2 * std::numbers::pi * i / 5;
        v.push_back(detail::point({std::cos(a), std::sin(a), (i % 2 == 0) ? 0.25 : -0.25}));
    }
    return build_complex(std::move(v), {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {3, 4, 0}, {4, 0, 1}});
}

/// Moebius strip of k unit squares (k >= 3), each split into two triangles.
/// Bottom vertices are 0..k-1, top vertices k..2k-1; the last square is glued
/// to the first with top and bottom exchanged.
inline SimplicialComplex mobius_squares(int k = 4) {
    if (k < 3) throw ComplexError("Moebius strip needs at least 3 squares");
    std::vector<std::vector<Rational>> v;
    for (int row = 0; row < 2; ++row)
        for (int i = 0; i < k; ++i) {
            const double a = 2 * std::numbers::pi * i / k, h = row == 0 ? -0.5 : 0.5;
            const double c = std::cos(a / 2), s = std::sin(a / 2);
            // Half-twisted band; only used for display, lengths come from mobius_edge_lengths.
            v.push_back(detail::point({(2 + h * c) * std::cos(a), (2 + h * c) * std::sin(a), h * s}));
        }
    std::vector<Simplex> t;
    for (int i = 0; i < k; ++i) {
        const int b0 = i, t0 = k + i;
        int b1 = i + 1, t1 = k + i + 1;
        if (i == k - 1) {
            b1 = k;  // top of column 0
            t1 = 0;  // bottom of column 0
        }
        t.push_back({b0, b1, t1});
        t.push_back({b0, t1, t0});
    }
    return build_complex(std::move(v), std::move(t));
}

/// Intrinsic flat metric of mobius_squares: unit sides, diagonals sqrt(2).
inline std::vector<double> mobius_edge_lengths(const SimplicialComplex& K, int k) {
    std::vector<double> L(K.count(1), 1.0);
    for (int i = 0; i < k; ++i) {
        const int t1 = i == k - 1 ? 0 : k + i + 1;
        L[K.find({i, t1})->first] = std::sqrt(2.0);
    }
    return L;
}

/// Rectangle [0, nx] x [0, ny] of unit squares split along diagonals.
inline SimplicialComplex grid_square(int nx, int ny) {
    if (nx < 1 || ny < 1) throw ComplexError("grid needs at least one cell");
    std::vector<std::vector<Rational>> v;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) v.push_back({i, j});
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    std::vector<Simplex> t;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return build_complex(std::move(v), std::move(t));
}

/// Barycentric subdivision.  Each flag s0 < s1 < ... < sn of a top simplex T
/// becomes a top simplex on the barycentres, oriented like T's input
/// orientation so coherent orientations are preserved.
inline SimplicialComplex barycentric_subdivision(const SimplicialComplex& K) {
    const int n = K.dim();
    std::vector<std::vector<Rational>> coords;
    std::vector<std::vector<int>> id(n + 1);
    for (int k = 0; k <= n; ++k)
        for (int i = 0; i < K.count(k); ++i) {
            std::vector<Rational> c(K.embedding_dim(), Rational(0));
            for (int v : K.simplex(k, i))
                for (int a = 0; a < K.embedding_dim(); ++a) c[a] += K.vertex(v)[a];
            for (auto& x : c) x /= (k + 1);
            id[k].push_back(static_cast<int>(coords.size()));
            coords.push_back(std::move(c));
        }
    std::vector<Simplex> tops;
    for (int t = 0; t < K.count(n); ++t) {
        const auto& T = K.simplex(n, t);
        std::vector<int> order(T.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        do {
            // Flag: s_j = {T[order[0]], ..., T[order[j]]}.
            Simplex top;
            for (int j = 0; j <= n; ++j) {
                std::vector<int> face;
                for (int a = 0; a <= j; ++a) face.push_back(T[order[a]]);
                top.push_back(id[j][K.find(face)->first]);
            }
            if (permutation_sign(order) * K.top_input_sign(t) < 0 && top.size() >= 2) std::swap(top[0], top[1]);
            tops.push_back(std::move(top));
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return SimplicialComplex::build(std::move(coords), tops, n);
}

}  // namespace extcalc::meshes
