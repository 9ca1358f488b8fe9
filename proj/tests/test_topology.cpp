// Complexes, chains, orientation algebra, cohomology and mesh files.

#include "extcalc/cohomology.hpp"
#include "extcalc/mesh_io.hpp"
#include "extcalc/meshes.hpp"
#include "extcalc/orient.hpp"
#include "extcalc/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace extcalc;

namespace {

std::vector<std::pair<std::string, SimplicialComplex>> all_meshes() {
    return {{"triangle", meshes::triangle()},     {"tetrahedron", meshes::tetrahedron()},
            {"sphere", meshes::sphere()},         {"tetra_sphere", meshes::tetra_sphere()},
            {"torus", meshes::torus(3, 4)},       {"annulus", meshes::annulus(4)},
            {"disk", meshes::disk(8, 2)},         {"mobius", meshes::mobius()},
            {"mobius_squares", meshes::mobius_squares(4)}, {"grid", meshes::grid_square(3, 2)}};
}

SimplicialComplex relabel(const SimplicialComplex& K, const std::vector<int>& perm) {
    std::vector<std::vector<Rational>> coords(K.vertex_count());
    for (int v = 0; v < K.vertex_count(); ++v) coords[perm[v]] = K.vertex(v);
    std::vector<std::vector<int>> tops;
    for (const auto& s : K.simplices(K.dim())) {
        std::vector<int> t;
        for (int v : s) t.push_back(perm[v]);
        tops.push_back(t);
    }
    return build_complex(coords, tops);
}

// Minimal six-vertex projective plane.
SimplicialComplex projective_plane() {
    std::vector<std::vector<Rational>> coords;
    for (int i = 0; i < 6; ++i) coords.push_back({Rational(i), Rational(i * i)});
    return build_complex(coords, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                  {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}});
}

}  // namespace

TEST(Complex, TriangleHasThreeEdges) {
    const auto K = meshes::triangle();
    EXPECT_EQ(K.dim(), 2);
    EXPECT_EQ(K.count(0), 3);
    EXPECT_EQ(K.count(1), 3);
    EXPECT_EQ(K.count(2), 1);
}

TEST(Complex, BoundaryOfTriangleIsSignedEdgeSum) {
    const auto K = meshes::triangle();
    const auto bd = boundary(Chain::cell(2, 0), K);
    EXPECT_EQ(bd[K.find({1, 2})->first], 1);
    EXPECT_EQ(bd[K.find({0, 2})->first], -1);
    EXPECT_EQ(bd[K.find({0, 1})->first], 1);
}

TEST(Complex, BoundaryOfBoundaryVanishesOnEveryMesh) {
    for (const auto& [name, K] : all_meshes())
        for (int k = 2; k <= K.dim(); ++k)
            for (int i = 0; i < K.count(k); ++i)
                EXPECT_TRUE(boundary(boundary(Chain::cell(k, i), K), K).is_zero()) << name << " cell " << k << ":" << i;
}

TEST(Complex, BoundaryOfTetrahedronChainTwice) {
    const auto K = meshes::tetrahedron();
    EXPECT_TRUE(boundary(boundary(Chain::cell(3, 0), K), K).is_zero());
}

TEST(Complex, BoundaryIsLinear) {
    random::Rng rng(3);
    const auto K = meshes::torus(3, 4);
    for (int trial = 0; trial < 50; ++trial) {
        Chain a(2), b(2);
        for (int i = 0; i < K.count(2); ++i) {
            a.add(i, random::rational(rng));
            b.add(i, random::rational(rng));
        }
        const Rational s = random::rational(rng);
        EXPECT_EQ(boundary(a + s * b, K), boundary(a, K) + s * boundary(b, K));
    }
}

TEST(Complex, ClosedSphereHasNoBoundary) {
    const auto K = meshes::sphere();
    const auto o = orientability(K);
    ASSERT_TRUE(o.orientable);
    EXPECT_TRUE(boundary(fundamental_chain(K, *o.orientation), K).is_zero());
}

TEST(Complex, EulerCharacteristics) {
    EXPECT_EQ(euler_characteristic(meshes::sphere()), 2);
    EXPECT_EQ(euler_characteristic(meshes::torus(3, 3)), 0);
    EXPECT_EQ(euler_characteristic(meshes::annulus(4)), 0);
    EXPECT_EQ(meshes::annulus(4).count(2), 8);
    const auto point = build_complex({{Rational(0)}}, {{0}});
    EXPECT_EQ(euler_characteristic(point), 1);
}

TEST(Complex, RejectsDegenerateInput) {
    EXPECT_THROW(build_complex({{Rational(0)}, {Rational(1)}}, {{0, 0}}), ComplexError);
    EXPECT_THROW(build_complex({{Rational(0)}, {Rational(1)}}, {{0, 5}}), ComplexError);
}

TEST(Complex, RelabellingPreservesInvariants) {
    random::Rng rng(5);
    for (const auto& [name, K] : all_meshes()) {
        std::vector<int> perm(K.vertex_count());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto L = relabel(K, perm);
        for (int k = 0; k <= K.dim(); ++k) EXPECT_EQ(L.count(k), K.count(k)) << name;
        const auto a = betti_numbers(K), b = betti_numbers(L);
        EXPECT_EQ(a.betti, b.betti) << name;
        EXPECT_EQ(a.orientable, b.orientable) << name;
        EXPECT_EQ(a.euler, b.euler) << name;
    }
}

TEST(Orientability, KnownSurfaces) {
    EXPECT_TRUE(orientability(meshes::sphere()).orientable);
    EXPECT_TRUE(orientability(meshes::torus(3, 3)).orientable);
    EXPECT_TRUE(orientability(meshes::annulus(4)).orientable);
    EXPECT_FALSE(orientability(meshes::mobius()).orientable);
    EXPECT_FALSE(orientability(meshes::mobius_squares(4)).orientable);
    EXPECT_FALSE(orientability(projective_plane()).orientable);
}

TEST(Orientability, FundamentalChainBoundaryIsTheRim) {
    const auto K = meshes::disk(8, 2);
    const auto o = orientability(K);
    const auto rim = boundary(fundamental_chain(K, *o.orientation), K);
    EXPECT_EQ(static_cast<int>(rim.coefficients.size()), 8);
    EXPECT_TRUE(boundary(rim, K).is_zero());
}

TEST(Orient, ConcatenationTable) {
    const auto xy = concat(make_frame({axis(2, 0)}), make_frame({axis(2, 1)}));
    EXPECT_EQ(orientation_sign(xy).value, 1);
    const auto yx = concat(make_frame({axis(2, 1)}), make_frame({axis(2, 0)}));
    EXPECT_EQ(orientation_sign(yx).value, -1);
    EXPECT_EQ(orientation_sign(concat(arc(3, 0, 1), make_frame({axis(3, 2)}))).value, 1);
    EXPECT_THROW(concat(make_frame({axis(2, 0)}), make_frame({axis(2, 0)})), DegenerateFrame);
}

TEST(Orient, TwistingConvention) {
    // External first, then internal, gives the manifold orientation.  Right
    // then up is anticlockwise, so in a clockwise plane "up" twists to "left".
    const auto clockwise = standard_orientation(2, -1);
    const auto up = make_frame({axis(2, 1)});
    const auto right = make_frame({axis(2, 0)}, FrameKind::External);
    const auto left = make_frame({axis(2, 0, true)}, FrameKind::External);
    EXPECT_EQ(untwist(right, up, clockwise).value, -1);
    EXPECT_EQ(untwist(left, up, clockwise).value, 1);
    EXPECT_EQ(untwist(right, up, standard_orientation(2)).value, 1);
    EXPECT_EQ(relative_sign(twist(up, clockwise), left).value, 1);
    const auto z = make_frame({axis(3, 2)});
    auto ext = arc(3, 0, 1);
    ext.kind = FrameKind::External;
    EXPECT_EQ(untwist(ext, z, standard_orientation(3)).value, 1);
}

TEST(Orient, TwistUntwistRoundTrip) {
    const auto M = standard_orientation(3);
    for (int a = 0; a < 3; ++a) {
        const auto t = make_frame({axis(3, a)});
        const auto ext = twist(t, M);
        EXPECT_EQ(untwist(ext, t, M).value, 1);
        const auto back = untwist_frame(ext, t, M);
        EXPECT_EQ(relative_sign(back, t).value, 1);
    }
}

TEST(Orient, InducedBoundarySigns) {
    EXPECT_EQ(induced_boundary_sign({0, 1, 2}, {1, 2}).value, 1);
    EXPECT_EQ(induced_boundary_sign({0, 1, 2}, {0, 2}).value, -1);
    // Omitting the vertex at position 2 gives (-1)^2.
    EXPECT_EQ(induced_boundary_sign({0, 1, 2, 3}, {0, 1, 3}).value, 1);
    EXPECT_EQ(induced_boundary_sign({0, 1, 2, 3}, {0, 2, 3}).value, -1);
    EXPECT_THROW(induced_boundary_sign({0, 1, 2}, {0, 3}), ComplexError);
}

TEST(Orient, InducedSignsAgreeWithIncidence) {
    const auto K = meshes::tetrahedron();
    for (int k = 1; k <= 3; ++k) {
        const auto& B = K.boundary_matrix(k);
        for (int c = 0; c < B.cols; ++c)
            for (auto [r, s] : B.columns[c]) EXPECT_EQ(induced_boundary_sign(k, c, r, K).value, s);
    }
}

TEST(Cohomology, BettiTable) {
    EXPECT_EQ(betti_numbers(meshes::annulus(4)).betti, (std::vector<int>{1, 1, 0}));
    EXPECT_EQ(betti_numbers(meshes::torus(3, 3)).betti, (std::vector<int>{1, 2, 1}));
    EXPECT_EQ(betti_numbers(meshes::sphere()).betti, (std::vector<int>{1, 0, 1}));
    EXPECT_EQ(betti_numbers(meshes::disk(8, 2)).betti, (std::vector<int>{1, 0, 0}));
    EXPECT_EQ(betti_numbers(meshes::mobius()).betti, (std::vector<int>{1, 1, 0}));
}

TEST(Cohomology, ProjectivePlaneHasTorsion) {
    const auto rep = betti_numbers(projective_plane());
    EXPECT_EQ(rep.betti, (std::vector<int>{1, 0, 0}));
    EXPECT_EQ(rep.torsion[1], (std::vector<long>{2}));
    EXPECT_FALSE(rep.orientable);
}

TEST(Cohomology, EulerIdentity) {
    for (const auto& [name, K] : all_meshes()) {
        const auto rep = betti_numbers(K);
        long alt = 0;
        for (size_t k = 0; k < rep.betti.size(); ++k) alt += (k % 2 ? -1 : 1) * rep.betti[k];
        EXPECT_EQ(alt, euler_characteristic(K)) << name;
    }
}

TEST(Cohomology, RefinementInvariance) {
    for (const auto& K : {meshes::annulus(4), meshes::torus(3, 3), meshes::mobius(), meshes::sphere()}) {
        const auto a = betti_numbers(K), b = betti_numbers(meshes::barycentric_subdivision(K));
        EXPECT_EQ(a.betti, b.betti);
        EXPECT_EQ(a.orientable, b.orientable);
    }
}

TEST(Cohomology, SmithInvariants) {
    IntegerMatrix m = {{BigInt(2), BigInt(4)}, {BigInt(6), BigInt(8)}};
    const auto inv = smith_invariants(m);
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_EQ(inv[0], 2);
    EXPECT_EQ(inv[1], 4);
}

TEST(Cohomology, WindingCochain) {
    const auto K = meshes::annulus(4);
    const auto w = meshes::winding_cochain(K, 4);
    EXPECT_TRUE(is_closed(w, K));
    EXPECT_FALSE(is_exact(w, K).exact);
    EXPECT_NE(integrate(w, meshes::annulus_inner_cycle(K, 4), K), 0);
    Chain two(2);
    for (const auto& t : std::vector<std::vector<int>>{{0, 1, 5}, {0, 5, 4}}) {
        const auto [i, s] = *K.find(t);
        two.add(i, s);
    }
    EXPECT_EQ(integrate(w, boundary(two, K), K), 0);
}

TEST(Cohomology, ExactCochainsAreClosedAndRecoverPrimitive) {
    random::Rng rng(9);
    for (const auto& K : {meshes::torus(3, 3), meshes::annulus(5), meshes::sphere()}) {
        for (int trial = 0; trial < 10; ++trial) {
            ExactCochain f = ExactCochain::zeros(K, 0);
            for (auto& v : f.values) v = random::rational(rng);
            const auto df = coboundary(f, K);
            EXPECT_TRUE(is_closed(df, K));
            const auto ex = is_exact(df, K);
            ASSERT_TRUE(ex.exact);
            EXPECT_EQ(coboundary(*ex.primitive, K), df);
            // Unique up to a constant on a connected complex.
            const Rational shift = f.values[0] - ex.primitive->values[0];
            for (size_t v = 0; v < f.values.size(); ++v) EXPECT_EQ(f.values[v], ex.primitive->values[v] + shift);
        }
    }
}

TEST(MeshIo, RoundTrip) {
    for (const auto& [name, K] : all_meshes()) {
        std::stringstream ss;
        write_mesh(ss, K);
        const auto L = read_mesh(ss);
        ASSERT_EQ(L.dim(), K.dim()) << name;
        for (int k = 0; k <= K.dim(); ++k) EXPECT_EQ(L.simplices(k), K.simplices(k)) << name;
    }
}

TEST(MeshIo, LineNumberedErrors) {
    auto error_line = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_mesh(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(error_line("dim 2\nv 0 0\nv 1 0\nv 0 1\ns 0 1 x\n"), 5);
    EXPECT_EQ(error_line("# comment\ndim 2\nv 0 0\nv 1\n"), 4);
    EXPECT_EQ(error_line("dim 2\nv 0 0\nv 1 0\nv 0 1\ns 0 1 7\n"), 5);
    EXPECT_EQ(error_line("dim 1\nbogus\n"), 2);
    EXPECT_EQ(error_line("s 0 1\n"), 1);
}

TEST(MeshIo, CochainCsvRoundTrip) {
    const auto K = meshes::torus(3, 3);
    random::Rng rng(4);
    ExactCochain w = ExactCochain::zeros(K, 1, Parity::Twisted);
    for (auto& v : w.values) v = random::rational(rng);
    std::stringstream ss;
    write_cochain_csv(ss, w);
    EXPECT_EQ(read_cochain_csv(ss, K), w);
    std::istringstream bad("# degree=1 parity=straight\nsimplex_index,value\n0,1\n999,2\n");
    EXPECT_THROW(read_cochain_csv(bad, K), ParseError);
}
