#pragma once

// Betti numbers, torsion and exactness tests for cochains.

#include "cochain.hpp"
#include "complex.hpp"
#include "linalg.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace extcalc {

/// Dense matrix of the coboundary d: C^p -> C^{p+1} with the given parity.
inline RationalMatrix coboundary_matrix(const SimplicialComplex& K, int p, Parity parity = Parity::Straight) {
    if (p < 0 || p >= K.dim()) throw CochainError("no coboundary out of degree " + std::to_string(p));
    const auto& B = K.boundary_matrix(p + 1);
    RationalMatrix m(B.cols, std::vector<Rational>(B.rows, Rational(0)));
    for (int c = 0; c < B.cols; ++c)
        for (auto [r, s] : B.columns[c]) {
            int sign = s;
            if (parity == Parity::Twisted) sign *= K.transport_sign(p, r, c);
            m[c][r] = sign;
        }
    return m;
}

struct CohomologyReport {
    std::vector<int> betti;                   // b_0 .. b_n (rational coefficients)
    std::vector<std::vector<long>> torsion;   // torsion coefficients of H_k(K; Z)
    bool orientable = false;
    long euler = 0;
};

namespace detail {

inline IntegerMatrix integer_boundary(const SimplicialComplex& K, int k) {
    const auto& B = K.boundary_matrix(k);
    IntegerMatrix m(B.rows, std::vector<BigInt>(B.cols, BigInt(0)));
    for (int c = 0; c < B.cols; ++c)
        for (auto [r, s] : B.columns[c]) m[r][c] = s;
    return m;
}

inline RationalMatrix to_rational(const IntegerMatrix& m) {
    RationalMatrix out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (const auto& x : m[i]) out[i].push_back(Rational(x));
    return out;
}

}  // namespace detail

/// Homology ranks via the Smith normal form of each boundary matrix; the
/// integer rank is cross-checked against the rank over Q.
inline CohomologyReport betti_numbers(const SimplicialComplex& K) {
    const int n = K.dim();
    std::vector<int> rk(n + 2, 0);
    std::vector<std::vector<long>> tors_of(n + 2);
    for (int k = 1; k <= n; ++k) {
        const auto Bz = detail::integer_boundary(K, k);
        const auto inv = smith_invariants(Bz);
        rk[k] = static_cast<int>(inv.size());
        if (rank(detail::to_rational(Bz)) != rk[k])
            throw std::logic_error("integer and rational ranks disagree");
        for (const auto& d : inv)
            if (d > 1) tors_of[k].push_back(d.get_si());
    }
    CohomologyReport rep;
    for (int k = 0; k <= n; ++k) {
        rep.betti.push_back(K.count(k) - rk[k] - rk[k + 1]);
        rep.torsion.push_back(tors_of[k + 1]);
    }
    try {
        rep.orientable = orientability(K).orientable;
    } catch (const NotPseudoManifold&) {
        rep.orientable = false;
    }
    rep.euler = euler_characteristic(K);
    return rep;
}

template <class S>
bool is_closed(const Cochain<S>& w, const SimplicialComplex& K, double tol = 0.0) {
    if (w.degree == K.dim()) return true;
    return coboundary(w, K).is_zero(tol);
}

struct ExactnessResult {
    bool exact = false;
    std::optional<ExactCochain> primitive;  // some a with d a = w
};

/// Decides exactness by solving d a = w exactly over Q.
inline ExactnessResult is_exact(const ExactCochain& w, const SimplicialComplex& K) {
    check_cochain(w, K);
    if (w.degree == 0) {
        if (!w.is_zero()) return {false, std::nullopt};
        return {true, std::nullopt};
    }
    const auto A = coboundary_matrix(K, w.degree - 1, w.parity);
    auto x = solve_exact(A, w.values);
    if (!x) return {false, std::nullopt};
    return {true, ExactCochain{w.degree - 1, std::move(*x), w.parity}};
}

}  // namespace extcalc
