#pragma once

// Seeded generators of random exact objects for property checks.

#include "metric.hpp"
#include "poly_form.hpp"

#include <random>
#include <vector>

namespace extcalc::random {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Small rational p/q with |p| <= range, 1 <= q <= 4.
inline Rational rational(Rng& rng, int range = 5) {
    return make_rational(uniform_int(rng, -range, range), uniform_int(rng, 1, 4));
}

inline Polynomial polynomial(Rng& rng, int nvars, int max_degree = 2, int max_terms = 3) {
    Polynomial p(nvars);
    const int terms = uniform_int(rng, 0, max_terms);
    for (int t = 0; t < terms; ++t) {
        Monomial m(nvars, 0);
        int deg = uniform_int(rng, 0, max_degree);
        while (deg-- > 0 && nvars > 0) ++m[uniform_int(rng, 0, nvars - 1)];
        p.add_term(m, rational(rng));
    }
    return p;
}

inline PolyForm form(Rng& rng, int n, int p, Parity parity = Parity::Straight, int max_degree = 2) {
    PolyForm w(n, p, parity);
    const auto sets = detail::index_sets(n, p);
    if (sets.empty()) return w;
    const int terms = uniform_int(rng, 1, std::min<int>(3, static_cast<int>(sets.size())));
    for (int t = 0; t < terms; ++t) w.add(sets[uniform_int(rng, 0, static_cast<int>(sets.size()) - 1)], polynomial(rng, n, max_degree));
    return w;
}

inline Parity parity(Rng& rng) { return uniform_int(rng, 0, 1) ? Parity::Twisted : Parity::Straight; }

inline PolyVectorField vector_field(Rng& rng, int n, int max_degree = 1) {
    PolyVectorField v;
    for (int i = 0; i < n; ++i) v.components.push_back(polynomial(rng, n, max_degree, 2));
    return v;
}

inline PolyMap map(Rng& rng, int m, int n, int max_degree = 2) {
    PolyMap phi{m, {}};
    for (int i = 0; i < n; ++i) phi.components.push_back(polynomial(rng, m, max_degree, 2));
    return phi;
}

/// Random metric P^T diag(s_i a_i^2) P with P unimodular, so sqrt|det g| is
/// rational.  Lorentzian metrics have exactly one negative eigenvalue.
inline Metric metric(Rng& rng, int n, bool lorentzian) {
    Matrix<Rational> P(n, Vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) P[i][i] = 1;
    for (int step = 0; step < n; ++step) {
        if (n < 2) break;
        const int a = uniform_int(rng, 0, n - 1);
        int b = uniform_int(rng, 0, n - 2);
        if (b >= a) ++b;
        const int c = uniform_int(rng, -1, 1);
        for (int j = 0; j < n; ++j) P[a][j] += c * P[b][j];
    }
    std::vector<Rational> d(n);
    for (int i = 0; i < n; ++i) {
        const int a = uniform_int(rng, 1, 2);
        d[i] = make_rational(a * a, uniform_int(rng, 1, 2) == 1 ? 1 : 4);
    }
    if (lorentzian) d[uniform_int(rng, 0, n - 1)] *= -1;
    Matrix<Rational> g(n, Vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) g[i][j] += P[k][i] * d[k] * P[k][j];
    return Metric(g);
}

}  // namespace extcalc::random
