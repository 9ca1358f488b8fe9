#pragma once

// Discrete forms: cochains on a simplicial complex.
//
// A straight p-cochain holds one value per p-simplex relative to the
// simplex's sorted (internal) orientation.  A twisted p-cochain holds one
// value per p-simplex relative to the simplex's reference external
// orientation: the one which, followed by the sorted internal orientation,
// gives the orientation of the simplex's reference top simplex.  The value on
// the opposite sheet of the orientation double cover is the negation, so a
// twisted cochain is well defined on orientable and non-orientable complexes
// alike.  For top-degree twisted cochains the reference external orientation
// is simply "+", so the stored values are the signed dot counts.

#include "complex.hpp"
#include "metric.hpp"
#include "orient.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extcalc {

class CochainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a straight top-form is integrated over a manifold that has no
/// orientation to untwist it with.
class NonOrientableError : public CochainError {
public:
    using CochainError::CochainError;
};

template <class S>
struct Cochain {
    int degree = 0;
    std::vector<S> values;
    Parity parity = Parity::Straight;

    static Cochain zeros(const SimplicialComplex& K, int p, Parity parity = Parity::Straight) {
        if (p < 0 || p > K.dim()) throw CochainError("cochain degree outside complex");
        return {p, std::vector<S>(K.count(p), S(0)), parity};
    }

    static Cochain indicator(const SimplicialComplex& K, int p, int cell, Parity parity = Parity::Straight) {
        Cochain c = zeros(K, p, parity);
        c.values.at(cell) = S(1);
        return c;
    }

    size_t size() const { return values.size(); }
    const S& operator[](size_t i) const { return values[i]; }
    S& operator[](size_t i) { return values[i]; }

    friend bool operator==(const Cochain& a, const Cochain& b) {
        return a.degree == b.degree && a.parity == b.parity && a.values == b.values;
    }

    Cochain& operator+=(const Cochain& o) {
        if (o.degree != degree || o.parity != parity || o.values.size() != values.size())
            throw CochainError("adding incompatible cochains");
        for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator*(const S& s, Cochain a) {
        for (auto& v : a.values) v *= s;
        return a;
    }

    bool is_zero(double tol = 0.0) const {
        return std::all_of(values.begin(), values.end(), [tol](const S& v) { return ScalarTraits<S>::is_zero(v, tol); });
    }
};

using ExactCochain = Cochain<Rational>;
using FloatCochain = Cochain<double>;

template <class S>
void check_cochain(const Cochain<S>& w, const SimplicialComplex& K) {
    if (w.degree < 0 || w.degree > K.dim()) throw CochainError("cochain degree outside complex");
    if (static_cast<int>(w.values.size()) != K.count(w.degree))
        throw CochainError("cochain has " + std::to_string(w.values.size()) + " values but complex has " +
                           std::to_string(K.count(w.degree)) + " cells of degree " + std::to_string(w.degree));
}

template <class To, class From>
Cochain<To> convert(const Cochain<From>& w) {
    Cochain<To> out{w.degree, {}, w.parity};
    out.values.reserve(w.values.size());
    for (const auto& v : w.values) {
        if constexpr (std::is_same_v<To, double>) out.values.push_back(to_double(v));
        else out.values.push_back(To(v));
    }
    return out;
}

/// Transpose of the boundary operator; twisted cochains are transported
/// between the reference sheets of a face and its coface.
template <class S>
Cochain<S> coboundary(const Cochain<S>& w, const SimplicialComplex& K) {
    check_cochain(w, K);
    if (w.degree >= K.dim()) throw CochainError("coboundary of a top-degree cochain");
    const int p = w.degree;
    const auto& B = K.boundary_matrix(p + 1);
    Cochain<S> out = Cochain<S>::zeros(K, p + 1, w.parity);
    for (int c = 0; c < B.cols; ++c) {
        S total = S(0);
        for (auto [r, s] : B.columns[c]) {
            int sign_rc = s;
            if (w.parity == Parity::Twisted) sign_rc *= K.transport_sign(p, r, c);
            if (sign_rc > 0) total += w.values[r];
            else total -= w.values[r];
        }
        out.values[c] = total;
    }
    return out;
}

/// Pairing of a cochain with a chain of the same degree and parity:
/// straight cochains pair with internally oriented chains, twisted with
/// externally oriented ones.
template <class S>
S integrate(const Cochain<S>& w, const Chain& c, const SimplicialComplex& K) {
    check_cochain(w, K);
    check_chain(c, K);
    if (w.degree != c.degree) throw CochainError("cochain and chain degrees differ");
    if (w.parity != c.parity)
        throw CochainError(w.parity == Parity::Twisted ? "twisted cochains integrate over twisted chains"
                                                       : "straight cochains integrate over straight chains");
    S total = S(0);
    for (const auto& [i, coeff] : c.coefficients) total += w.values[i] * scalar_from<S>(coeff);
    return total;
}

/// Integral of a top-degree cochain over the whole complex.  Twisted cochains
/// always integrate; straight ones need a coherent orientation.
template <class S>
S integrate_over_manifold(const Cochain<S>& w, const SimplicialComplex& K) {
    check_cochain(w, K);
    if (w.degree != K.dim()) throw CochainError("only top-degree cochains integrate over the manifold");
    if (w.parity == Parity::Twisted) return integrate(w, twisted_fundamental_chain(K), K);
    const auto o = orientability(K);
    if (!o.orientable)
        throw NonOrientableError("can only integrate twisted top-forms on a non-orientable manifold");
    return integrate(w, fundamental_chain(K, *o.orientation), K);
}

template <class S>
struct StokesPair {
    S lhs;  // <d w, c>
    S rhs;  // <w, boundary c>
};

template <class S>
StokesPair<S> stokes_pairing_check(const Cochain<S>& w, const Chain& c, const SimplicialComplex& K) {
    if (c.degree != w.degree + 1) throw CochainError("Stokes check needs deg(chain) = deg(cochain) + 1");
    return {integrate(coboundary(w, K), c, K), integrate(w, boundary(c, K), K)};
}

namespace detail {

/// Value of a cochain on an ordered vertex tuple, expressed as a straight
/// value relative to the local orientation of `top` (used for twisted inputs).
template <class S>
S local_value(const Cochain<S>& w, const SimplicialComplex& K, const std::vector<int>& tuple, int top) {
    const auto found = K.find(tuple);
    if (!found) throw CochainError("tuple is not a cell of the complex");
    const auto [idx, s] = *found;
    S v = w.values[idx];
    int sign_total = s;
    if (w.parity == Parity::Twisted) sign_total *= K.star_sign(w.degree, idx, top);
    if (sign_total < 0) v = -v;
    return v;
}

inline long factorial(int k) {
    long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace detail

/// Antisymmetrised cup product, the discrete wedge.  Parity multiplies.
template <class S>
Cochain<S> cup_wedge(const Cochain<S>& a, const Cochain<S>& b, const SimplicialComplex& K) {
    check_cochain(a, K);
    check_cochain(b, K);
    const int p = a.degree, q = b.degree, k = p + q;
    if (k > K.dim()) throw CochainError("wedge degree exceeds complex dimension");
    const Parity parity = a.parity * b.parity;
    const bool any_twisted = a.parity == Parity::Twisted || b.parity == Parity::Twisted;
    Cochain<S> out = Cochain<S>::zeros(K, k, parity);
    const S norm = S(detail::factorial(k + 1));
    for (int cell = 0; cell < K.count(k); ++cell) {
        const auto& verts = K.simplex(k, cell);
        const int top = any_twisted ? K.reference_top(k, cell) : -1;
        if (any_twisted && top < 0) throw CochainError("twisted wedge on a cell outside every top simplex");
        std::vector<int> perm(k + 1);
        std::iota(perm.begin(), perm.end(), 0);
        S total = S(0);
        do {
            std::vector<int> front, back;
            for (int i = 0; i <= p; ++i) front.push_back(verts[perm[i]]);
            for (int i = p; i <= k; ++i) back.push_back(verts[perm[i]]);
            S term = detail::local_value(a, K, front, top) * detail::local_value(b, K, back, top);
            if (permutation_sign(perm) > 0) total += term;
            else total -= term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.values[cell] = total / norm;
    }
    return out;
}

namespace detail {

inline void require_coherent(const SimplicialComplex& K, const std::vector<int>& orientation) {
    const int n = K.dim();
    if (static_cast<int>(orientation.size()) != K.count(n)) throw CochainError("orientation has wrong length");
    if (n == 0) return;
    const auto& B = K.boundary_matrix(n);
    for (int f = 0; f < B.rows; ++f) {
        const auto& row = B.row_entries[f];
        if (row.size() == 2 && orientation[row[0].first] * row[0].second != -orientation[row[1].first] * row[1].second)
            throw CochainError("supplied orientation is not coherent");
    }
}

}  // namespace detail

/// Converts between straight and twisted cochains with a global orientation
/// (a sign per top simplex relative to its sorted order).  The conversion
/// factor on each cell is the sign returned by untwisting the cell's
/// reference external orientation against the global orientation; applying
/// it twice is the identity.
template <class S>
Cochain<S> twist_cochain(const Cochain<S>& w, const SimplicialComplex& K, const std::vector<int>& orientation) {
    check_cochain(w, K);
    detail::require_coherent(K, orientation);
    Cochain<S> out = w;
    out.parity = flip(w.parity);
    for (int i = 0; i < K.count(w.degree); ++i) {
        const int top = K.reference_top(w.degree, i);
        if (top < 0) throw CochainError("cell outside every top simplex cannot be twisted");
        if (orientation[top] < 0) out.values[i] = -out.values[i];
    }
    return out;
}

/// Same, using the orientation found by propagation; fails on non-orientable complexes.
template <class S>
Cochain<S> twist_cochain(const Cochain<S>& w, const SimplicialComplex& K) {
    const auto o = orientability(K);
    if (!o.orientable) throw NonOrientableError("no global orientation exists to twist with");
    return twist_cochain(w, K, *o.orientation);
}

// ---------------------------------------------------------------------------
// Metric data on simplices.

namespace detail {

/// Gram matrix of edge vectors p_i - p_0 under a constant metric.
inline std::vector<std::vector<double>> gram(const std::vector<std::vector<double>>& pts, const MetricD& g) {
    const size_t k = pts.size() - 1;
    std::vector<std::vector<double>> e(k);
    for (size_t i = 0; i < k; ++i) {
        e[i].resize(pts[0].size());
        for (size_t j = 0; j < pts[0].size(); ++j) e[i][j] = pts[i + 1][j] - pts[0][j];
    }
    std::vector<std::vector<double>> G(k, std::vector<double>(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) G[i][j] = g.inner(e[i], e[j]);
    return G;
}

inline double det_d(std::vector<std::vector<double>> m) {
    double det = 1.0;
    const size_t n = m.size();
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        if (m[p][c] == 0.0) return 0.0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

/// Unsigned k-volume of the simplex spanned by k+1 points.
inline double simplex_volume(const std::vector<std::vector<double>>& pts, const MetricD& g) {
    if (pts.size() <= 1) return 1.0;
    const double d = det_d(gram(pts, g));
    return std::sqrt(std::abs(d)) / static_cast<double>(factorial(static_cast<int>(pts.size()) - 1));
}

inline std::vector<std::vector<double>> points_of(const SimplicialComplex& K, const Simplex& s) {
    std::vector<std::vector<double>> pts;
    for (int v : s) pts.push_back(K.vertex_d(v));
    return pts;
}

}  // namespace detail

/// Strictly positive twisted top-degree cochain.
struct Measure {
    FloatCochain density;

    explicit Measure(FloatCochain c) : density(std::move(c)) {
        if (density.parity != Parity::Twisted) throw CochainError("a measure is a twisted top-form");
        for (double v : density.values)
            if (!(v > 0.0)) throw CochainError("a measure must be strictly positive");
    }

    double total() const {
        double s = 0.0;
        for (double v : density.values) s += v;
        return s;
    }
};

/// Cell volumes under a constant Riemannian metric on the embedding space.
inline Measure measure_from_metric(const SimplicialComplex& K, const MetricD& g) {
    if (!g.is_riemannian()) throw MetricError("measure needs a Riemannian metric");
    if (g.dim() != K.embedding_dim()) throw MetricError("metric dimension does not match embedding");
    const int n = K.dim();
    FloatCochain c = FloatCochain::zeros(K, n, Parity::Twisted);
    for (int t = 0; t < K.count(n); ++t) {
        c.values[t] = detail::simplex_volume(detail::points_of(K, K.simplex(n, t)), g);
        if (!(c.values[t] > 0.0)) throw CochainError("degenerate cell " + std::to_string(t));
    }
    return Measure(std::move(c));
}

inline Measure measure_from_metric(const SimplicialComplex& K, const Metric& g) {
    return measure_from_metric(K, to_float(g));
}

/// Volume of a simplex from its squared edge lengths (Cayley-Menger).
inline double volume_from_squared_lengths(const std::vector<std::vector<double>>& d2) {
    const size_t m = d2.size();  // k+1 points
    const int k = static_cast<int>(m) - 1;
    if (k == 0) return 1.0;
    // Gram matrix relative to point 0: G_ij = (d0i + d0j - dij) / 2.
    std::vector<std::vector<double>> G(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) G[i][j] = 0.5 * (d2[0][i + 1] + d2[0][j + 1] - d2[i + 1][j + 1]);
    const double det = detail::det_d(G);
    if (det <= 0.0) return 0.0;
    return std::sqrt(det) / static_cast<double>(detail::factorial(k));
}

/// Cell volumes of a piecewise-flat intrinsic metric given by one length per edge.
inline Measure measure_from_edge_lengths(const SimplicialComplex& K, const std::vector<double>& edge_lengths) {
    if (K.dim() < 1) throw CochainError("edge lengths need a complex of dimension >= 1");
    if (static_cast<int>(edge_lengths.size()) != K.count(1)) throw CochainError("one length per edge expected");
    const int n = K.dim();
    FloatCochain c = FloatCochain::zeros(K, n, Parity::Twisted);
    for (int t = 0; t < K.count(n); ++t) {
        const auto& s = K.simplex(n, t);
        std::vector<std::vector<double>> d2(s.size(), std::vector<double>(s.size(), 0.0));
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j) {
                const double L = edge_lengths[K.find({s[i], s[j]})->first];
                d2[i][j] = d2[j][i] = L * L;
            }
        c.values[t] = volume_from_squared_lengths(d2);
        if (!(c.values[t] > 0.0)) throw CochainError("degenerate cell " + std::to_string(t));
    }
    return Measure(std::move(c));
}

}  // namespace extcalc
