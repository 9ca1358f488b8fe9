#pragma once

// Orientation sign algebra: frames, concatenation, twisting and untwisting,
// and the orientation a boundary inherits from the cell it bounds.
//
// Conventions:
//   * concatenation appends the second frame's vectors after the first's;
//   * twisting: external orientation followed by internal orientation must
//     reproduce the orientation of the ambient manifold;
//   * boundaries: outward normal followed by the facet's internal orientation
//     reproduces the cell's orientation.

#include "complex.hpp"
#include "rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace extcalc {

class DegenerateFrame : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class FrameKind { Internal, External };

struct RelativeSign {
    int value = 1;

    static RelativeSign plus() { return {1}; }
    static RelativeSign minus() { return {-1}; }

    friend RelativeSign operator*(RelativeSign a, RelativeSign b) { return {a.value * b.value}; }
    friend bool operator==(RelativeSign a, RelativeSign b) { return a.value == b.value; }
    RelativeSign operator-() const { return {-value}; }
};

/// An ordered list of k independent directions in n-space.  `polarity`
/// scales the whole frame, which is the only orientation a 0-frame has.
struct OrientationFrame {
    int ambient_dim = 0;
    std::vector<std::vector<Rational>> vectors;
    FrameKind kind = FrameKind::Internal;
    int polarity = 1;

    int size() const { return static_cast<int>(vectors.size()); }
};

namespace detail {

/// Rank of a list of row vectors by exact elimination.
inline int rank_of(std::vector<std::vector<Rational>> rows) {
    if (rows.empty()) return 0;
    const size_t cols = rows.front().size();
    int rank = 0;
    for (size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (sgn(rows[r][c]) != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
            if (sgn(rows[r][c]) == 0) continue;
            const Rational f = rows[r][c] / rows[rank][c];
            for (size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline Rational determinant(std::vector<std::vector<Rational>> m) {
    const size_t n = m.size();
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t pivot = n;
        for (size_t r = c; r < n; ++r)
            if (sgn(m[r][c]) != 0) { pivot = r; break; }
        if (pivot == n) return 0;
        if (pivot != c) {
            std::swap(m[pivot], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (sgn(m[r][c]) == 0) continue;
            const Rational f = m[r][c] / m[c][c];
            for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

/// Minor of the frame's row vectors on the given coordinate columns.
inline Rational minor_det(const std::vector<std::vector<Rational>>& rows, const std::vector<int>& cols) {
    std::vector<std::vector<Rational>> m(rows.size(), std::vector<Rational>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) m[i][j] = rows[i][cols[j]];
    return determinant(std::move(m));
}

}  // namespace detail

inline OrientationFrame make_frame(std::vector<std::vector<Rational>> vectors, FrameKind kind = FrameKind::Internal,
                                   int ambient_dim = -1) {
    OrientationFrame f;
    f.ambient_dim = ambient_dim >= 0 ? ambient_dim : (vectors.empty() ? 0 : static_cast<int>(vectors.front().size()));
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != f.ambient_dim) throw DegenerateFrame("frame vector has wrong dimension");
    if (detail::rank_of(vectors) != static_cast<int>(vectors.size()))
        throw DegenerateFrame("frame vectors are linearly dependent");
    f.vectors = std::move(vectors);
    f.kind = kind;
    return f;
}

/// Unit coordinate direction e_axis (negated when `negative`).
inline std::vector<Rational> axis(int n, int a, bool negative = false) {
    std::vector<Rational> v(n, Rational(0));
    v.at(a) = negative ? -1 : 1;
    return v;
}

/// The arc turning from e_a towards e_b, i.e. the 2-frame (e_a, e_b).
inline OrientationFrame arc(int n, int a, int b) { return make_frame({axis(n, a), axis(n, b)}); }

/// The standard orientation (e_0, ..., e_{n-1}) with optional reversal.
inline OrientationFrame standard_orientation(int n, int polarity = 1) {
    std::vector<std::vector<Rational>> vs;
    for (int i = 0; i < n; ++i) vs.push_back(axis(n, i));
    auto f = make_frame(std::move(vs), FrameKind::Internal, n);
    f.polarity = polarity;
    return f;
}

inline OrientationFrame concat(const OrientationFrame& first, const OrientationFrame& second) {
    if (first.ambient_dim != second.ambient_dim) throw DegenerateFrame("concatenating frames of different ambient dimension");
    OrientationFrame out;
    out.ambient_dim = first.ambient_dim;
    out.vectors = first.vectors;
    out.vectors.insert(out.vectors.end(), second.vectors.begin(), second.vectors.end());
    if (detail::rank_of(out.vectors) != out.size()) throw DegenerateFrame("degenerate concatenation");
    out.polarity = first.polarity * second.polarity;
    out.kind = (first.kind == FrameKind::Internal && second.kind == FrameKind::Internal) ? FrameKind::Internal
                                                                                         : FrameKind::External;
    return out;
}

/// Sign relating two frames that span the same subspace.
inline RelativeSign relative_sign(const OrientationFrame& a, const OrientationFrame& b) {
    if (a.size() != b.size() || a.ambient_dim != b.ambient_dim)
        throw DegenerateFrame("frames of different size cannot be compared");
    const int k = a.size();
    if (k == 0) return {a.polarity * b.polarity};
    auto stacked = a.vectors;
    stacked.insert(stacked.end(), b.vectors.begin(), b.vectors.end());
    if (detail::rank_of(stacked) != k) throw DegenerateFrame("frames span different subspaces");
    // Find k coordinates on which b's minor is invertible.
    std::vector<int> cols;
    std::vector<std::vector<Rational>> picked_rows(k);
    for (int c = 0; c < a.ambient_dim && static_cast<int>(cols.size()) < k; ++c) {
        std::vector<int> trial = cols;
        trial.push_back(c);
        std::vector<std::vector<Rational>> sub(b.vectors.size(), std::vector<Rational>(trial.size()));
        for (int i = 0; i < k; ++i)
            for (size_t j = 0; j < trial.size(); ++j) sub[i][j] = b.vectors[i][trial[j]];
        // Columns of b restricted to `trial` must stay independent.
        std::vector<std::vector<Rational>> transposed(trial.size(), std::vector<Rational>(k));
        for (int i = 0; i < k; ++i)
            for (size_t j = 0; j < trial.size(); ++j) transposed[j][i] = sub[i][j];
        if (detail::rank_of(transposed) == static_cast<int>(trial.size())) cols = trial;
    }
    const int sa = sign(detail::minor_det(a.vectors, cols));
    const int sb = sign(detail::minor_det(b.vectors, cols));
    return {sa * sb * a.polarity * b.polarity};
}

/// Orientation of a full frame relative to the standard basis.
inline RelativeSign orientation_sign(const OrientationFrame& f) {
    if (f.size() != f.ambient_dim) throw DegenerateFrame("frame does not span the ambient space");
    return relative_sign(f, standard_orientation(f.ambient_dim));
}

/// Whether an external orientation, followed by the internal orientation of
/// the same submanifold, reproduces the manifold orientation (+1) or its
/// reverse (-1).
inline RelativeSign untwist(const OrientationFrame& external, const OrientationFrame& tangent,
                            const OrientationFrame& manifold_orientation) {
    if (external.size() + tangent.size() != manifold_orientation.size())
        throw DegenerateFrame("external and tangent frames do not complement each other");
    if (external.ambient_dim != manifold_orientation.ambient_dim ||
        tangent.ambient_dim != manifold_orientation.ambient_dim)
        throw DegenerateFrame("dimension mismatch");
    return relative_sign(concat(external, tangent), manifold_orientation);
}

/// External orientation induced on a submanifold with internal orientation
/// `tangent` by the manifold orientation.
inline OrientationFrame twist(const OrientationFrame& tangent, const OrientationFrame& manifold_orientation) {
    const int n = manifold_orientation.ambient_dim;
    if (manifold_orientation.size() != n) throw DegenerateFrame("manifold orientation must span the space");
    OrientationFrame ext;
    ext.ambient_dim = n;
    ext.kind = FrameKind::External;
    auto span = tangent.vectors;
    for (int a = 0; a < n && static_cast<int>(span.size()) < n; ++a) {
        auto trial = span;
        trial.push_back(axis(n, a));
        if (detail::rank_of(trial) == static_cast<int>(trial.size())) {
            span = std::move(trial);
            ext.vectors.push_back(axis(n, a));
        }
    }
    ext.polarity = untwist(ext, tangent, manifold_orientation).value;
    return ext;
}

/// Internal orientation on the subspace spanned by `tangent_span` induced by an
/// external orientation and the manifold orientation.
inline OrientationFrame untwist_frame(const OrientationFrame& external, const OrientationFrame& tangent_span,
                                      const OrientationFrame& manifold_orientation) {
    OrientationFrame internal = tangent_span;
    internal.kind = FrameKind::Internal;
    internal.polarity = 1;
    internal.polarity = untwist(external, internal, manifold_orientation).value;
    return internal;
}

/// Sign with which the facet (given as an ordered vertex tuple) appears in the
/// boundary of the ordered cell tuple; equals the outward-first inherited
/// orientation.
inline RelativeSign induced_boundary_sign(const std::vector<int>& cell, const std::vector<int>& facet) {
    if (facet.size() + 1 != cell.size()) throw ComplexError("facet is not of codimension one");
    int omitted = -1;
    for (size_t i = 0; i < cell.size(); ++i) {
        if (std::find(facet.begin(), facet.end(), cell[i]) == facet.end()) {
            if (omitted >= 0) throw ComplexError("facet is not a face of the cell");
            omitted = static_cast<int>(i);
        }
    }
    if (omitted < 0) throw ComplexError("facet is not a face of the cell");
    std::vector<int> canonical;
    for (size_t i = 0; i < cell.size(); ++i)
        if (static_cast<int>(i) != omitted) canonical.push_back(cell[i]);
    // Relative order of `facet` against the tuple obtained by deleting the vertex.
    std::vector<int> positions;
    for (int v : facet)
        positions.push_back(static_cast<int>(std::find(canonical.begin(), canonical.end(), v) - canonical.begin()));
    const int perm = permutation_sign(positions);
    if (perm == 0) throw ComplexError("facet repeats a vertex");
    return {(omitted % 2 == 0 ? 1 : -1) * perm};
}

/// Same sign looked up through indices into a complex, which must agree with
/// the stored incidence matrix.
inline RelativeSign induced_boundary_sign(int k, int cell_index, int facet_index, const SimplicialComplex& K) {
    const auto& cell = K.simplex(k, cell_index);
    const auto& facet = K.simplex(k - 1, facet_index);
    if (!std::includes(cell.begin(), cell.end(), facet.begin(), facet.end()))
        throw ComplexError("cell and facet are not incident");
    return induced_boundary_sign(cell, facet);
}

}  // namespace extcalc
