#pragma once

// Diagonal (lowest order) Hodge stars for cochains.
//
// Simplicial: circumcentric duals under a constant Riemannian metric on the
// embedding space.  The dual of a k-simplex is the union, over flags
// s = s_k < s_{k+1} < ... < s_n, of the simplices spanned by the
// circumcentres of the flag; on a well-centred mesh every piece is positively
// oriented so only volumes are needed.
//
// Rectilinear: an axis-aligned grid with spacings h_i and a constant
// diagonal metric (Riemannian or Lorentzian).

#include "cochain.hpp"
#include "complex.hpp"
#include "metric.hpp"
#include "permutation.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace extcalc {

class NotWellCentered : public CochainError {
public:
    NotWellCentered(int k, int index, const Simplex& s)
        : CochainError("simplex " + describe(k, index, s) + " does not contain its circumcentre"), degree(k), cell(index) {}
    int degree;
    int cell;

private:
    static std::string describe(int k, int index, const Simplex& s) {
        std::string out = std::to_string(k) + ":" + std::to_string(index) + " (";
        for (size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
        return out + ")";
    }
};

/// Cochain living on the dual cells; entry i belongs to the dual of primal cell i.
struct DualCochain {
    int primal_degree = 0;
    int degree = 0;
    std::vector<double> values;
    Parity parity = Parity::Straight;
};

namespace detail {

struct Circumcentre {
    std::vector<double> point;
    std::vector<double> barycentric;
};

inline std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const size_t n = b.size();
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        if (A[p][c] == 0.0) throw MetricError("degenerate simplex");
        std::swap(A[p], A[c]);
        std::swap(b[p], b[c]);
        for (size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
            b[r] -= f * b[c];
        }
    }
    for (size_t i = 0; i < n; ++i) b[i] /= A[i][i];
    return b;
}

inline Circumcentre circumcentre(const std::vector<std::vector<double>>& pts, const MetricD& g) {
    const size_t k = pts.size() - 1;
    Circumcentre c;
    if (k == 0) {
        c.point = pts[0];
        c.barycentric = {1.0};
        return c;
    }
    const auto G = gram(pts, g);
    std::vector<double> rhs(k);
    for (size_t i = 0; i < k; ++i) rhs[i] = 0.5 * G[i][i];
    const auto lambda = solve_dense(G, rhs);
    c.point = pts[0];
    double l0 = 1.0;
    for (size_t i = 0; i < k; ++i) {
        l0 -= lambda[i];
        for (size_t a = 0; a < c.point.size(); ++a) c.point[a] += lambda[i] * (pts[i + 1][a] - pts[0][a]);
    }
    c.barycentric.push_back(l0);
    c.barycentric.insert(c.barycentric.end(), lambda.begin(), lambda.end());
    return c;
}

}  // namespace detail

/// Precomputed primal and circumcentric dual volumes.
class CircumcentricDual {
public:
    CircumcentricDual(const SimplicialComplex& K, const MetricD& g, double tol = 1e-12) : K_(K) {
        if (!g.is_riemannian()) throw MetricError("circumcentric duals need a Riemannian metric");
        if (g.dim() != K.embedding_dim()) throw MetricError("metric dimension does not match embedding");
        const int n = K.dim();
        centres_.resize(n + 1);
        primal_.resize(n + 1);
        dual_.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            for (int i = 0; i < K.count(k); ++i) {
                const auto pts = detail::points_of(K, K.simplex(k, i));
                auto cc = detail::circumcentre(pts, g);
                if (k >= 2)
                    for (double b : cc.barycentric)
                        if (b <= tol) throw NotWellCentered(k, i, K.simplex(k, i));
                centres_[k].push_back(std::move(cc.point));
                const double vol = detail::simplex_volume(pts, g);
                if (!(vol > 0.0)) throw CochainError("degenerate simplex " + std::to_string(k) + ":" + std::to_string(i));
                primal_[k].push_back(vol);
            }
            dual_[k].assign(K.count(k), 0.0);
        }
        // Walk every flag top-down and credit each piece to its lowest cell.
        for (int t = 0; t < K.count(n); ++t) {
            std::vector<std::pair<int, int>> chain{{n, t}};
            walk(chain, g);
        }
    }

    double primal_volume(int k, int i) const { return primal_.at(k).at(i); }
    double dual_volume(int k, int i) const { return dual_.at(k).at(i); }
    double ratio(int k, int i) const { return dual_volume(k, i) / primal_volume(k, i); }
    const std::vector<double>& circumcentre(int k, int i) const { return centres_.at(k).at(i); }

private:
    void walk(std::vector<std::pair<int, int>>& chain, const MetricD& g) {
        const auto [k, i] = chain.back();
        std::vector<std::vector<double>> pts;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) pts.push_back(centres_[it->first][it->second]);
        dual_[k][i] += detail::simplex_volume(pts, g);
        if (k == 0) return;
        const auto& B = K_.boundary_matrix(k);
        for (auto [face, s] : B.columns[i]) {
            (void)s;
            chain.push_back({k - 1, face});
            walk(chain, g);
            chain.pop_back();
        }
    }

    const SimplicialComplex& K_;
    std::vector<std::vector<std::vector<double>>> centres_;
    std::vector<std::vector<double>> primal_;
    std::vector<std::vector<double>> dual_;
};

/// Diagonal Hodge star: dual value = (dual volume / primal volume) x primal value.
/// The dual cell of a straight primal cell carries the primal orientation as its
/// external orientation, so parity flips.
inline DualCochain hodge_diagonal(const FloatCochain& w, const SimplicialComplex& K, const MetricD& g) {
    check_cochain(w, K);
    const CircumcentricDual dual(K, g);
    DualCochain out{w.degree, K.dim() - w.degree, std::vector<double>(w.values.size()), flip(w.parity)};
    for (size_t i = 0; i < w.values.size(); ++i) out.values[i] = dual.ratio(w.degree, static_cast<int>(i)) * w.values[i];
    return out;
}

/// Axis-aligned grid with cell sizes h and a constant diagonal metric.
struct RectilinearHodge {
    std::vector<double> spacing;
    std::vector<double> metric_diagonal;

    RectilinearHodge(std::vector<double> h, std::vector<double> gdiag)
        : spacing(std::move(h)), metric_diagonal(std::move(gdiag)) {
        if (spacing.size() != metric_diagonal.size()) throw MetricError("spacing and metric dimensions differ");
        for (double x : spacing)
            if (!(x > 0.0)) throw CochainError("grid spacings must be positive");
        for (double x : metric_diagonal)
            if (x == 0.0) throw MetricError("singular metric");
    }

    int dim() const { return static_cast<int>(spacing.size()); }

    /// Factor taking the value on the primal cell spanned by `axes` to the value
    /// on its dual cell: metric volume ratio x product of sign(g_ii) over the
    /// primal axes x sign of the permutation (axes, complement).
    double factor(const std::vector<int>& axes) const {
        std::vector<bool> in(dim(), false);
        for (int a : axes) {
            if (a < 0 || a >= dim() || in[a]) throw CochainError("bad axis set");
            in[a] = true;
        }
        double primal = 1.0, dual = 1.0, sign = 1.0;
        std::vector<int> order = axes;
        for (int a = 0; a < dim(); ++a) {
            const double len = spacing[a] * std::sqrt(std::abs(metric_diagonal[a]));
            if (in[a]) {
                primal *= len;
                if (metric_diagonal[a] < 0) sign = -sign;
            } else {
                dual *= len;
                order.push_back(a);
            }
        }
        return sign * permutation_sign(order) * dual / primal;
    }
};

}  // namespace extcalc
