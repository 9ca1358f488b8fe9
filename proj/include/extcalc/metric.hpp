#pragma once

// Constant metrics of arbitrary signature.  Lorentzian metrics use the
// (-,+,+,+) convention: the negative direction is time.

#include "rational.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace extcalc {

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class S>
using Matrix = std::vector<std::vector<S>>;

template <class S>
using Vector = std::vector<S>;

namespace detail {

template <class S>
bool near_zero(const S& v, double tol) {
    return ScalarTraits<S>::is_zero(v, tol);
}

/// Determinant and inverse by Gauss-Jordan with partial pivoting.
template <class S>
std::optional<Matrix<S>> invert(const Matrix<S>& m, S& det, double tol) {
    const size_t n = m.size();
    Matrix<S> a = m;
    Matrix<S> inv(n, Vector<S>(n, S(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = S(1);
    det = S(1);
    for (size_t c = 0; c < n; ++c) {
        size_t pivot = n;
        double best = 0.0;
        for (size_t r = c; r < n; ++r) {
            const double mag = std::abs(to_double(a[r][c]));
            if (!near_zero(a[r][c], tol) && (pivot == n || mag > best)) {
                pivot = r;
                best = mag;
                if constexpr (ScalarTraits<S>::exact) break;
            }
        }
        if (pivot == n) {
            det = S(0);
            return std::nullopt;
        }
        if (pivot != c) {
            std::swap(a[pivot], a[c]);
            std::swap(inv[pivot], inv[c]);
            det = -det;
        }
        const S p = a[c][c];
        det *= p;
        for (size_t j = 0; j < n; ++j) {
            a[c][j] /= p;
            inv[c][j] /= p;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || near_zero(a[r][c], 0.0)) continue;
            const S f = a[r][c];
            for (size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

/// Signs of the diagonal of a congruence-diagonalised symmetric matrix
/// (Sylvester's law of inertia).
template <class S>
std::vector<int> inertia(Matrix<S> a, double tol) {
    const size_t n = a.size();
    std::vector<int> signs;
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
        size_t pivot = n;
        for (size_t i = 0; i < n; ++i)
            if (!done[i] && !near_zero(a[i][i], tol)) { pivot = i; break; }
        if (pivot == n) {
            // All remaining diagonal entries vanish; combine two coordinates.
            size_t pi = n, pj = n;
            for (size_t i = 0; i < n && pi == n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && i != j && !near_zero(a[i][j], tol)) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) {
                for (size_t i = 0; i < n; ++i)
                    if (!done[i]) signs.push_back(0);
                return signs;
            }
            for (size_t k = 0; k < n; ++k) a[pi][k] += a[pj][k];
            for (size_t k = 0; k < n; ++k) a[k][pi] += a[k][pj];
            pivot = pi;
        }
        const S p = a[pivot][pivot];
        signs.push_back(sign(p));
        done[pivot] = true;
        for (size_t r = 0; r < n; ++r) {
            if (done[r] || near_zero(a[r][pivot], 0.0)) continue;
            const S f = a[r][pivot] / p;
            for (size_t k = 0; k < n; ++k) a[r][k] -= f * a[pivot][k];
        }
        for (size_t c = 0; c < n; ++c) {
            if (done[c]) continue;
            a[pivot][c] = S(0);
            a[c][pivot] = S(0);
        }
    }
    return signs;
}

}  // namespace detail

template <class S>
class BasicMetric {
public:
    BasicMetric() = default;

    explicit BasicMetric(Matrix<S> g, double tol = 1e-12) : g_(std::move(g)), tol_(tol) {
        const size_t n = g_.size();
        for (const auto& row : g_)
            if (row.size() != n) throw MetricError("metric matrix is not square");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (!detail::near_zero(S(g_[i][j] - g_[j][i]), tol_)) throw MetricError("metric matrix is not symmetric");
        auto inv = detail::invert(g_, det_, tol_);
        if (!inv) throw MetricError("metric is singular");
        inv_ = std::move(*inv);
        auto signs = detail::inertia(g_, tol_);
        negatives_ = 0;
        for (int s : signs)
            if (s < 0) ++negatives_;
        signature_.assign(n, 1);
        for (int i = 0; i < negatives_; ++i) signature_[i] = -1;
    }

    static BasicMetric diag(const Vector<S>& d) {
        Matrix<S> g(d.size(), Vector<S>(d.size(), S(0)));
        for (size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
        return BasicMetric(std::move(g));
    }

    static BasicMetric euclidean(int n) { return diag(Vector<S>(n, S(1))); }

    static BasicMetric minkowski(int n) {
        Vector<S> d(n, S(1));
        d.at(0) = S(-1);
        return diag(d);
    }

    int dim() const noexcept { return static_cast<int>(g_.size()); }
    const Matrix<S>& matrix() const noexcept { return g_; }
    const Matrix<S>& inverse() const noexcept { return inv_; }
    const S& operator()(int i, int j) const { return g_[i][j]; }
    const S& determinant() const noexcept { return det_; }
    int det_sign() const { return sign(det_); }
    double tolerance() const noexcept { return tol_; }

    /// Sorted signs, negatives first: (-,+,+,+) for spacetime.
    const std::vector<int>& signature() const noexcept { return signature_; }
    int negative_count() const noexcept { return negatives_; }
    bool is_riemannian() const noexcept { return negatives_ == 0; }
    bool is_lorentzian() const noexcept { return negatives_ == 1; }

    S inner(const Vector<S>& u, const Vector<S>& v) const {
        check(u);
        check(v);
        S total = S(0);
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) total += g_[i][j] * u[i] * v[j];
        return total;
    }

    S inverse_inner(const Vector<S>& a, const Vector<S>& b) const {
        check(a);
        check(b);
        S total = S(0);
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) total += inv_[i][j] * a[i] * b[j];
        return total;
    }

    /// Lowers an index: vector components to 1-form components.
    Vector<S> flat(const Vector<S>& v) const {
        check(v);
        Vector<S> out(dim(), S(0));
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) out[i] += g_[i][j] * v[j];
        return out;
    }

    /// Raises an index: 1-form components to vector components.
    Vector<S> sharp(const Vector<S>& w) const {
        check(w);
        Vector<S> out(dim(), S(0));
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) out[i] += inv_[i][j] * w[j];
        return out;
    }

    bool is_zero(const S& s) const { return detail::near_zero(s, tol_); }

private:
    void check(const Vector<S>& v) const {
        if (static_cast<int>(v.size()) != dim()) throw MetricError("vector dimension does not match metric");
    }

    Matrix<S> g_;
    Matrix<S> inv_;
    S det_ = S(0);
    std::vector<int> signature_;
    int negatives_ = 0;
    double tol_ = 1e-12;
};

using Metric = BasicMetric<Rational>;
using MetricD = BasicMetric<double>;

template <class S>
BasicMetric<double> to_float(const BasicMetric<S>& g) {
    Matrix<double> m(g.dim(), Vector<double>(g.dim()));
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) m[i][j] = to_double(g(i, j));
    return BasicMetric<double>(std::move(m));
}

/// Parses `diag(-1,1,1,1)` or a full matrix `[1 0; 0 1]` (rows separated by ';',
/// entries by spaces or commas).
inline Metric parse_metric(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
        size_t i = 0;
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
        return t.substr(i);
    };
    s = trim(s);
    auto split = [](const std::string& t, const std::string& seps) {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : t) {
            if (seps.find(ch) != std::string::npos) {
                if (!cur.empty()) parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        if (!cur.empty()) parts.push_back(cur);
        return parts;
    };
    try {
        if (s.rfind("diag(", 0) == 0 && s.back() == ')') {
            Vector<Rational> d;
            for (const auto& part : split(s.substr(5, s.size() - 6), ", \t")) d.push_back(parse_rational(part));
            if (d.empty()) throw ParseError("empty diag()");
            return Metric::diag(d);
        }
        if (!s.empty() && s.front() == '[' && s.back() == ']') {
            Matrix<Rational> m;
            for (const auto& row : split(s.substr(1, s.size() - 2), ";")) {
                Vector<Rational> r;
                for (const auto& part : split(row, ", \t")) r.push_back(parse_rational(part));
                if (!r.empty()) m.push_back(std::move(r));
            }
            return Metric(std::move(m));
        }
    } catch (const MetricError&) {
        throw;
    }
    throw ParseError("metric literal must be diag(...) or [..; ..], got '" + s + "'");
}

inline std::string metric_literal(const Metric& g) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < g.dim(); ++i) {
        if (i) os << "; ";
        for (int j = 0; j < g.dim(); ++j) {
            if (j) os << " ";
            os << to_string(g(i, j));
        }
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// Causal structure, lengths and angles.

enum class CausalType { Timelike, Lightlike, Spacelike };
enum class TimeOrientation { Future, Past, NotApplicable };

struct Classification {
    CausalType type;
    TimeOrientation orientation;
};

inline std::string to_string(CausalType t) {
    switch (t) {
        case CausalType::Timelike: return "timelike";
        case CausalType::Lightlike: return "lightlike";
        case CausalType::Spacelike: return "spacelike";
    }
    return "?";
}

inline std::string to_string(TimeOrientation t) {
    switch (t) {
        case TimeOrientation::Future: return "future";
        case TimeOrientation::Past: return "past";
        case TimeOrientation::NotApplicable: return "n/a";
    }
    return "?";
}

template <class S>
S norm_squared(const Vector<S>& v, const BasicMetric<S>& g) {
    return g.inner(v, v);
}

/// A future-pointing reference timelike vector: the first coordinate axis
/// with negative norm, or the combination found by congruence otherwise.
template <class S>
Vector<S> time_reference(const BasicMetric<S>& g) {
    if (!g.is_lorentzian()) throw MetricError("time orientation needs a Lorentzian metric");
    for (int i = 0; i < g.dim(); ++i) {
        if (sign(g(i, i)) < 0) {
            Vector<S> e(g.dim(), S(0));
            e[i] = S(1);
            return e;
        }
    }
    // Sum of two axes e_i + s e_j with g_ij making the combination timelike.
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i + 1; j < g.dim(); ++j)
            for (int s : {1, -1}) {
                Vector<S> e(g.dim(), S(0));
                e[i] = S(1);
                e[j] = S(s);
                if (sign(g.inner(e, e)) < 0) return e;
            }
    throw MetricError("no coordinate timelike direction found");
}

template <class S>
Classification classify(const Vector<S>& v, const BasicMetric<S>& g) {
    bool all_zero = true;
    for (const auto& c : v)
        if (!g.is_zero(c)) all_zero = false;
    if (all_zero) throw MetricError("cannot classify the zero vector");
    const S n2 = g.inner(v, v);
    CausalType type = g.is_zero(n2) ? CausalType::Lightlike : (sign(n2) < 0 ? CausalType::Timelike : CausalType::Spacelike);
    if (type == CausalType::Spacelike || !g.is_lorentzian()) return {type, TimeOrientation::NotApplicable};
    const S t = g.inner(v, time_reference(g));
    return {type, sign(t) < 0 ? TimeOrientation::Future : TimeOrientation::Past};
}

enum class AngleMode { LorentzGamma, RiemannianCosine };

template <class S>
struct GammaReport {
    S value;
    AngleMode mode;
};

/// |g(u, v)| for unit timelike u, v (the gamma factor), or g(u, v) for unit
/// vectors of a Riemannian metric (the cosine of their angle).
template <class S>
GammaReport<S> gamma_factor(const Vector<S>& u, const Vector<S>& v, const BasicMetric<S>& g) {
    const S uu = g.inner(u, u);
    const S vv = g.inner(v, v);
    if (g.is_riemannian()) {
        if (!g.is_zero(S(uu - S(1))) || !g.is_zero(S(vv - S(1)))) throw MetricError("cosine needs unit vectors");
        return {g.inner(u, v), AngleMode::RiemannianCosine};
    }
    if (!g.is_lorentzian()) throw MetricError("gamma factor needs a Riemannian or Lorentzian metric");
    if (!g.is_zero(S(uu + S(1))) || !g.is_zero(S(vv + S(1))))
        throw MetricError("gamma factor needs unit timelike vectors");
    const auto cu = classify(u, g);
    const auto cv = classify(v, g);
    if (cu.orientation != cv.orientation) throw MetricError("vectors have opposite time orientation");
    return {scalar_abs(g.inner(u, v)), AngleMode::LorentzGamma};
}

/// Basis of {W : g(V, W) = 0}.  For lightlike V the span contains V itself.
template <class S>
std::vector<Vector<S>> orthogonal_complement(const Vector<S>& v, const BasicMetric<S>& g) {
    const Vector<S> w = g.flat(v);
    int pivot = -1;
    double best = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        if (g.is_zero(w[i])) continue;
        const double mag = std::abs(to_double(w[i]));
        if (pivot < 0 || (!ScalarTraits<S>::exact && mag > best)) {
            pivot = i;
            best = mag;
        }
    }
    if (pivot < 0) throw MetricError("orthogonal complement of the zero vector");
    std::vector<Vector<S>> basis;
    for (int j = 0; j < g.dim(); ++j) {
        if (j == pivot) continue;
        Vector<S> b(g.dim(), S(0));
        b[j] = S(1);
        b[pivot] = -w[j] / w[pivot];
        basis.push_back(std::move(b));
    }
    return basis;
}

/// Orientation of the metric dual 1-form relative to the vector: +1 when the
/// 1-form increases along V (spacelike), -1 when reversed (timelike).  For
/// lightlike V the sign is the limit of V + eps*S with S the spatial part of V
/// (time components removed), which resolves to the spacelike side.
template <class S>
int metric_dual_orientation(const Vector<S>& v, const BasicMetric<S>& g) {
    const S n2 = g.inner(v, v);
    if (!g.is_zero(n2)) return sign(n2);
    if (!g.is_lorentzian()) throw MetricError("null vector in a non-Lorentzian metric");
    Vector<S> spatial = v;
    const auto t = time_reference(g);
    const S tt = g.inner(t, t);
    const S proj = g.inner(v, t) / tt;
    for (int i = 0; i < g.dim(); ++i) spatial[i] -= proj * t[i];
    // g(V + eps S, V + eps S) = 2 eps g(V,S) + eps^2 g(S,S); leading term decides.
    const S vs = g.inner(v, spatial);
    if (!g.is_zero(vs)) return sign(vs);
    return sign(g.inner(spatial, spatial));
}

/// Affine map x = J u + offset from m-space into n-space.
template <class S>
struct AffineMap {
    Matrix<S> jacobian;  // n rows, m columns
    Vector<S> offset;

    int source_dim() const { return jacobian.empty() ? 0 : static_cast<int>(jacobian.front().size()); }
    int target_dim() const { return static_cast<int>(jacobian.size()); }

    Vector<S> apply(const Vector<S>& u) const {
        Vector<S> x = offset.empty() ? Vector<S>(target_dim(), S(0)) : offset;
        for (int i = 0; i < target_dim(); ++i)
            for (int a = 0; a < source_dim(); ++a) x[i] += jacobian[i][a] * u[a];
        return x;
    }

    /// (this after inner): u -> this(inner(u)).
    AffineMap compose(const AffineMap& inner) const {
        AffineMap out;
        out.jacobian.assign(target_dim(), Vector<S>(inner.source_dim(), S(0)));
        for (int i = 0; i < target_dim(); ++i)
            for (int a = 0; a < inner.source_dim(); ++a)
                for (int k = 0; k < source_dim(); ++k) out.jacobian[i][a] += jacobian[i][k] * inner.jacobian[k][a];
        Vector<S> zero(inner.source_dim(), S(0));
        out.offset = apply(inner.apply(zero));
        return out;
    }
};

/// Pullback metric J^T g J.  Throws when the result is degenerate.
template <class S>
BasicMetric<S> induced_metric(const AffineMap<S>& phi, const BasicMetric<S>& g) {
    if (phi.target_dim() != g.dim()) throw MetricError("embedding target does not match metric dimension");
    const int m = phi.source_dim();
    Matrix<S> h(m, Vector<S>(m, S(0)));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int i = 0; i < g.dim(); ++i)
                for (int j = 0; j < g.dim(); ++j) h[a][b] += phi.jacobian[i][a] * g(i, j) * phi.jacobian[j][b];
    try {
        return BasicMetric<S>(std::move(h), g.tolerance());
    } catch (const MetricError& e) {
        throw MetricError(std::string("degenerate induced metric: ") + e.what());
    }
}

}  // namespace extcalc
