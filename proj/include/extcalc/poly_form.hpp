#pragma once

// Exact exterior algebra on flat n-space: differential forms and vector
// fields whose components are polynomials with rational coefficients.
//
// A p-form is stored as a map from strictly increasing index sets
// {i1 < ... < ip} to the coefficient of dx^i1 ^ ... ^ dx^ip.  Twisted forms
// store the components they would have after untwisting with the standard
// orientation of the coordinate space; wedge, pullback and Hodge act on
// those components and only the parity tag changes.

#include "metric.hpp"
#include "parity.hpp"
#include "permutation.hpp"
#include "polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace extcalc {

using IndexSet = std::vector<int>;

class FormError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PolyForm {
public:
    PolyForm() = default;
    PolyForm(int n, int p, Parity parity = Parity::Straight) : n_(n), p_(p), parity_(parity) {
        if (n < 0 || p < 0) throw FormError("negative dimension or degree");
    }

    /// Scalar field as a 0-form.
    static PolyForm scalar(const Polynomial& f, Parity parity = Parity::Straight) {
        PolyForm w(f.nvars(), 0, parity);
        w.add(IndexSet{}, f);
        return w;
    }

    /// Coordinate basis form dx^I with coefficient `c`.
    static PolyForm basis(int n, const IndexSet& indices, const Rational& c = 1, Parity parity = Parity::Straight) {
        PolyForm w(n, static_cast<int>(indices.size()), parity);
        IndexSet sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        const int s = permutation_sign(indices);
        if (s == 0) return w;
        w.add(sorted, Polynomial::constant(n, c * s));
        return w;
    }

    int ambient_dim() const noexcept { return n_; }
    int degree() const noexcept { return p_; }
    Parity parity() const noexcept { return parity_; }
    const std::map<IndexSet, Polynomial>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    PolyForm with_parity(Parity p) const {
        PolyForm out = *this;
        out.parity_ = p;
        return out;
    }

    Polynomial component(const IndexSet& indices) const {
        auto it = terms_.find(indices);
        return it == terms_.end() ? Polynomial(n_) : it->second;
    }

    /// Accumulates `f` onto the component of a sorted index set.
    void add(const IndexSet& indices, const Polynomial& f) {
        if (static_cast<int>(indices.size()) != p_) throw FormError("index set size does not match degree");
        if (f.nvars() != n_) throw FormError("coefficient arity does not match ambient dimension");
        for (size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] < 0 || indices[i] >= n_) throw FormError("index out of range");
            if (i > 0 && indices[i] <= indices[i - 1]) throw FormError("index set not strictly increasing");
        }
        if (f.is_zero()) return;
        auto [it, inserted] = terms_.emplace(indices, f);
        if (!inserted) {
            it->second += f;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.n_ == b.n_ && a.p_ == b.p_ && a.parity_ == b.parity_ && a.terms_ == b.terms_;
    }

    /// `n=3 p=2 parity=twisted; [1,2]: 3/2*x0^2; [0,1]: -1` (index sets and
    /// variables are 0-based); a zero form is written with the single term `0`.
    std::string str() const {
        std::ostringstream os;
        os << "n=" << n_ << " p=" << p_ << " parity=" << to_string(parity_) << ";";
        if (terms_.empty()) {
            os << " 0";
            return os.str();
        }
        bool first = true;
        for (const auto& [idx, f] : terms_) {
            os << (first ? " " : "; ") << "[";
            for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
            os << "]: " << f.str();
            first = false;
        }
        return os.str();
    }

    static PolyForm parse(const std::string& text) {
        std::vector<std::string> parts;
        {
            std::string cur;
            for (char ch : text) {
                if (ch == ';') {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(ch);
                }
            }
            parts.push_back(cur);
        }
        std::istringstream header(parts.front());
        std::optional<int> n, p;
        Parity parity = Parity::Straight;
        std::string tok;
        while (header >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw ParseError("bad form header token '" + tok + "'");
            const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            try {
                if (key == "n") n = std::stoi(val);
                else if (key == "p") p = std::stoi(val);
                else if (key == "parity") parity = parse_parity(val);
                else throw ParseError("unknown form header key '" + key + "'");
            } catch (const std::invalid_argument& e) {
                throw ParseError(std::string("bad form header: ") + e.what());
            }
        }
        if (!p) throw ParseError("form header lacks p=");
        struct Raw {
            IndexSet idx;
            std::string poly;
        };
        std::vector<Raw> raws;
        int max_index = -1;
        for (size_t i = 1; i < parts.size(); ++i) {
            std::string t = parts[i];
            const auto first = t.find_first_not_of(" \t\n");
            if (first == std::string::npos) continue;
            t = t.substr(first);
            if (t == "0" || t.rfind("0 ", 0) == 0) continue;
            if (t.front() != '[') throw ParseError("form term must start with '[': '" + t + "'");
            const auto close = t.find(']');
            const auto colon = t.find(':', close);
            if (close == std::string::npos || colon == std::string::npos) throw ParseError("bad form term '" + t + "'");
            Raw r;
            std::string inner = t.substr(1, close - 1);
            std::string cur;
            for (char ch : inner + ",") {
                if (ch == ',') {
                    if (cur.find_first_not_of(" \t") != std::string::npos) {
                        r.idx.push_back(std::stoi(cur));
                        max_index = std::max(max_index, r.idx.back());
                    }
                    cur.clear();
                } else {
                    cur.push_back(ch);
                }
            }
            r.poly = t.substr(colon + 1);
            raws.push_back(std::move(r));
        }
        if (!n) {
            int max_var = -1;
            for (const auto& r : raws) {
                for (size_t pos = r.poly.find('x'); pos != std::string::npos; pos = r.poly.find('x', pos + 1)) {
                    size_t end = pos + 1;
                    while (end < r.poly.size() && std::isdigit(static_cast<unsigned char>(r.poly[end]))) ++end;
                    if (end > pos + 1) max_var = std::max(max_var, std::stoi(r.poly.substr(pos + 1, end - pos - 1)));
                }
            }
            n = std::max({max_index + 1, max_var + 1, *p});
        }
        PolyForm w(*n, *p, parity);
        for (const auto& r : raws) {
            if (static_cast<int>(r.idx.size()) != *p) throw ParseError("index set size does not match p");
            IndexSet sorted = r.idx;
            std::sort(sorted.begin(), sorted.end());
            const int s = permutation_sign(r.idx);
            if (s == 0) continue;
            try {
                w.add(sorted, Polynomial::parse(r.poly, *n) * Rational(s));
            } catch (const FormError& e) {
                throw ParseError(e.what());
            }
        }
        return w;
    }

private:
    int n_ = 0;
    int p_ = 0;
    Parity parity_ = Parity::Straight;
    std::map<IndexSet, Polynomial> terms_;
};

struct PolyVectorField {
    std::vector<Polynomial> components;
    Parity parity = Parity::Straight;

    int ambient_dim() const { return static_cast<int>(components.size()); }

    static PolyVectorField constant(const std::vector<Rational>& v, Parity p = Parity::Straight) {
        PolyVectorField out;
        const int n = static_cast<int>(v.size());
        for (const auto& c : v) out.components.push_back(Polynomial::constant(n, c));
        out.parity = p;
        return out;
    }

    /// Coordinate vector field d/dx^i.
    static PolyVectorField coordinate(int n, int i) {
        std::vector<Rational> v(n, Rational(0));
        v.at(i) = 1;
        return constant(v);
    }
};

/// Polynomial map from m-space to n-space: one polynomial in m variables per
/// target coordinate.
struct PolyMap {
    int source_dim = 0;
    std::vector<Polynomial> components;

    int target_dim() const { return static_cast<int>(components.size()); }
};

// ---------------------------------------------------------------------------

namespace detail {

inline void require_same_space(const PolyForm& a, const PolyForm& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw FormError("forms live in different dimensions");
}

}  // namespace detail

/// Sum of two forms of equal degree and parity.
inline PolyForm add(const PolyForm& a, const PolyForm& b) {
    detail::require_same_space(a, b);
    if (a.degree() != b.degree()) throw FormError("cannot add forms of different degree");
    if (a.parity() != b.parity()) throw FormError("cannot add a twisted and an untwisted form");
    PolyForm out = a;
    for (const auto& [idx, f] : b.terms()) out.add(idx, f);
    return out;
}

inline PolyForm operator+(const PolyForm& a, const PolyForm& b) { return add(a, b); }

/// Multiplication by a scalar field; the result's parity is the product of parities.
inline PolyForm scale(const Polynomial& f, const PolyForm& w, Parity scalar_parity = Parity::Straight) {
    if (f.nvars() != w.ambient_dim()) throw FormError("scalar field lives in a different dimension");
    PolyForm out(w.ambient_dim(), w.degree(), w.parity() * scalar_parity);
    for (const auto& [idx, g] : w.terms()) out.add(idx, f * g);
    return out;
}

inline PolyForm scale(const Rational& c, const PolyForm& w) {
    return scale(Polynomial::constant(w.ambient_dim(), c), w);
}

inline PolyForm operator-(const PolyForm& w) { return scale(Rational(-1), w); }
inline PolyForm operator-(const PolyForm& a, const PolyForm& b) { return add(a, -b); }

/// Exterior product.  When p + q exceeds the dimension the result is the
/// zero form of degree p + q.
inline PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    detail::require_same_space(a, b);
    const int n = a.ambient_dim();
    const int deg = a.degree() + b.degree();
    PolyForm out(n, deg, a.parity() * b.parity());
    if (deg > n) return out;
    for (const auto& [I, f] : a.terms()) {
        for (const auto& [J, g] : b.terms()) {
            IndexSet joined = I;
            joined.insert(joined.end(), J.begin(), J.end());
            const int s = permutation_sign(joined);
            if (s == 0) continue;
            std::sort(joined.begin(), joined.end());
            out.add(joined, (f * g) * Rational(s));
        }
    }
    return out;
}

inline PolyForm exterior_derivative(const PolyForm& w) {
    const int n = w.ambient_dim();
    PolyForm out(n, w.degree() + 1, w.parity());
    if (w.degree() >= n) return out;
    for (const auto& [I, f] : w.terms()) {
        for (int i = 0; i < n; ++i) {
            if (std::find(I.begin(), I.end(), i) != I.end()) continue;
            Polynomial df = f.derivative(i);
            if (df.is_zero()) continue;
            IndexSet joined{i};
            joined.insert(joined.end(), I.begin(), I.end());
            const int s = permutation_sign(joined);
            std::sort(joined.begin(), joined.end());
            out.add(joined, df * Rational(s));
        }
    }
    return out;
}

struct ScalarField {
    Polynomial value;
    Parity parity = Parity::Straight;
};

/// Contraction of a 1-form with a vector field.
inline ScalarField pair(const PolyForm& w, const PolyVectorField& v) {
    if (w.degree() != 1) throw FormError("pairing needs a 1-form");
    if (v.ambient_dim() != w.ambient_dim()) throw FormError("vector and form live in different dimensions");
    Polynomial total(w.ambient_dim());
    for (const auto& [I, f] : w.terms()) total += f * v.components[I[0]];
    return {total, w.parity() * v.parity};
}

/// The directional derivative V(f) = <df, V>.
inline ScalarField vector_on_scalar(const PolyVectorField& v, const Polynomial& f,
                                    Parity scalar_parity = Parity::Straight) {
    return pair(exterior_derivative(PolyForm::scalar(f, scalar_parity)), v);
}

/// Interior product i_V w.
inline PolyForm interior_product(const PolyVectorField& v, const PolyForm& w) {
    if (w.degree() < 1) throw FormError("interior product of a 0-form");
    if (v.ambient_dim() != w.ambient_dim()) throw FormError("vector and form live in different dimensions");
    PolyForm out(w.ambient_dim(), w.degree() - 1, w.parity() * v.parity);
    for (const auto& [I, f] : w.terms()) {
        for (size_t k = 0; k < I.size(); ++k) {
            const Polynomial& vk = v.components[I[k]];
            if (vk.is_zero()) continue;
            IndexSet rest;
            for (size_t j = 0; j < I.size(); ++j)
                if (j != k) rest.push_back(I[j]);
            out.add(rest, (vk * f) * Rational(k % 2 == 0 ? 1 : -1));
        }
    }
    return out;
}

/// Pullback of a form on n-space along a polynomial map from m-space.
inline PolyForm pullback(const PolyMap& phi, const PolyForm& w) {
    if (phi.target_dim() != w.ambient_dim()) throw FormError("map target does not match the form's space");
    for (const auto& c : phi.components)
        if (c.nvars() != phi.source_dim) throw FormError("map component has wrong arity");
    const int m = phi.source_dim;
    PolyForm out(m, w.degree(), w.parity());
    if (w.degree() > m) return out;
    std::vector<PolyForm> differentials;
    for (const auto& c : phi.components) differentials.push_back(exterior_derivative(PolyForm::scalar(c)));
    for (const auto& [I, f] : w.terms()) {
        PolyForm term = PolyForm::scalar(f.substitute(phi.components));
        for (int i : I) term = wedge(term, differentials[i]);
        out = add(out, term.with_parity(w.parity()));
    }
    return out;
}

/// Frobenius test: w ^ dw vanishes identically.
inline bool is_integrable_1form(const PolyForm& w) {
    if (w.degree() != 1) throw FormError("integrability test needs a 1-form");
    return wedge(w, exterior_derivative(w)).is_zero();
}

/// Flips parity by untwisting or twisting against an orientation of the
/// coordinate space (+1 standard, -1 reversed); an involution.
inline PolyForm twist_form(const PolyForm& w, int orientation = 1) {
    return scale(Rational(orientation), w).with_parity(flip(w.parity()));
}

// ---------------------------------------------------------------------------
// Metric operations on forms.

namespace detail {

inline Rational submatrix_det(const Matrix<Rational>& m, const IndexSet& rows, const IndexSet& cols) {
    std::vector<std::vector<Rational>> sub(rows.size(), std::vector<Rational>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) sub[i][j] = m[rows[i]][cols[j]];
    if (sub.empty()) return 1;
    // Inline Gaussian elimination.
    const size_t n = sub.size();
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t pivot = n;
        for (size_t r = c; r < n; ++r)
            if (sgn(sub[r][c]) != 0) { pivot = r; break; }
        if (pivot == n) return 0;
        if (pivot != c) {
            std::swap(sub[pivot], sub[c]);
            det = -det;
        }
        det *= sub[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (sgn(sub[r][c]) == 0) continue;
            const Rational f = sub[r][c] / sub[c][c];
            for (size_t j = c; j < n; ++j) sub[r][j] -= f * sub[c][j];
        }
    }
    return det;
}

inline std::vector<IndexSet> index_sets(int n, int p) {
    std::vector<IndexSet> out;
    IndexSet cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

inline IndexSet complement(int n, const IndexSet& I) {
    IndexSet out;
    for (int i = 0; i < n; ++i)
        if (std::find(I.begin(), I.end(), i) == I.end()) out.push_back(i);
    return out;
}

inline Rational sqrt_abs_det(const Metric& g) {
    auto root = exact_sqrt(Rational(abs(g.determinant())));
    if (!root) throw MetricError("|det g| is not a rational square; exact Hodge star unavailable");
    return *root;
}

}  // namespace detail

/// Induced inner product of two p-forms (polynomial valued).
inline Polynomial form_inner(const PolyForm& a, const PolyForm& b, const Metric& g) {
    detail::require_same_space(a, b);
    if (a.degree() != b.degree()) throw FormError("inner product of forms of different degree");
    if (g.dim() != a.ambient_dim()) throw MetricError("metric dimension does not match forms");
    Polynomial total(a.ambient_dim());
    for (const auto& [I, f] : a.terms())
        for (const auto& [J, h] : b.terms()) {
            const Rational m = detail::submatrix_det(g.inverse(), I, J);
            if (sgn(m) != 0) total += (f * h) * m;
        }
    return total;
}

/// Hodge dual: the (n-p)-form with a ^ *b = <a, b> vol, vol = sqrt|det g| dx^0..n-1.
/// Parity flips.  Needs |det g| to be the square of a rational.
inline PolyForm hodge(const PolyForm& w, const Metric& g) {
    const int n = w.ambient_dim();
    if (g.dim() != n) throw MetricError("metric dimension does not match form");
    const Rational root = detail::sqrt_abs_det(g);
    PolyForm out(n, n - w.degree(), flip(w.parity()));
    const auto sets = detail::index_sets(n, w.degree());
    for (const auto& [I, f] : w.terms()) {
        for (const auto& J : sets) {
            const Rational m = detail::submatrix_det(g.inverse(), I, J);
            if (sgn(m) == 0) continue;
            IndexSet Jc = detail::complement(n, J);
            IndexSet joined = J;
            joined.insert(joined.end(), Jc.begin(), Jc.end());
            const int s = permutation_sign(joined);
            out.add(Jc, f * Rational(m * root * s));
        }
    }
    return out;
}

/// Metric dual of a vector field: the 1-form g(V, .), parity unchanged.
inline PolyForm flat(const PolyVectorField& v, const Metric& g) {
    const int n = v.ambient_dim();
    if (g.dim() != n) throw MetricError("metric dimension does not match vector");
    PolyForm out(n, 1, v.parity);
    for (int i = 0; i < n; ++i) {
        Polynomial c(n);
        for (int j = 0; j < n; ++j)
            if (sgn(g(i, j)) != 0) c += v.components[j] * g(i, j);
        out.add({i}, c);
    }
    return out;
}

/// Metric dual of a 1-form: the vector field g^{-1}(w, .), parity unchanged.
inline PolyVectorField sharp(const PolyForm& w, const Metric& g) {
    if (w.degree() != 1) throw FormError("sharp needs a 1-form");
    const int n = w.ambient_dim();
    if (g.dim() != n) throw MetricError("metric dimension does not match form");
    PolyVectorField v;
    v.parity = w.parity();
    v.components.assign(n, Polynomial(n));
    for (const auto& [I, f] : w.terms())
        for (int i = 0; i < n; ++i)
            if (sgn(g.inverse()[i][I[0]]) != 0) v.components[i] += f * g.inverse()[i][I[0]];
    return v;
}

struct FormMagnitude {
    Rational squared;                // <w, w> at the point
    std::optional<Rational> exact;   // sqrt|<w, w>| when rational
    double value = 0.0;              // sqrt|<w, w>|
    int sign = 0;                    // sign of <w, w>
};

/// Magnitude of a form evaluated at a point: sqrt|<w, w>_g|, reported with
/// the sign of <w, w> (negative for e.g. dt^dx in spacetime).
inline FormMagnitude form_magnitude(const PolyForm& w, const Metric& g, const std::vector<Rational>& point = {}) {
    const std::vector<Rational> at = point.empty() ? std::vector<Rational>(w.ambient_dim(), Rational(0)) : point;
    const Rational sq = form_inner(w, w, g).evaluate(at);
    FormMagnitude m;
    m.squared = sq;
    m.sign = sgn(sq);
    m.exact = exact_sqrt(Rational(abs(sq)));
    m.value = m.exact ? m.exact->get_d() : std::sqrt(std::abs(sq.get_d()));
    return m;
}

}  // namespace extcalc
