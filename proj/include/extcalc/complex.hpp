#pragma once

// Simplicial complexes with oriented cells, chains and the boundary operator.
//
// Every simplex is stored as its sorted vertex tuple; that ordering is its
// reference internal orientation.  A tuple given in another order denotes the
// same cell with the sign of the sorting permutation.

#include "parity.hpp"
#include "permutation.hpp"
#include "rational.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extcalc {

using Simplex = std::vector<int>;

class ComplexError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a pseudo-manifold and the complex is not one.
class NotPseudoManifold : public ComplexError {
public:
    using ComplexError::ComplexError;
};

/// Column-oriented sparse integer matrix with entries in {-1, +1}.
struct SparseIncidence {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::pair<int, int>>> columns;  // (row, sign) per column
    std::vector<std::vector<std::pair<int, int>>> row_entries;  // (col, sign) per row

    int at(int r, int c) const {
        for (auto [row, s] : columns[c])
            if (row == r) return s;
        return 0;
    }
};

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Builds the closure of `top_simplices` over the given vertices.  The
    /// dimension is the largest simplex dimension unless `dim` is given.
    static SimplicialComplex build(std::vector<std::vector<Rational>> vertex_coords,
                                   const std::vector<std::vector<int>>& top_simplices,
                                   std::optional<int> dim = std::nullopt) {
        SimplicialComplex K;
        const size_t arity = vertex_coords.empty() ? 0 : vertex_coords.front().size();
        for (size_t v = 0; v < vertex_coords.size(); ++v) {
            if (vertex_coords[v].size() != arity)
                throw ComplexError("vertex " + std::to_string(v) + " has " +
                                   std::to_string(vertex_coords[v].size()) + " coordinates, expected " +
                                   std::to_string(arity));
        }
        int n = 0;
        for (const auto& s : top_simplices) n = std::max<int>(n, static_cast<int>(s.size()) - 1);
        if (dim) {
            if (*dim < n) throw ComplexError("simplex dimension exceeds declared dimension");
            n = *dim;
        }
        if (vertex_coords.empty() && !top_simplices.empty()) throw ComplexError("simplices given without vertices");
        K.dim_ = n;
        K.coords_ = std::move(vertex_coords);
        K.coords_d_.reserve(K.coords_.size());
        for (const auto& c : K.coords_) {
            std::vector<double> d;
            for (const auto& x : c) d.push_back(x.get_d());
            K.coords_d_.push_back(std::move(d));
        }

        std::vector<std::set<Simplex>> cells(n + 1);
        for (int v = 0; v < static_cast<int>(K.coords_.size()); ++v) cells[0].insert({v});
        for (size_t t = 0; t < top_simplices.size(); ++t) {
            const auto& s = top_simplices[t];
            if (s.empty()) throw ComplexError("empty simplex");
            for (int v : s) {
                if (v < 0 || v >= static_cast<int>(K.coords_.size()))
                    throw ComplexError("simplex " + std::to_string(t) + " references missing vertex " +
                                       std::to_string(v));
            }
            if (permutation_sign(s) == 0)
                throw ComplexError("simplex " + std::to_string(t) + " repeats a vertex");
            Simplex sorted = s;
            std::sort(sorted.begin(), sorted.end());
            add_with_faces(sorted, cells);
        }

        K.simplices_.resize(n + 1);
        K.lookup_.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            K.simplices_[k].assign(cells[k].begin(), cells[k].end());
            for (int i = 0; i < static_cast<int>(K.simplices_[k].size()); ++i)
                K.lookup_[k].emplace(K.simplices_[k][i], i);
        }

        // Orientation of each user-supplied top simplex relative to its sorted form.
        K.top_input_sign_.assign(K.simplices_[n].size(), 1);
        for (const auto& s : top_simplices) {
            if (static_cast<int>(s.size()) != n + 1) continue;
            Simplex sorted = s;
            std::sort(sorted.begin(), sorted.end());
            K.top_input_sign_[K.lookup_[n].at(sorted)] = permutation_sign(s);
        }

        K.boundary_.resize(n + 1);
        for (int k = 1; k <= n; ++k) {
            auto& B = K.boundary_[k];
            B.rows = static_cast<int>(K.simplices_[k - 1].size());
            B.cols = static_cast<int>(K.simplices_[k].size());
            B.columns.resize(B.cols);
            B.row_entries.resize(B.rows);
            for (int c = 0; c < B.cols; ++c) {
                const auto& s = K.simplices_[k][c];
                for (int i = 0; i <= k; ++i) {
                    Simplex face;
                    for (int j = 0; j <= k; ++j)
                        if (j != i) face.push_back(s[j]);
                    const int r = K.lookup_[k - 1].at(face);
                    const int sgn_i = (i % 2 == 0) ? 1 : -1;
                    B.columns[c].emplace_back(r, sgn_i);
                    B.row_entries[r].emplace_back(c, sgn_i);
                }
            }
        }
        K.build_local_orientations();
        return K;
    }

    int dim() const noexcept { return dim_; }
    int embedding_dim() const noexcept { return coords_.empty() ? 0 : static_cast<int>(coords_.front().size()); }
    int count(int k) const {
        return (k < 0 || k > dim_) ? 0 : static_cast<int>(simplices_[k].size());
    }
    int vertex_count() const { return count(0); }

    const Simplex& simplex(int k, int i) const { return simplices_.at(k).at(i); }
    const std::vector<Simplex>& simplices(int k) const { return simplices_.at(k); }
    const std::vector<Rational>& vertex(int v) const { return coords_.at(v); }
    const std::vector<double>& vertex_d(int v) const { return coords_d_.at(v); }

    /// Index of the cell spanned by `tuple` together with the sign relating
    /// the tuple's order to the stored orientation.
    std::optional<std::pair<int, int>> find(const std::vector<int>& tuple) const {
        const int k = static_cast<int>(tuple.size()) - 1;
        if (k < 0 || k > dim_) return std::nullopt;
        const int s = permutation_sign(tuple);
        if (s == 0) return std::nullopt;
        Simplex sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        auto it = lookup_[k].find(sorted);
        if (it == lookup_[k].end()) return std::nullopt;
        return std::make_pair(it->second, s);
    }

    /// Boundary incidence of degree k: rows are (k-1)-cells, columns k-cells.
    const SparseIncidence& boundary_matrix(int k) const {
        if (k < 1 || k > dim_) throw ComplexError("no boundary matrix in degree " + std::to_string(k));
        return boundary_[k];
    }

    /// Sign of the user-given top simplex relative to its sorted orientation.
    int top_input_sign(int i) const { return top_input_sign_.at(i); }

    /// Top simplices containing the k-cell i, each with its orientation relative
    /// to the cell's reference top simplex, transported through the cell's star.
    /// Empty when no top simplex contains the cell.
    const std::vector<std::pair<int, int>>& star(int k, int i) const { return star_.at(k).at(i); }

    /// Whether the star of the cell admits a consistent local orientation.
    bool locally_orientable(int k, int i) const { return local_ok_.at(k).at(i); }

    /// Orientation of top simplex `top` relative to the reference sheet of cell (k, i).
    int star_sign(int k, int i, int top) const {
        if (!local_ok_[k][i]) throw ComplexError("star of cell is not locally orientable");
        for (auto [t, s] : star_[k][i])
            if (t == top) return s;
        throw ComplexError("top simplex is not in the star of the cell");
    }

    /// Lowest-index top simplex containing cell (k, i), or -1.
    int reference_top(int k, int i) const {
        const auto& st = star_.at(k).at(i);
        return st.empty() ? -1 : st.front().first;
    }

    /// Transport sign used by twisted (co)boundaries between a k-cell and one of
    /// its (k+1)-cofaces: orientation of the coface's reference top relative to
    /// the face's reference sheet.
    int transport_sign(int k, int face, int coface) const {
        const int top = reference_top(k + 1, coface);
        if (top < 0) throw ComplexError("twisted operation on a cell outside every top simplex");
        return star_sign(k, face, top);
    }

    bool is_pseudo_manifold() const {
        if (dim_ == 0) return true;
        for (const auto& row : boundary_[dim_].row_entries)
            if (row.size() > 2) return false;
        return true;
    }

private:
    static void add_with_faces(const Simplex& s, std::vector<std::set<Simplex>>& cells) {
        const int k = static_cast<int>(s.size()) - 1;
        if (!cells[k].insert(s).second) return;
        if (k == 0) return;
        for (int i = 0; i <= k; ++i) {
            Simplex face;
            for (int j = 0; j <= k; ++j)
                if (j != i) face.push_back(s[j]);
            add_with_faces(face, cells);
        }
    }

    void build_local_orientations() {
        const int n = dim_;
        star_.assign(n + 1, {});
        local_ok_.assign(n + 1, {});
        std::vector<std::vector<int>> tops_of_vertex(coords_.size());
        for (int t = 0; t < count(n); ++t)
            for (int v : simplices_[n][t]) tops_of_vertex[v].push_back(t);

        for (int k = 0; k <= n; ++k) {
            star_[k].resize(count(k));
            local_ok_[k].assign(count(k), true);
            for (int i = 0; i < count(k); ++i) {
                if (k == n) {
                    star_[k][i] = {{i, 1}};
                    continue;
                }
                const auto& cell = simplices_[k][i];
                std::vector<int> tops = tops_of_vertex[cell[0]];
                for (size_t a = 1; a < cell.size(); ++a) {
                    const auto& other = tops_of_vertex[cell[a]];
                    std::vector<int> both;
                    std::set_intersection(tops.begin(), tops.end(), other.begin(), other.end(),
                                          std::back_inserter(both));
                    tops.swap(both);
                }
                if (tops.empty()) continue;
                std::map<int, int> sign_of;
                bool ok = true;
                // Breadth-first over top simplices adjacent through facets containing the cell.
                while (sign_of.size() < tops.size()) {
                    int seed = -1;
                    for (int t : tops)
                        if (!sign_of.count(t)) { seed = t; break; }
                    if (!sign_of.empty()) ok = false;  // star is disconnected through facets
                    sign_of[seed] = 1;
                    std::deque<int> queue{seed};
                    while (!queue.empty()) {
                        const int t = queue.front();
                        queue.pop_front();
                        for (auto [f, s_tf] : boundary_[n].columns[t]) {
                            if (!std::includes(simplices_[n - 1][f].begin(), simplices_[n - 1][f].end(),
                                               cell.begin(), cell.end()))
                                continue;
                            for (auto [u, s_uf] : boundary_[n].row_entries[f]) {
                                if (u == t) continue;
                                const int want = -sign_of[t] * s_tf * s_uf;
                                auto it = sign_of.find(u);
                                if (it == sign_of.end()) {
                                    sign_of[u] = want;
                                    queue.push_back(u);
                                } else if (it->second != want) {
                                    ok = false;
                                }
                            }
                        }
                    }
                }
                const int ref = tops.front();
                const int ref_sign = sign_of[ref];
                for (int t : tops) star_[k][i].emplace_back(t, sign_of[t] * ref_sign);
                local_ok_[k][i] = ok;
            }
        }
    }

    int dim_ = 0;
    std::vector<std::vector<Rational>> coords_;
    std::vector<std::vector<double>> coords_d_;
    std::vector<std::vector<Simplex>> simplices_;
    std::vector<std::map<Simplex, int>> lookup_;
    std::vector<SparseIncidence> boundary_;
    std::vector<int> top_input_sign_;
    std::vector<std::vector<std::vector<std::pair<int, int>>>> star_;
    std::vector<std::vector<bool>> local_ok_;
};

inline SimplicialComplex build_complex(std::vector<std::vector<Rational>> vertex_coords,
                                       const std::vector<std::vector<int>>& top_simplices) {
    return SimplicialComplex::build(std::move(vertex_coords), top_simplices);
}

/// Formal rational combination of oriented k-cells.  Twisted chains carry
/// coefficients relative to each cell's reference external orientation.
struct Chain {
    int degree = 0;
    std::map<int, Rational> coefficients;
    Parity parity = Parity::Straight;

    Chain() = default;
    Chain(int k, Parity p = Parity::Straight) : degree(k), parity(p) {}

    static Chain cell(int k, int index, Rational coefficient = 1, Parity p = Parity::Straight) {
        Chain c(k, p);
        c.add(index, std::move(coefficient));
        return c;
    }

    void add(int index, const Rational& value) {
        if (sgn(value) == 0) return;
        auto [it, inserted] = coefficients.emplace(index, value);
        if (!inserted) {
            it->second += value;
            if (sgn(it->second) == 0) coefficients.erase(it);
        }
    }

    Rational operator[](int index) const {
        auto it = coefficients.find(index);
        return it == coefficients.end() ? Rational(0) : it->second;
    }

    bool is_zero() const { return coefficients.empty(); }

    friend bool operator==(const Chain& a, const Chain& b) {
        return a.degree == b.degree && a.parity == b.parity && a.coefficients == b.coefficients;
    }
};

inline void check_chain(const Chain& c, const SimplicialComplex& K) {
    if (c.degree < 0 || c.degree > K.dim())
        throw ComplexError("chain degree " + std::to_string(c.degree) + " outside complex");
    for (const auto& [i, v] : c.coefficients)
        if (i < 0 || i >= K.count(c.degree)) throw ComplexError("chain refers to missing cell");
}

inline Chain operator+(const Chain& a, const Chain& b) {
    if (a.degree != b.degree || a.parity != b.parity) throw ComplexError("adding incompatible chains");
    Chain out = a;
    for (const auto& [i, v] : b.coefficients) out.add(i, v);
    return out;
}

inline Chain operator*(const Rational& s, const Chain& c) {
    Chain out(c.degree, c.parity);
    for (const auto& [i, v] : c.coefficients) out.add(i, s * v);
    return out;
}

/// Boundary of a chain; parity is preserved.
inline Chain boundary(const Chain& c, const SimplicialComplex& K) {
    check_chain(c, K);
    if (c.degree < 1) throw ComplexError("boundary of a 0-chain is undefined");
    const auto& B = K.boundary_matrix(c.degree);
    Chain out(c.degree - 1, c.parity);
    for (const auto& [col, coeff] : c.coefficients) {
        for (auto [row, s] : B.columns[col]) {
            Rational term = coeff * s;
            if (c.parity == Parity::Twisted) term *= K.transport_sign(c.degree - 1, row, col);
            out.add(row, term);
        }
    }
    return out;
}

/// Sum of the top simplices with the orientation they were given in.
inline Chain input_top_chain(const SimplicialComplex& K) {
    Chain c(K.dim());
    for (int t = 0; t < K.count(K.dim()); ++t) c.add(t, K.top_input_sign(t));
    return c;
}

/// Every top cell with coefficient +1 relative to its own external orientation;
/// exists on any complex, orientable or not.
inline Chain twisted_fundamental_chain(const SimplicialComplex& K) {
    Chain c(K.dim(), Parity::Twisted);
    for (int t = 0; t < K.count(K.dim()); ++t) c.add(t, 1);
    return c;
}

struct Orientability {
    bool orientable = false;
    std::optional<std::vector<int>> orientation;  // sign per top simplex, relative to sorted order
};

/// Attempts a coherent orientation of all top simplices by propagation across
/// shared facets.  Each connected component is seeded with the orientation its
/// first top simplex was given in.
inline Orientability orientability(const SimplicialComplex& K) {
    if (!K.is_pseudo_manifold())
        throw NotPseudoManifold("a facet bounds more than two top simplices");
    const int n = K.dim();
    const int tops = K.count(n);
    Orientability result;
    std::vector<int> sign(tops, 0);
    if (n == 0) {
        sign.assign(tops, 1);
        result.orientable = true;
        result.orientation = sign;
        return result;
    }
    const auto& B = K.boundary_matrix(n);
    for (int seed = 0; seed < tops; ++seed) {
        if (sign[seed] != 0) continue;
        sign[seed] = K.top_input_sign(seed);
        std::deque<int> queue{seed};
        while (!queue.empty()) {
            const int t = queue.front();
            queue.pop_front();
            for (auto [f, s_tf] : B.columns[t]) {
                for (auto [u, s_uf] : B.row_entries[f]) {
                    if (u == t) continue;
                    const int want = -sign[t] * s_tf * s_uf;
                    if (sign[u] == 0) {
                        sign[u] = want;
                        queue.push_back(u);
                    } else if (sign[u] != want) {
                        return result;
                    }
                }
            }
        }
    }
    result.orientable = true;
    result.orientation = std::move(sign);
    return result;
}

/// Straight fundamental chain for a given coherent orientation.
inline Chain fundamental_chain(const SimplicialComplex& K, const std::vector<int>& orientation) {
    Chain c(K.dim());
    for (int t = 0; t < K.count(K.dim()); ++t) c.add(t, orientation.at(t));
    return c;
}

inline long euler_characteristic(const SimplicialComplex& K) {
    long chi = 0;
    for (int k = 0; k <= K.dim(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(K.count(k));
    return chi;
}

}  // namespace extcalc
