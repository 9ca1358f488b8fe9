#pragma once

// Rectilinear cubical complexes.  A k-cell is an axis set A (|A| = k) with an
// integer origin; it spans [p_a, p_a + 1] along each a in A and sits at p_b
// along the others.  Axes may be periodic.  The boundary of a cell is
//   sum_j (-1)^j (upper face along a_j - lower face along a_j),
// with a_j the j-th axis of A in increasing order, so the standard
// orientation of a cell is dx^{a_0} ^ dx^{a_1} ^ ...

#include "rational.hpp"

#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

namespace extcalc {

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class CubicalGrid {
public:
    /// `cells[a]` cells along axis a; periodic axes identify position n with 0.
    CubicalGrid(std::vector<int> cells, std::vector<bool> periodic = {}) : n_(std::move(cells)), periodic_(std::move(periodic)) {
        if (n_.empty() || n_.size() > 8) throw GridError("grid dimension must be between 1 and 8");
        if (periodic_.empty()) periodic_.assign(n_.size(), false);
        if (periodic_.size() != n_.size()) throw GridError("periodicity flags do not match dimension");
        for (int c : n_)
            if (c < 1) throw GridError("each axis needs at least one cell");
        const int d = dim();
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            const int k = std::popcount(mask);
            masks_.resize(d + 1);
            masks_[k].push_back(mask);
        }
        block_start_.assign(1u << d, 0);
        block_size_.assign(1u << d, 0);
        count_.assign(d + 1, 0);
        for (int k = 0; k <= d; ++k)
            for (unsigned mask : masks_[k]) {
                long size = 1;
                for (int a = 0; a < d; ++a) size *= extent(a, mask);
                block_start_[mask] = count_[k];
                block_size_[mask] = size;
                count_[k] += size;
            }
    }

    int dim() const { return static_cast<int>(n_.size()); }
    int cells(int axis) const { return n_.at(axis); }
    bool periodic(int axis) const { return periodic_.at(axis); }
    long count(int k) const { return count_.at(k); }
    const std::vector<unsigned>& masks(int k) const { return masks_.at(k); }

    /// Number of distinct positions along `axis` for cells with axis set `mask`.
    int extent(int axis, unsigned mask) const {
        if (periodic_[axis]) return n_[axis];
        return (mask >> axis & 1u) ? n_[axis] : n_[axis] + 1;
    }

    /// Index of the cell (mask, position) within degree popcount(mask);
    /// positions are wrapped on periodic axes.  Returns -1 outside the grid.
    long index(unsigned mask, std::vector<int> pos) const {
        long idx = 0;
        for (int a = dim() - 1; a >= 0; --a) {
            const int ext = extent(a, mask);
            int p = pos[a];
            if (periodic_[a]) p = ((p % ext) + ext) % ext;
            else if (p < 0 || p >= ext) return -1;
            idx = idx * ext + p;
        }
        return block_start_[mask] + idx;
    }

    struct Cell {
        unsigned mask;
        std::vector<int> pos;
    };

    Cell cell(int k, long index) const {
        for (unsigned mask : masks_.at(k)) {
            if (index < block_start_[mask] || index >= block_start_[mask] + block_size_[mask]) continue;
            long r = index - block_start_[mask];
            Cell c{mask, std::vector<int>(dim())};
            for (int a = 0; a < dim(); ++a) {
                const int ext = extent(a, mask);
                c.pos[a] = static_cast<int>(r % ext);
                r /= ext;
            }
            return c;
        }
        throw GridError("cell index out of range");
    }

    /// Signed faces of a k-cell: (face index, incidence sign); faces that fall
    /// outside a non-periodic grid never occur.
    std::vector<std::pair<long, int>> faces(const Cell& c) const {
        std::vector<std::pair<long, int>> out;
        int j = 0;
        for (int a = 0; a < dim(); ++a) {
            if (!(c.mask >> a & 1u)) continue;
            const unsigned fm = c.mask & ~(1u << a);
            const int s = (j % 2 == 0) ? 1 : -1;
            auto up = c.pos;
            ++up[a];
            out.emplace_back(index(fm, up), s);
            out.emplace_back(index(fm, c.pos), -s);
            ++j;
        }
        return out;
    }

    /// Coboundary of a k-cochain (values indexed like the k-cells).
    template <class S>
    std::vector<S> d(int k, const std::vector<S>& w) const {
        if (k < 0 || k >= dim()) throw GridError("no coboundary out of degree " + std::to_string(k));
        if (static_cast<long>(w.size()) != count(k)) throw GridError("cochain size does not match grid");
        std::vector<S> out(count(k + 1), S(0));
        for (long i = 0; i < count(k + 1); ++i) {
            const Cell c = cell(k + 1, i);
            for (auto [f, s] : faces(c)) {
                if (s > 0) out[i] += w[f];
                else out[i] -= w[f];
            }
        }
        return out;
    }

    /// Transpose of d: maps (k+1)-cochains to k-cochains.
    template <class S>
    std::vector<S> d_transpose(int k, const std::vector<S>& w) const {
        if (k < 0 || k >= dim()) throw GridError("no coboundary out of degree " + std::to_string(k));
        if (static_cast<long>(w.size()) != count(k + 1)) throw GridError("cochain size does not match grid");
        std::vector<S> out(count(k), S(0));
        for (long i = 0; i < count(k + 1); ++i) {
            if (w[i] == S(0)) continue;
            const Cell c = cell(k + 1, i);
            for (auto [f, s] : faces(c)) {
                if (s > 0) out[f] += w[i];
                else out[f] -= w[i];
            }
        }
        return out;
    }

private:
    std::vector<int> n_;
    std::vector<bool> periodic_;
    std::vector<std::vector<unsigned>> masks_;
    std::vector<long> block_start_;
    std::vector<long> block_size_;
    std::vector<long> count_;
};

/// Precomputed sparse coboundary for repeated application (solvers).
struct SparseCoboundary {
    long rows = 0;
    long cols = 0;
    std::vector<long> start;           // CSR row pointers
    std::vector<long> col;
    std::vector<signed char> sign;

    SparseCoboundary() = default;
    SparseCoboundary(const CubicalGrid& G, int k) : rows(G.count(k + 1)), cols(G.count(k)) {
        start.reserve(rows + 1);
        start.push_back(0);
        for (long i = 0; i < rows; ++i) {
            for (auto [f, s] : G.faces(G.cell(k + 1, i))) {
                // Periodic axes with a single cell make opposite faces coincide.
                bool merged = false;
                for (long j = start.back(); j < static_cast<long>(col.size()); ++j)
                    if (col[j] == f) {
                        sign[j] = static_cast<signed char>(sign[j] + s);
                        merged = true;
                    }
                if (!merged) {
                    col.push_back(f);
                    sign.push_back(static_cast<signed char>(s));
                }
            }
            start.push_back(static_cast<long>(col.size()));
        }
    }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(rows, 0.0);
        for (long i = 0; i < rows; ++i) {
            double s = 0.0;
            for (long j = start[i]; j < start[i + 1]; ++j) s += sign[j] * x[col[j]];
            y[i] = s;
        }
    }

    void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(cols, 0.0);
        for (long i = 0; i < rows; ++i) {
            const double v = x[i];
            if (v == 0.0) continue;
            for (long j = start[i]; j < start[i + 1]; ++j) y[col[j]] += sign[j] * v;
        }
    }
};

}  // namespace extcalc
