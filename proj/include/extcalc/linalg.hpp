#pragma once

// Exact linear algebra over Q and Z: rank, particular solutions of linear
// systems by fraction-exact Gauss-Jordan elimination, and the Smith normal
// form of integer matrices.

#include "rational.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace extcalc {

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntegerMatrix = std::vector<std::vector<BigInt>>;

/// Reduced row echelon form in place; returns the pivot column of each pivot row.
inline std::vector<int> row_reduce(RationalMatrix& m, int ncols) {
    std::vector<int> pivots;
    int row = 0;
    const int nrows = static_cast<int>(m.size());
    for (int c = 0; c < ncols && row < nrows; ++c) {
        int p = -1;
        for (int r = row; r < nrows; ++r)
            if (sgn(m[r][c]) != 0) { p = r; break; }
        if (p < 0) continue;
        std::swap(m[row], m[p]);
        const Rational inv = 1 / m[row][c];
        for (auto& x : m[row])
            if (sgn(x) != 0) x *= inv;
        for (int r = 0; r < nrows; ++r) {
            if (r == row || sgn(m[r][c]) == 0) continue;
            const Rational f = m[r][c];
            for (size_t j = c; j < m[r].size(); ++j)
                if (sgn(m[row][j]) != 0) m[r][j] -= f * m[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

inline int rank(RationalMatrix m) {
    if (m.empty()) return 0;
    return static_cast<int>(row_reduce(m, static_cast<int>(m.front().size())).size());
}

/// A particular solution of A x = b (free variables set to zero), or nothing
/// when the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_exact(const RationalMatrix& A, const std::vector<Rational>& b) {
    const int rows = static_cast<int>(A.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(A.front().size());
    if (static_cast<int>(b.size()) != rows) throw std::invalid_argument("right-hand side has wrong length");
    RationalMatrix aug(rows, std::vector<Rational>(cols + 1));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) aug[r][c] = A[r][c];
        aug[r][cols] = b[r];
    }
    const auto pivots = row_reduce(aug, cols);
    for (int r = static_cast<int>(pivots.size()); r < rows; ++r)
        if (sgn(aug[r][cols]) != 0) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
    return x;
}

/// Nonzero diagonal entries d1 | d2 | ... of the Smith normal form.
inline std::vector<BigInt> smith_invariants(IntegerMatrix m) {
    std::vector<BigInt> diag;
    const int rows = static_cast<int>(m.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(m.front().size());
    int t = 0;
    while (t < rows && t < cols) {
        // Pivot: smallest nonzero magnitude in the remaining block.
        int pr = -1, pc = -1;
        BigInt best;
        for (int r = t; r < rows; ++r)
            for (int c = t; c < cols; ++c) {
                if (sgn(m[r][c]) == 0) continue;
                BigInt a = abs(m[r][c]);
                if (pr < 0 || a < best) {
                    best = a;
                    pr = r;
                    pc = c;
                    if (best == 1) goto found;
                }
            }
    found:
        if (pr < 0) break;
        std::swap(m[t], m[pr]);
        if (pc != t)
            for (int r = 0; r < rows; ++r) std::swap(m[r][t], m[r][pc]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int r = t + 1; r < rows; ++r) {
                if (sgn(m[r][t]) == 0) continue;
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), m[r][t].get_mpz_t(), m[t][t].get_mpz_t());
                for (int c = t; c < cols; ++c)
                    if (sgn(m[t][c]) != 0) m[r][c] -= q * m[t][c];
                if (sgn(m[r][t]) != 0) {
                    std::swap(m[t], m[r]);
                    clean = false;
                }
            }
            for (int c = t + 1; c < cols; ++c) {
                if (sgn(m[t][c]) == 0) continue;
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), m[t][c].get_mpz_t(), m[t][t].get_mpz_t());
                for (int r = t; r < rows; ++r)
                    if (sgn(m[r][t]) != 0) m[r][c] -= q * m[r][t];
                if (sgn(m[t][c]) != 0) {
                    for (int r = 0; r < rows; ++r) std::swap(m[r][t], m[r][c]);
                    clean = false;
                }
            }
            if (clean) {
                // Divisibility: the pivot must divide every remaining entry.
                for (int r = t + 1; r < rows && clean; ++r)
                    for (int c = t + 1; c < cols; ++c) {
                        if (sgn(m[r][c]) == 0) continue;
                        if (!mpz_divisible_p(m[r][c].get_mpz_t(), m[t][t].get_mpz_t())) {
                            for (int cc = t; cc < cols; ++cc) m[t][cc] += m[r][cc];
                            clean = false;
                            break;
                        }
                    }
            }
        }
        diag.push_back(abs(m[t][t]));
        ++t;
    }
    return diag;
}

}  // namespace extcalc
