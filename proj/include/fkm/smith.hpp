#pragma once

#include "fkm/abelian.hpp"
#include "fkm/int_matrix.hpp"

#include <cstddef>
#include <tuple>
#include <vector>

namespace fkm {

/// U * M * V = D with U, V unimodular and D diagonal satisfying d1 | d2 | ...
struct SmithNormalForm {
    IntMatrix U, D, V;

    std::size_t rank() const {
        std::size_t r = 0, n = std::min(D.rows(), D.cols());
        for (std::size_t i = 0; i < n; ++i)
            if (D(i, i) != 0) ++r;
        return r;
    }
    IntVector diagonal() const {
        std::size_t n = std::min(D.rows(), D.cols());
        IntVector d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = D(i, i);
        return d;
    }
};

namespace detail {

// Core elimination.  U tracking is optional so kernel-only callers skip the
// (potentially much larger) row transform.
inline SmithNormalForm smith_core(const IntMatrix& m, bool track_u) {
    SmithNormalForm s;
    s.D = m;
    if (track_u) s.U = IntMatrix::identity(m.rows());
    s.V = IntMatrix::identity(m.cols());
    IntMatrix& D = s.D;
    IntMatrix& U = s.U;
    IntMatrix& V = s.V;
    const std::size_t R = m.rows(), C = m.cols();

    auto row_swap = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < C; ++j) std::swap(D(a, j), D(b, j));
        if (track_u)
            for (std::size_t j = 0; j < R; ++j) std::swap(U(a, j), U(b, j));
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < R; ++i) std::swap(D(i, a), D(i, b));
        for (std::size_t i = 0; i < C; ++i) std::swap(V(i, a), V(i, b));
    };
    auto row_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        // row_dst -= q * row_src
        if (q == 0) return;
        for (std::size_t j = 0; j < C; ++j) D(dst, j) -= q * D(src, j);
        if (track_u)
            for (std::size_t j = 0; j < R; ++j) U(dst, j) -= q * U(src, j);
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < R; ++i) D(i, dst) -= q * D(i, src);
        for (std::size_t i = 0; i < C; ++i) V(i, dst) -= q * V(i, src);
    };
    auto row_negate = [&](std::size_t r) {
        for (std::size_t j = 0; j < C; ++j) D(r, j) = -D(r, j);
        if (track_u)
            for (std::size_t j = 0; j < R; ++j) U(r, j) = -U(r, j);
    };

    const std::size_t K = std::min(R, C);
    for (std::size_t k = 0; k < K; ++k) {
        for (;;) {
            // Deterministic pivot: smallest |entry| > 0, ties by row-major position.
            std::size_t pi = R, pj = C;
            for (std::size_t i = k; i < R; ++i)
                for (std::size_t j = k; j < C; ++j) {
                    const Int& v = D(i, j);
                    if (v == 0) continue;
                    if (pi == R || abs_int(v) < abs_int(D(pi, pj))) pi = i, pj = j;
                }
            if (pi == R) {
                k = K;  // remaining block is zero
                break;
            }
            row_swap(k, pi);
            col_swap(k, pj);

            bool dirty = false;
            for (std::size_t i = k + 1; i < R; ++i) {
                if (D(i, k) == 0) continue;
                row_axpy(i, k, D(i, k) / D(k, k));
                if (D(i, k) != 0) dirty = true;  // remainder smaller than pivot
            }
            for (std::size_t j = k + 1; j < C; ++j) {
                if (D(k, j) == 0) continue;
                col_axpy(j, k, D(k, j) / D(k, k));
                if (D(k, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // Divisibility: fold any non-multiple into row k and retry.
            bool fixed = true;
            for (std::size_t i = k + 1; i < R && fixed; ++i)
                for (std::size_t j = k + 1; j < C && fixed; ++j)
                    if (D(i, j) % D(k, k) != 0) {
                        row_axpy(k, i, Int(-1));
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (k >= K) break;
        if (D(k, k) < 0) row_negate(k);
    }
    // Sign pass for the case the loop exits early.
    for (std::size_t k = 0; k < K; ++k)
        if (D(k, k) < 0) row_negate(k);
    return s;
}

}  // namespace detail

inline SmithNormalForm smith_normal_form(const IntMatrix& m) { return detail::smith_core(m, true); }

/// D and V only (U discarded); enough for kernels and mod-m solution lattices.
inline SmithNormalForm smith_dv(const IntMatrix& m) { return detail::smith_core(m, false); }

/// Basis of the integer kernel lattice {x : M x = 0}, as matrix columns.
/// Column operations only, so it stays cheap when M has many rows.
inline IntMatrix kernel_lattice(const IntMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    IntMatrix W = m;
    IntMatrix V = IntMatrix::identity(C);
    std::size_t frontier = 0;
    auto col_swap = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < R; ++i) std::swap(W(i, a), W(i, b));
        for (std::size_t i = 0; i < C; ++i) std::swap(V(i, a), V(i, b));
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < R; ++i) W(i, dst) -= q * W(i, src);
        for (std::size_t i = 0; i < C; ++i) V(i, dst) -= q * V(i, src);
    };
    for (std::size_t row = 0; row < R && frontier < C; ++row) {
        for (;;) {
            std::size_t best = C;
            for (std::size_t j = frontier; j < C; ++j) {
                if (W(row, j) == 0) continue;
                if (best == C || abs_int(W(row, j)) < abs_int(W(row, best))) best = j;
            }
            if (best == C) break;
            col_swap(frontier, best);
            bool clean = true;
            for (std::size_t j = frontier + 1; j < C; ++j) {
                if (W(row, j) == 0) continue;
                col_axpy(j, frontier, W(row, j) / W(row, frontier));
                if (W(row, j) != 0) clean = false;
            }
            if (clean) {
                ++frontier;
                break;
            }
        }
    }
    std::vector<IntVector> basis;
    for (std::size_t j = frontier; j < C; ++j) basis.push_back(V.column(j));
    return IntMatrix::from_columns(C, basis);
}

/// Invariant factors and free rank of Z^rows / im(M).
inline AbelianStructure cokernel_structure(const IntMatrix& m) {
    SmithNormalForm s = smith_dv(m);
    AbelianStructure out;
    std::size_t rank = 0;
    for (const auto& d : s.diagonal()) {
        if (d == 0) continue;
        ++rank;
        if (d >= 2) out.invariant_factors.push_back(d);
    }
    out.free_rank = m.rows() - rank;
    return out;
}

}  // namespace fkm
