#pragma once

#include "fkm/fkm.hpp"

#include <random>

namespace fkm_test {

using namespace fkm;

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

// Product of random shears and swaps; determinant +-1 by construction.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int ops = 12) {
    IntMatrix m = IntMatrix::identity(n);
    if (n < 2) return m;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> kind(0, 3);
    for (int t = 0; t < ops; ++t) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (kind(rng) == 0) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m(i, k), m(j, k));
        } else {
            Int f = coef(rng);
            for (std::size_t k = 0; k < n; ++k) m(i, k) += f * m(j, k);
        }
    }
    return m;
}

inline IntMatrix xi_matrix() { return eisenstein_rotation(); }

// Structure of ker(kernel_of) / im(image_of), assuming the image lies in the
// kernel.  Independent route for cohomology oracles.
inline AbelianStructure subquotient_structure(const IntMatrix& kernel_of, const IntMatrix& image_of) {
    IntMatrix K = kernel_lattice(kernel_of);
    IntMatrix C(K.cols(), image_of.cols());
    for (std::size_t j = 0; j < image_of.cols(); ++j) {
        auto sol = solve_linear(K, image_of.column(j), Int(0));
        if (!sol.solvable) throw std::logic_error("oracle: image not inside kernel");
        for (std::size_t i = 0; i < K.cols(); ++i) C(i, j) = sol.particular[i];
    }
    AbelianStructure s = cokernel_structure(C);
    return merge_cyclic_orders(s.invariant_factors, s.free_rank);
}

// Cohomology of the cyclic group <A> of order m acting on Z^n, via the
// 2-periodic resolution: H^1 = ker(Norm)/im(A - 1), H^2 = ker(A - 1)/im(Norm).
inline AbelianStructure cyclic_cohomology_oracle(const IntMatrix& A, int m, int degree) {
    const std::size_t n = A.rows();
    IntMatrix norm(n, n), pw = IntMatrix::identity(n);
    for (int j = 0; j < m; ++j) {
        norm = norm + pw;
        pw = pw * A;
    }
    if (!pw.is_identity()) throw std::logic_error("oracle: generator order is not m");
    IntMatrix am1 = A - IntMatrix::identity(n);
    if (degree == 1) return subquotient_structure(norm, am1);
    return subquotient_structure(am1, norm);
}

// Brute-force fixed point search for a diagonal block: enumerate x in
// T[v.modulus * d_max] per factor and test (u - I) x = v mod 1.
inline bool brute_force_block_has_fixed_point(const IntMatrix& u, const Int& modulus,
                                              const IntVector& v_num) {
    IntMatrix a = u - IntMatrix::identity(u.rows());
    Int dmax = 1;
    for (const auto& d : smith_dv(a).diagonal())
        if (d > dmax) dmax = d;
    const Int K = modulus * dmax;
    // x = y / K; (u - I) y = v_num * (K / modulus)  (mod K)
    IntVector target(v_num.size());
    for (std::size_t i = 0; i < v_num.size(); ++i) target[i] = mod_floor(v_num[i] * (K / modulus), K);
    const std::size_t r = u.rows();
    IntVector y(r, Int(0));
    for (;;) {
        if (vec_mod(a * y, K) == target) return true;
        std::size_t k = r;
        bool done = true;
        while (k-- > 0) {
            if (++y[k] < K) {
                done = false;
                break;
            }
            y[k] = 0;
            if (k == 0) break;
        }
        if (done) return false;
    }
}

// Fixed point test for a full diagonal element, factor by factor.
inline bool brute_force_has_fixed_point(const DiagonalAction& act, std::size_t element,
                                        const TranslationCocycle& z) {
    const auto& T = act.torus();
    for (std::size_t f = 0; f < T.factors.size(); ++f) {
        const std::size_t off = T.factor_offset(f), r = T.factors[f].rank;
        IntVector v(z.table[element].begin() + off, z.table[element].begin() + off + r);
        if (!brute_force_block_has_fixed_point(act.block(element, f), z.modulus, v)) return false;
    }
    return true;
}

}  // namespace fkm_test
