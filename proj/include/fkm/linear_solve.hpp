#pragma once

#include "fkm/smith.hpp"

#include <optional>
#include <set>
#include <vector>

namespace fkm {

/// Outcome of solving A x = b over Z (modulus 0) or over Z/m (modulus m > 0).
/// Over Z/m the kernel generators come with their additive orders, so the full
/// (finite) solution set can be enumerated.
struct LinearSolution {
    bool solvable = false;
    Int modulus = 0;
    IntVector particular;             // one solution (canonical mod m)
    std::vector<IntVector> kernel;    // lattice basis (mod 0) or subgroup generators (mod m)
    std::vector<Int> kernel_orders;   // per generator, mod m only

    /// All solutions mod m in lexicographic order.  Requires modulus > 0.
    std::vector<IntVector> enumerate_all(std::size_t bound = 1u << 20) const {
        if (modulus == 0) throw SemanticError("cannot enumerate solutions over Z");
        std::set<IntVector> seen;
        if (!solvable) return {};
        std::vector<IntVector> todo{vec_mod(particular, modulus)};
        seen.insert(todo.back());
        while (!todo.empty()) {
            IntVector cur = std::move(todo.back());
            todo.pop_back();
            for (const auto& g : kernel) {
                IntVector nxt = vec_mod(vec_add(cur, g), modulus);
                if (seen.insert(nxt).second) {
                    if (seen.size() > bound) throw ResourceBound("solution set enumeration exceeds bound");
                    todo.push_back(nxt);
                }
            }
        }
        return {seen.begin(), seen.end()};
    }
};

/// Solves A x = b over Z (modulus 0, b may be rational but solutions are
/// integral) or A x = b mod m.  Rational entries of b are accepted mod m when
/// their denominators are invertible.
inline LinearSolution solve_linear(const IntMatrix& A, const RatVector& b, const Int& modulus) {
    if (b.size() != A.rows()) throw DimensionMismatch("solve_linear: rhs length");
    if (modulus < 0) throw SemanticError("solve_linear: negative modulus");
    LinearSolution out;
    out.modulus = modulus;
    const std::size_t R = A.rows(), C = A.cols();
    const std::size_t S = std::min(R, C);

    if (modulus == 0) {
        SmithNormalForm s = smith_normal_form(A);
        RatVector c(R);
        for (std::size_t i = 0; i < R; ++i) {
            Rat acc = 0;
            for (std::size_t j = 0; j < R; ++j) acc += Rat(s.U(i, j)) * b[j];
            c[i] = acc;
        }
        IntVector y(C);
        for (std::size_t i = 0; i < R; ++i) {
            const Int d = i < S ? s.D(i, i) : Int(0);
            if (d == 0) {
                if (c[i] != 0) return out;  // unsolvable
            } else {
                Rat q = c[i] / Rat(d);
                if (denominator(q) != 1) return out;
                y[i] = numerator(q);
            }
        }
        out.solvable = true;
        out.particular = s.V * y;
        for (std::size_t j = 0; j < C; ++j)
            if (j >= S || s.D(j, j) == 0) out.kernel.push_back(s.V.column(j));
        return out;
    }

    // Over Z/m: clear denominators of b, then solve D y = U b coordinatewise.
    const Int m = modulus;
    SmithNormalForm s = smith_normal_form(A);
    IntVector bi(R);
    for (std::size_t i = 0; i < R; ++i) {
        Int num = numerator(b[i]), den = denominator(b[i]);
        bi[i] = den == 1 ? mod_floor(num, m) : mod_floor(num * mod_inverse(den, m), m);
    }
    IntVector c(R);
    for (std::size_t i = 0; i < R; ++i) {
        Int acc = 0;
        for (std::size_t j = 0; j < R; ++j) acc += s.U(i, j) * bi[j];
        c[i] = mod_floor(acc, m);
    }
    IntVector y(C);
    std::vector<std::pair<std::size_t, Int>> gens;  // (y index, generator value)
    for (std::size_t i = 0; i < R; ++i) {
        const Int d = i < S ? s.D(i, i) : Int(0);
        if (d == 0) {
            if (c[i] != 0) return out;
        } else {
            Int g = gcd_int(d, m);
            if (c[i] % g != 0) return out;
            Int mg = m / g;
            y[i] = mod_floor((c[i] / g) * mod_inverse(d / g, mg), mg);
            if (g > 1) gens.emplace_back(i, mg);  // order g generator
        }
    }
    for (std::size_t j = 0; j < C; ++j) {
        const Int d = j < S ? s.D(j, j) : Int(0);
        if (j >= R || d == 0) gens.emplace_back(j, Int(1));  // free coordinate, order m
    }
    out.solvable = true;
    out.particular = vec_mod(s.V * y, m);
    for (const auto& [idx, val] : gens) {
        IntVector e(C, Int(0));
        e[idx] = val;
        IntVector k = vec_mod(s.V * e, m);
        out.kernel.push_back(k);
        out.kernel_orders.push_back(m / gcd_int(val, m));
    }
    return out;
}

inline LinearSolution solve_linear(const IntMatrix& A, const IntVector& b, const Int& modulus) {
    RatVector rb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rb[i] = Rat(b[i]);
    return solve_linear(A, rb, modulus);
}

}  // namespace fkm
