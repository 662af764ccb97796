#pragma once

#include "fkm/abelian.hpp"
#include "fkm/linear_solve.hpp"
#include "fkm/matrix_group.hpp"
#include "fkm/smith.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace fkm {

/// Coefficient module for group cohomology: Z^rank (modulus 0) or
/// (Z/modulus)^rank, with the action given per group element.
struct GModule {
    std::size_t rank = 0;
    Int modulus = 0;
    std::vector<IntMatrix> action;  // indexed by element of the group table

    GModule() = default;
    GModule(std::size_t rank, Int modulus, std::vector<IntMatrix> act, const GroupTable& G)
        : rank(rank), modulus(std::move(modulus)), action(std::move(act)) {
        if (action.size() != G.order) throw DimensionMismatch("GModule: one action matrix per element");
        for (const auto& a : action)
            if (a.rows() != rank || a.cols() != rank) throw DimensionMismatch("GModule: action matrix shape");
        for (std::size_t i = 0; i < G.order; ++i)
            for (std::size_t j = 0; j < G.order; ++j) {
                IntMatrix prod = action[i] * action[j];
                IntMatrix expect = action[G.mult[i][j]];
                if (this->modulus != 0) {
                    prod = prod.mod_reduced(this->modulus);
                    expect = expect.mod_reduced(this->modulus);
                }
                if (prod != expect) throw SemanticError("GModule: action is not a homomorphism");
            }
    }
};

namespace detail {

constexpr std::size_t kBarEntryCap = 1u << 24;

inline std::size_t pow_sz(std::size_t b, unsigned e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace detail

/// Differential C^k -> C^{k+1} of the normalized bar complex, k in {0,1,2}.
/// Normalized cochains vanish on tuples containing the identity, so the
/// k-cochains are indexed by tuples of the (order-1) non-identity elements.
inline IntMatrix bar_differential(const GroupTable& G, const GModule& A, int k) {
    const std::size_t q = G.order, s = q - 1, n = A.rank;
    const std::size_t dom = n * detail::pow_sz(s, static_cast<unsigned>(k));
    const std::size_t cod = n * detail::pow_sz(s, static_cast<unsigned>(k) + 1);
    if (dom * cod > detail::kBarEntryCap)
        throw ResourceBound("bar differential too large (group order " + std::to_string(q) + ")");
    IntMatrix d(cod, dom);
    if (dom == 0 || cod == 0) return d;

    auto add_block = [&](std::size_t row_tuple, std::size_t col_tuple, const IntMatrix& blk, int sign) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (blk(i, j) != 0) d(row_tuple * n + i, col_tuple * n + j) += sign * blk(i, j);
    };
    const IntMatrix I = IntMatrix::identity(n);

    if (k == 0) {
        // (d a)(g) = g.a - a
        for (std::size_t g = 1; g < q; ++g) {
            add_block(g - 1, 0, A.action[g], +1);
            add_block(g - 1, 0, I, -1);
        }
    } else if (k == 1) {
        // (d f)(g,h) = g.f(h) - f(gh) + f(g)
        for (std::size_t g = 1; g < q; ++g)
            for (std::size_t h = 1; h < q; ++h) {
                const std::size_t row = (g - 1) * s + (h - 1);
                add_block(row, h - 1, A.action[g], +1);
                const int gh = G.mult[g][h];
                if (gh != 0) add_block(row, gh - 1, I, -1);
                add_block(row, g - 1, I, +1);
            }
    } else if (k == 2) {
        // (d f)(g,h,l) = g.f(h,l) - f(gh,l) + f(g,hl) - f(g,h)
        for (std::size_t g = 1; g < q; ++g)
            for (std::size_t h = 1; h < q; ++h)
                for (std::size_t l = 1; l < q; ++l) {
                    const std::size_t row = ((g - 1) * s + (h - 1)) * s + (l - 1);
                    add_block(row, (h - 1) * s + (l - 1), A.action[g], +1);
                    const int gh = G.mult[g][h];
                    if (gh != 0) add_block(row, (gh - 1) * s + (l - 1), I, -1);
                    const int hl = G.mult[h][l];
                    if (hl != 0) add_block(row, (g - 1) * s + (hl - 1), I, +1);
                    add_block(row, (g - 1) * s + (h - 1), I, -1);
                }
    } else {
        throw SemanticError("bar_differential: k must be 0, 1 or 2");
    }
    if (A.modulus != 0) d = d.mod_reduced(A.modulus);
    return d;
}

/// The two differentials framing degree k: (into C^k, out of C^k).
/// Their composite is zero.
inline std::pair<IntMatrix, IntMatrix> boundary_matrices(const GroupTable& G, const GModule& A, int k) {
    if (k != 1 && k != 2) throw SemanticError("boundary_matrices: degree must be 1 or 2");
    return {bar_differential(G, A, k - 1), bar_differential(G, A, k)};
}

namespace detail {

// One G-invariant coordinate block of the coefficient module, with the data
// to classify its cocycles: a basis K of the cocycle lattice, the coboundary
// coordinates C, and the Smith transform of C giving canonical labels.
struct CohomologyComponent {
    std::vector<std::size_t> coords;  // module coordinates of this block
    std::size_t cochain_dim = 0;      // block cochain dimension at degree k

    // Cocycle lattice solver: either plain SNF of K (lattice case), or the
    // (V, lambda) factorization K = V*diag(lambda) (mod-m case).
    std::optional<SmithNormalForm> k_snf;
    IntMatrix k_basis;
    std::optional<IntMatrix> v_inverse;
    IntVector lambda;

    IntMatrix u_c, u_c_inv;
    IntVector orders;                  // all diagonal entries of SNF(C)
    std::vector<std::size_t> summands;  // positions with order >= 2
    std::vector<IntVector> reps;        // block-local representative cocycles

    // Coordinates of x in the cocycle lattice, or nullopt when x is not a
    // cocycle of this block.
    std::optional<IntVector> coords_in_lattice(const IntVector& x) const {
        if (v_inverse) {
            IntVector w = *v_inverse * x;
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (w[i] % lambda[i] != 0) return std::nullopt;
                w[i] /= lambda[i];
            }
            return w;
        }
        const SmithNormalForm& s = *k_snf;
        IntVector c = s.U * x;
        const std::size_t z = k_basis.cols();
        IntVector y(z, Int(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Int d = i < z ? s.D(i, i) : Int(0);
            if (d == 0) {
                if (c[i] != 0) return std::nullopt;
            } else {
                if (c[i] % d != 0) return std::nullopt;
                y[i] = c[i] / d;
            }
        }
        return s.V * y;
    }

    std::optional<IntVector> reduce(const IntVector& x) const {
        auto c = coords_in_lattice(x);
        if (!c) return std::nullopt;
        IntVector y = u_c * *c;
        IntVector label;
        for (std::size_t pos : summands) label.push_back(mod_floor(y[pos], orders[pos]));
        return label;
    }
};

}  // namespace detail

/// H^k(G, A) together with canonical class representatives and the reduction
/// of arbitrary cocycles to canonical labels.  Computed blockwise over the
/// finest decomposition of A into G-invariant coordinate blocks.
class CohomologyGroup {
  public:
    int degree = 0;
    Int coefficient_modulus = 0;
    std::size_t cochain_dim = 0;
    AbelianStructure structure;            // merged invariant factors
    std::vector<Int> summand_orders;       // cyclic decomposition as computed (per block)
    std::vector<IntVector> representatives;  // full-length cocycle vectors, one per summand

    std::optional<Int> order() const { return structure.order(); }

    /// Canonical label of a cocycle (length = summand count); nullopt when
    /// the input is not a cocycle.
    std::optional<IntVector> reduce(const IntVector& cocycle) const {
        if (cocycle.size() != cochain_dim) throw DimensionMismatch("cohomology reduce: cochain length");
        IntVector label;
        for (const auto& comp : components_) {
            IntVector x = extract(comp, cocycle);
            auto part = comp.reduce(x);
            if (!part) return std::nullopt;
            label.insert(label.end(), part->begin(), part->end());
        }
        return label;
    }

    IntVector representative_of(const IntVector& label) const {
        if (label.size() != summand_orders.size()) throw DimensionMismatch("cohomology label length");
        IntVector out(cochain_dim, Int(0));
        for (std::size_t i = 0; i < label.size(); ++i) {
            Int c = mod_floor(label[i], summand_orders[i]);
            for (std::size_t j = 0; j < cochain_dim; ++j) out[j] += c * representatives[i][j];
        }
        if (coefficient_modulus != 0) out = vec_mod(out, coefficient_modulus);
        return out;
    }

    /// Every class label, in lexicographic order.
    std::vector<IntVector> all_labels(std::size_t bound = 1u << 20) const {
        Int total = 1;
        for (const auto& d : summand_orders) total *= d;
        if (total > int_from_size(bound)) throw ResourceBound("class enumeration exceeds bound");
        std::vector<IntVector> out;
        IntVector cur(summand_orders.size(), Int(0));
        for (;;) {
            out.push_back(cur);
            std::size_t k = summand_orders.size();
            while (k-- > 0) {
                if (++cur[k] < summand_orders[k]) break;
                cur[k] = 0;
                if (k == 0) return out;
            }
            if (summand_orders.empty()) return out;
        }
    }

    // -- construction ----------------------------------------------------

    static CohomologyGroup compute(const GroupTable& G, const GModule& A, int degree) {
        if (degree != 1 && degree != 2) throw SemanticError("cohomology: degree must be 1 or 2");
        CohomologyGroup H;
        H.degree = degree;
        H.coefficient_modulus = A.modulus;
        const std::size_t s = G.order - 1;
        const std::size_t tuples = detail::pow_sz(s, static_cast<unsigned>(degree));
        H.cochain_dim = A.rank * tuples;

        std::vector<AbelianStructure> parts;
        for (auto& coords : invariant_blocks(A)) {
            GModule sub;
            sub.rank = coords.size();
            sub.modulus = A.modulus;
            for (const auto& a : A.action) sub.action.push_back(a.submatrix(coords, coords));
            detail::CohomologyComponent comp = compute_component(G, sub, degree);
            comp.coords = coords;
            // Expand block representatives to full-length cochains.
            std::vector<Int> comp_orders;
            for (std::size_t pos : comp.summands) comp_orders.push_back(comp.orders[pos]);
            for (std::size_t i = 0; i < comp.reps.size(); ++i) {
                IntVector full(H.cochain_dim, Int(0));
                for (std::size_t t = 0; t < tuples; ++t)
                    for (std::size_t j = 0; j < coords.size(); ++j)
                        full[t * A.rank + coords[j]] = comp.reps[i][t * coords.size() + j];
                H.representatives.push_back(std::move(full));
                H.summand_orders.push_back(comp_orders[i]);
            }
            AbelianStructure part;
            part.invariant_factors = comp_orders;  // cyclic orders, merged below
            parts.push_back(merge_cyclic_orders(part.invariant_factors));
            H.components_.push_back(std::move(comp));
        }
        H.structure = merge_structures(parts);
        H.module_rank_ = A.rank;
        H.tuples_ = tuples;
        return H;
    }

  private:
    std::vector<detail::CohomologyComponent> components_;
    std::size_t module_rank_ = 0, tuples_ = 0;

    IntVector extract(const detail::CohomologyComponent& comp, const IntVector& full) const {
        IntVector x(comp.cochain_dim);
        for (std::size_t t = 0; t < tuples_; ++t)
            for (std::size_t j = 0; j < comp.coords.size(); ++j)
                x[t * comp.coords.size() + j] = full[t * module_rank_ + comp.coords[j]];
        return x;
    }

    /// Finest partition of module coordinates into blocks not mixed by any
    /// action matrix (union-find over nonzero off-diagonal entries).
    static std::vector<std::vector<std::size_t>> invariant_blocks(const GModule& A) {
        std::vector<std::size_t> parent(A.rank);
        for (std::size_t i = 0; i < A.rank; ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& a : A.action)
            for (std::size_t i = 0; i < A.rank; ++i)
                for (std::size_t j = 0; j < A.rank; ++j)
                    if (a(i, j) != 0) parent[find(i)] = find(j);
        std::map<std::size_t, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < A.rank; ++i) buckets[find(i)].push_back(i);
        std::vector<std::vector<std::size_t>> out;
        for (auto& [root, coords] : buckets) out.push_back(std::move(coords));
        return out;
    }

    static detail::CohomologyComponent compute_component(const GroupTable& G, const GModule& A, int degree) {
        detail::CohomologyComponent comp;
        IntMatrix d_in = bar_differential(G, A, degree - 1);
        IntMatrix d_out = bar_differential(G, A, degree);
        comp.cochain_dim = d_out.cols();
        const Int m = A.modulus;

        std::vector<IntVector> den_cols;
        if (m == 0) {
            comp.k_basis = kernel_lattice(d_out);
            comp.k_snf = smith_normal_form(comp.k_basis);
        } else {
            // {x : d_out x = 0 mod m} = V * diag(lambda) from the Smith form.
            SmithNormalForm s = smith_dv(d_out);
            const std::size_t dim = d_out.cols();
            comp.lambda.assign(dim, Int(1));
            const std::size_t S = std::min(d_out.rows(), d_out.cols());
            for (std::size_t j = 0; j < S; ++j)
                if (s.D(j, j) != 0) comp.lambda[j] = m / gcd_int(s.D(j, j), m);
            IntMatrix K(dim, dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) K(i, j) = s.V(i, j) * comp.lambda[j];
            comp.k_basis = std::move(K);
            comp.v_inverse = unimodular_inverse(s.V);
            for (std::size_t i = 0; i < dim; ++i) {
                IntVector e(dim, Int(0));
                e[i] = m;
                den_cols.push_back(std::move(e));
            }
        }
        for (std::size_t j = 0; j < d_in.cols(); ++j) den_cols.push_back(d_in.column(j));

        const std::size_t z = comp.k_basis.cols();
        IntMatrix C(z, den_cols.size());
        for (std::size_t j = 0; j < den_cols.size(); ++j) {
            auto c = comp.coords_in_lattice(den_cols[j]);
            if (!c) throw CrossCheckError("coboundary outside the cocycle lattice");
            for (std::size_t i = 0; i < z; ++i) C(i, j) = (*c)[i];
        }

        SmithNormalForm cs = smith_normal_form(C);
        comp.orders.assign(z, Int(0));
        const std::size_t S2 = std::min(C.rows(), C.cols());
        for (std::size_t i = 0; i < S2; ++i) comp.orders[i] = cs.D(i, i);
        for (const auto& d : comp.orders)
            if (d == 0) throw CrossCheckError("cohomology has unexpected free part");
        comp.u_c = cs.U;
        comp.u_c_inv = z ? unimodular_inverse(cs.U) : IntMatrix();
        for (std::size_t i = 0; i < z; ++i)
            if (comp.orders[i] >= 2) comp.summands.push_back(i);
        for (std::size_t pos : comp.summands) {
            IntVector c = comp.u_c_inv.column(pos);
            IntVector rep = comp.k_basis * c;
            if (m != 0) rep = vec_mod(rep, m);
            comp.reps.push_back(std::move(rep));
        }
        return comp;
    }
};

inline CohomologyGroup cohomology(const GroupTable& G, const GModule& A, int degree) {
    return CohomologyGroup::compute(G, A, degree);
}

}  // namespace fkm
