#pragma once

#include "fkm/abelian_group.hpp"
#include "fkm/cohomology.hpp"
#include "fkm/smith.hpp"
#include "fkm/torus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fkm {

/// Finite abelian holonomy acting diagonally on a product torus: each group
/// generator acts on each factor by a declared unit of that factor.
class DiagonalAction {
  public:
    /// `assignments[g][f]` is an exponent word over factor f's declared unit
    /// generators giving the unit by which group generator g acts there.
    DiagonalAction(TorusSpec torus, AbstractAbelianGroup group,
                   const std::vector<std::vector<std::vector<int>>>& assignments)
        : torus_(std::move(torus)), group_(std::move(group)) {
        const std::size_t r = group_.rank();
        const std::size_t nf = torus_.factors.size();
        if (assignments.size() != r) throw SemanticError("one unit assignment row per group generator");

        std::vector<std::vector<IntMatrix>> gen_blocks(r);
        for (std::size_t g = 0; g < r; ++g) {
            if (assignments[g].size() != nf) throw SemanticError("one unit per factor in each assignment row");
            for (std::size_t f = 0; f < nf; ++f) {
                const TorusFactor& fac = torus_.factors[f];
                const auto& word = assignments[g][f];
                if (word.size() != fac.unit_generators.size())
                    throw SemanticError("unit exponent count does not match factor's generator count");
                IntMatrix u = IntMatrix::identity(fac.rank);
                for (std::size_t t = 0; t < word.size(); ++t) {
                    int ord = fac.units.element_order(*fac.units.index_of(fac.unit_generators[t]));
                    if (word[t] < 0 || word[t] >= ord)
                        throw SemanticError("unit exponent " + std::to_string(word[t]) +
                                            " out of range for unit of order " + std::to_string(ord));
                    for (int p = 0; p < word[t]; ++p) u = u * fac.unit_generators[t];
                }
                gen_blocks[g].push_back(std::move(u));
            }
        }

        // Expand the per-generator data to the whole group and validate that
        // the result is a faithful homomorphism with the declared orders.
        const std::size_t q = group_.order();
        blocks_.assign(q, {});
        for (std::size_t e = 0; e < q; ++e) {
            auto tup = group_.tuple_of(e);
            std::vector<IntMatrix> bl;
            for (std::size_t f = 0; f < nf; ++f) {
                IntMatrix u = IntMatrix::identity(torus_.factors[f].rank);
                for (std::size_t g = 0; g < r; ++g)
                    for (int p = 0; p < tup[g]; ++p) u = u * gen_blocks[g][f];
                bl.push_back(std::move(u));
            }
            blocks_[e] = std::move(bl);
        }
        for (std::size_t g = 0; g < r; ++g) {
            // order check: gen^m must act trivially
            std::vector<int> tup(r, 0);
            for (std::size_t f = 0; f < nf; ++f) {
                IntMatrix u = IntMatrix::identity(torus_.factors[f].rank);
                for (int p = 0; p < group_.moduli()[g]; ++p) u = u * gen_blocks[g][f];
                if (!u.is_identity())
                    throw SemanticError("assigned unit order does not divide group generator order (generator " +
                                        std::to_string(g + 1) + ", factor " + std::to_string(f + 1) + ")");
            }
        }
        rho_.reserve(q);
        for (std::size_t e = 0; e < q; ++e) rho_.push_back(IntMatrix::block_diagonal(blocks_[e]));
        std::set<IntMatrix> image(rho_.begin(), rho_.end());
        if (image.size() != q) throw SemanticError("holonomy action is not faithful");
    }

    const TorusSpec& torus() const { return torus_; }
    const AbstractAbelianGroup& group() const { return group_; }
    std::size_t rank() const { return torus_.total_rank(); }
    const IntMatrix& rho(std::size_t element) const { return rho_[element]; }
    const IntMatrix& block(std::size_t element, std::size_t factor) const { return blocks_[element][factor]; }
    int exponent() const { return group_.exponent(); }
    std::string element_name(std::size_t e) const { return group_.element_name(e); }

    GroupTable group_table() const { return group_.group_table(); }

    /// The lattice L = Z^rank as a G-module under this action.
    GModule lattice_module() const {
        return GModule(rank(), Int(0), rho_, group_table());
    }

    /// For a factor with cyclic declared units, the exponent of the acting
    /// unit (base: the factor's distinguished generator) as a function on G.
    std::optional<std::vector<int>> character(std::size_t factor) const {
        const TorusFactor& fac = torus_.factors[factor];
        if (fac.unit_generators.size() != 1) return std::nullopt;
        const IntMatrix& zeta = fac.unit_generators[0];
        int ord = fac.units.element_order(*fac.units.index_of(zeta));
        std::vector<int> chi(group_.order(), -1);
        for (std::size_t e = 0; e < group_.order(); ++e) {
            IntMatrix pw = IntMatrix::identity(fac.rank);
            for (int p = 0; p < ord; ++p) {
                if (pw == blocks_[e][factor]) {
                    chi[e] = p;
                    break;
                }
                pw = pw * zeta;
            }
            if (chi[e] < 0) return std::nullopt;  // block not a power of the generator
        }
        return chi;
    }

  private:
    TorusSpec torus_;
    AbstractAbelianGroup group_;
    std::vector<std::vector<IntMatrix>> blocks_;  // per element, per factor
    std::vector<IntMatrix> rho_;                  // per element, block diagonal
};

/// Full table g -> translation part, as torsion points of one modulus.
/// Satisfies z(gh) = z(g) + rho(g) z(h) and z(1) = 0.
struct TranslationCocycle {
    Int modulus = 1;
    std::vector<IntVector> table;  // indexed by group element, numerators mod modulus

    IntVector flattened_nonidentity() const {
        IntVector out;
        for (std::size_t e = 1; e < table.size(); ++e)
            out.insert(out.end(), table[e].begin(), table[e].end());
        return out;
    }

    friend bool operator==(const TranslationCocycle& a, const TranslationCocycle& b) {
        return a.modulus == b.modulus && a.table == b.table;
    }
    friend bool operator<(const TranslationCocycle& a, const TranslationCocycle& b) {
        if (a.modulus != b.modulus) return a.modulus < b.modulus;
        return a.table < b.table;
    }
};

/// First pair (g, h) violating the cocycle identity, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> cocycle_defect(const DiagonalAction& act,
                                                                         const TranslationCocycle& z) {
    const std::size_t q = act.group().order();
    if (z.table.size() != q) throw DimensionMismatch("cocycle table size");
    if (!vec_is_zero(z.table[0])) return std::make_pair(std::size_t(0), std::size_t(0));
    for (std::size_t g = 0; g < q; ++g)
        for (std::size_t h = 0; h < q; ++h) {
            const std::size_t gh = act.group().mul(static_cast<int>(g), static_cast<int>(h));
            IntVector rhs = vec_add(z.table[g], act.rho(g) * z.table[h]);
            if (vec_mod(vec_sub(z.table[gh], rhs), z.modulus) != IntVector(act.rank(), Int(0)))
                return std::make_pair(g, h);
        }
    return std::nullopt;
}

/// Completes a cocycle from its values on the group generators, walking the
/// mixed-radix enumeration; the full identity is then validated and the first
/// offending pair reported on failure.
inline TranslationCocycle complete_cocycle(const DiagonalAction& act, const Int& modulus,
                                           const std::vector<IntVector>& generator_values) {
    const auto& G = act.group();
    const std::size_t r = G.rank(), q = G.order(), n = act.rank();
    if (generator_values.size() != r) throw SemanticError("one cocycle value per group generator");
    for (const auto& v : generator_values)
        if (v.size() != n) throw SemanticError("cocycle value length must equal total lattice rank");

    TranslationCocycle z;
    z.modulus = modulus;
    z.table.assign(q, IntVector(n, Int(0)));
    for (std::size_t e = 1; e < q; ++e) {
        auto tup = G.tuple_of(e);
        std::size_t k = r;
        while (k-- > 0)
            if (tup[k] > 0) break;
        auto prev = tup;
        --prev[k];
        const std::size_t h = G.index_of(prev);
        // z(h * gen_k) = z(h) + rho(h) z(gen_k)
        z.table[e] = vec_mod(vec_add(z.table[h], act.rho(h) * generator_values[k]), modulus);
    }
    if (auto defect = cocycle_defect(act, z))
        throw SemanticError("cocycle identity fails at pair (g,h) = (" + act.element_name(defect->first) +
                            ", " + act.element_name(defect->second) + ")");
    return z;
}

/// A crystallographic presentation: torus, diagonal holonomy, translations.
struct CrystalGroup {
    DiagonalAction action;
    TranslationCocycle cocycle;
};

/// Does x -> rho_g x + v have a fixed point on the torus?  Decided exactly:
/// with U (rho_g - I) V = D, a fixed point exists iff (U v)_i is integral for
/// every zero row i of D.
inline bool element_has_fixed_point(const IntMatrix& rho_g, const TorsionPoint& v) {
    if (rho_g.rows() != rho_g.cols() || rho_g.rows() != v.numerators.size())
        throw DimensionMismatch("element_has_fixed_point: shape mismatch");
    IntMatrix A = rho_g - IntMatrix::identity(rho_g.rows());
    SmithNormalForm s = smith_normal_form(A);
    IntVector un = s.U * v.numerators;
    const std::size_t S = std::min(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const Int d = i < S ? s.D(i, i) : Int(0);
        if (d == 0 && un[i] % v.modulus != 0) return false;
    }
    return true;
}

/// Index of the first nontrivial group element whose affine map has a fixed
/// point, or nullopt when the action is free.
inline std::optional<std::size_t> first_fixed_element(const DiagonalAction& act, const TranslationCocycle& z) {
    for (std::size_t e = 1; e < act.group().order(); ++e)
        if (element_has_fixed_point(act.rho(e), TorsionPoint(z.modulus, z.table[e]))) return e;
    return std::nullopt;
}

inline bool is_free_action(const DiagonalAction& act, const TranslationCocycle& z) {
    return !first_fixed_element(act, z).has_value();
}

/// T^G and the first Betti number: SNF of the stacked (rho(gen) - I).
struct FixedPointData {
    AbelianStructure structure;  // torsion part + free_rank = betti1 (circle factors)
    std::size_t betti1 = 0;
    Int torsion_order = 1;
};

inline FixedPointData fixed_point_group(const DiagonalAction& act) {
    const std::size_t n = act.rank();
    const auto& G = act.group();
    std::vector<IntMatrix> stack_blocks;
    for (std::size_t k = 0; k < G.rank(); ++k) {
        const std::size_t g = G.generator_index(k);
        stack_blocks.push_back(act.rho(g) - IntMatrix::identity(n));
    }
    IntMatrix S(stack_blocks.size() * n, n);
    for (std::size_t b = 0; b < stack_blocks.size(); ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) S(b * n + i, j) = stack_blocks[b](i, j);

    SmithNormalForm s = smith_dv(S);
    FixedPointData out;
    std::size_t rank = 0;
    for (const auto& d : s.diagonal()) {
        if (d == 0) continue;
        ++rank;
        out.torsion_order *= d;
        if (d >= 2) out.structure.invariant_factors.push_back(d);
    }
    out.betti1 = n - rank;
    out.structure.free_rank = out.betti1;
    return out;
}

}  // namespace fkm
