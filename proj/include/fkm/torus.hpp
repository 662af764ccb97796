#pragma once

#include "fkm/linear_solve.hpp"
#include "fkm/matrix_group.hpp"

#include <string>
#include <vector>

namespace fkm {

/// One factor of the ambient complex torus: a rank-2d lattice with a declared
/// finite unit group (the biholomorphic automorphisms fixing 0 that the model
/// knows about, integral in the lattice basis).
struct TorusFactor {
    enum class Preset { Generic, Gauss, Eisenstein, Custom };

    Preset preset = Preset::Custom;
    std::size_t rank = 0;  // lattice rank, even
    std::string iso_tag;   // factors with equal tags are declared biholomorphic
    bool aut0_infinite = false;
    std::vector<IntMatrix> unit_generators;  // as declared; presets have one
    FiniteMatrixGroup units;                 // closure of the generators

    std::string preset_name() const {
        switch (preset) {
            case Preset::Generic: return "generic";
            case Preset::Gauss: return "gauss";
            case Preset::Eisenstein: return "eisenstein";
            default: return "custom";
        }
    }
};

/// Multiplication by a primitive cube root of unity on the hexagonal lattice
/// Z + xi*Z, in the basis (1, xi).
inline IntMatrix eisenstein_rotation() { return IntMatrix{{0, -1}, {1, -1}}; }
/// Multiplication by i on the square lattice Z + i*Z, in the basis (1, i).
inline IntMatrix gauss_rotation() { return IntMatrix{{0, -1}, {1, 0}}; }

namespace detail {

inline TorusFactor finish_factor(TorusFactor f, std::size_t unit_bound) {
    if (f.rank == 0 || f.rank % 2 != 0) throw SemanticError("torus factor rank must be even and positive");
    for (const auto& u : f.unit_generators)
        if (u.rows() != f.rank || u.cols() != f.rank)
            throw DimensionMismatch("unit generator shape does not match factor rank");
    try {
        f.units = generate_closure(f.unit_generators, unit_bound);
    } catch (const ClosureExceedsBound&) {
        throw SemanticError("unit generator of infinite order (closure exceeds bound)");
    }
    if (!f.units.contains(-IntMatrix::identity(f.rank)))
        throw SemanticError("unit group must contain -identity");
    return f;
}

}  // namespace detail

inline TorusFactor make_generic_factor(std::string tag = "") {
    TorusFactor f;
    f.preset = TorusFactor::Preset::Generic;
    f.rank = 2;
    f.iso_tag = std::move(tag);
    f.unit_generators = {-IntMatrix::identity(2)};
    return detail::finish_factor(std::move(f), 16);
}

inline TorusFactor make_gauss_factor(std::string tag = "") {
    TorusFactor f;
    f.preset = TorusFactor::Preset::Gauss;
    f.rank = 2;
    f.iso_tag = std::move(tag);
    f.unit_generators = {gauss_rotation()};
    return detail::finish_factor(std::move(f), 16);
}

inline TorusFactor make_eisenstein_factor(std::string tag = "") {
    TorusFactor f;
    f.preset = TorusFactor::Preset::Eisenstein;
    f.rank = 2;
    f.iso_tag = std::move(tag);
    f.unit_generators = {-eisenstein_rotation()};
    return detail::finish_factor(std::move(f), 16);
}

inline TorusFactor make_custom_factor(std::size_t rank, std::vector<IntMatrix> unit_generators,
                                      std::string tag = "", bool aut0_infinite = false,
                                      std::size_t unit_bound = 1024) {
    TorusFactor f;
    f.preset = TorusFactor::Preset::Custom;
    f.rank = rank;
    f.iso_tag = std::move(tag);
    f.aut0_infinite = aut0_infinite;
    if (unit_generators.empty()) unit_generators = {-IntMatrix::identity(rank)};
    f.unit_generators = std::move(unit_generators);
    return detail::finish_factor(std::move(f), unit_bound);
}

/// Ordered product of torus factors.
struct TorusSpec {
    std::vector<TorusFactor> factors;
    bool assume_non_isogenous = false;  // distinct tags carry no hidden homomorphisms

    std::size_t total_rank() const {
        std::size_t r = 0;
        for (const auto& f : factors) r += f.rank;
        return r;
    }
    std::size_t factor_offset(std::size_t k) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < k; ++i) off += factors[i].rank;
        return off;
    }
};

/// Assembles a spec from factors, assigning default iso tags: CM presets of
/// one kind are the same curve; generic/custom factors get distinct tags
/// unless told otherwise.
inline TorusSpec make_torus(std::vector<TorusFactor> factors, bool assume_non_isogenous = false) {
    TorusSpec spec;
    spec.assume_non_isogenous = assume_non_isogenous;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        TorusFactor& f = factors[i];
        if (f.iso_tag.empty()) {
            switch (f.preset) {
                case TorusFactor::Preset::Gauss: f.iso_tag = "gauss"; break;
                case TorusFactor::Preset::Eisenstein: f.iso_tag = "eisenstein"; break;
                default: f.iso_tag = f.preset_name() + ":" + std::to_string(i + 1); break;
            }
        }
    }
    spec.factors = std::move(factors);
    if (spec.total_rank() % 2 != 0) throw SemanticError("total lattice rank must be even");
    return spec;
}

/// Point of order dividing m: the class of numerators/m in the real torus.
struct TorsionPoint {
    Int modulus = 1;
    IntVector numerators;  // canonical form: entries in [0, modulus)

    TorsionPoint() = default;
    TorsionPoint(Int m, IntVector nums) : modulus(std::move(m)), numerators(vec_mod(nums, modulus)) {}

    static TorsionPoint zero(const Int& m, std::size_t rank) { return TorsionPoint(m, IntVector(rank, Int(0))); }

    bool is_zero() const { return vec_is_zero(numerators); }

    TorsionPoint added(const TorsionPoint& o) const {
        require_same(o);
        return TorsionPoint(modulus, vec_add(numerators, o.numerators));
    }
    TorsionPoint negated() const {
        IntVector v(numerators.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = -numerators[i];
        return TorsionPoint(modulus, std::move(v));
    }
    TorsionPoint transformed(const IntMatrix& u) const { return TorsionPoint(modulus, u * numerators); }

    /// Same point expressed over a multiple of the current modulus.
    TorsionPoint rescaled(const Int& new_modulus) const {
        if (new_modulus % modulus != 0) throw SemanticError("torsion point rescale: modulus not a multiple");
        Int s = new_modulus / modulus;
        IntVector v(numerators.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = numerators[i] * s;
        return TorsionPoint(new_modulus, std::move(v));
    }

    friend bool operator==(const TorsionPoint& a, const TorsionPoint& b) {
        return a.modulus == b.modulus && a.numerators == b.numerators;
    }
    friend bool operator<(const TorsionPoint& a, const TorsionPoint& b) {
        if (a.modulus != b.modulus) return a.modulus < b.modulus;
        return a.numerators < b.numerators;
    }

  private:
    void require_same(const TorsionPoint& o) const {
        if (modulus != o.modulus || numerators.size() != o.numerators.size())
            throw DimensionMismatch("torsion point shape mismatch");
    }
};

/// All m^rank torsion points of T[m], lexicographic in the numerators.
inline std::vector<TorsionPoint> torsion_points(const TorusSpec& T, const Int& m,
                                                std::size_t bound = 1u << 20) {
    if (m < 1) throw SemanticError("torsion modulus must be >= 1");
    const std::size_t rank = T.total_rank();
    Int count = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        count *= m;
        if (count > int_from_size(bound)) throw ResourceBound("torsion point enumeration exceeds bound");
    }
    std::vector<TorsionPoint> out;
    IntVector cur(rank, Int(0));
    for (;;) {
        out.emplace_back(m, cur);
        std::size_t k = rank;
        while (k-- > 0) {
            if (++cur[k] < m) break;
            cur[k] = 0;
            if (k == 0) return out;
        }
        if (rank == 0) return out;
    }
}

/// Points x in (one factor's) T[m] with (u - I) x = 0, i.e. fixed by the unit
/// u; solved exactly mod m.
inline std::vector<TorsionPoint> fixed_torsion_under_unit(const IntMatrix& u, const Int& m) {
    if (u.rows() != u.cols()) throw DimensionMismatch("unit must be square");
    IntMatrix A = u - IntMatrix::identity(u.rows());
    LinearSolution sol = solve_linear(A, IntVector(u.rows(), Int(0)), m);
    std::vector<TorsionPoint> out;
    for (auto& v : sol.enumerate_all()) out.emplace_back(m, std::move(v));
    return out;
}

}  // namespace fkm
