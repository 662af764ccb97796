#pragma once

#include "fkm/cohomology.hpp"
#include "fkm/crystal.hpp"

#include <optional>
#include <vector>

namespace fkm {

/// H^1(G, T) realized on torsion points: cocycle tables valued in T[N]
/// (N = exponent of G) modulo the coboundaries of points of T[N^2] whose
/// coboundary is T[N]-valued.  Construction cross-checks the invariant
/// factors against the bar-resolution H^2(G, L); a failure there means the
/// torsion caps were insufficient for the input and is reported loudly.
class TorusCohomology {
  public:
    explicit TorusCohomology(const DiagonalAction& act, bool cross_check = true)
        : act_(&act), N_(act.exponent()), n_(act.rank()), q_(act.group().order()) {
        build();
        if (cross_check) {
            CohomologyGroup h2 = cohomology(act.group_table(), act.lattice_module(), 2);
            if (h2.structure != structure_)
                throw CrossCheckError("H^1(G,T) invariant factors " + structure_.to_string() +
                                      " do not match H^2(G,L) " + h2.structure.to_string());
        }
    }

    const Int& torsion_modulus() const { return N_; }
    const AbelianStructure& structure() const { return structure_; }
    const std::vector<Int>& summand_orders() const { return summand_orders_; }
    Int class_count() const {
        Int c = 1;
        for (const auto& d : summand_orders_) c *= d;
        return c;
    }

    /// Canonical cocycle table of a class label.
    TranslationCocycle class_table(const IntVector& label) const {
        if (label.size() != summand_orders_.size()) throw DimensionMismatch("class label length");
        IntVector flat(dim_, Int(0));
        for (std::size_t i = 0; i < label.size(); ++i) {
            Int c = mod_floor(label[i], summand_orders_[i]);
            for (std::size_t j = 0; j < dim_; ++j) flat[j] += c * reps_[i][j];
        }
        return unflatten(vec_mod(flat, N_));
    }

    /// Canonical label of a T[N]-valued cocycle table.
    IntVector reduce(const TranslationCocycle& z) const {
        if (z.modulus != N_) throw SemanticError("reduce expects a table at the torsion modulus");
        auto label = reduce_flat(z.flattened_nonidentity());
        if (!label) throw SemanticError("table is not a cocycle");
        return *label;
    }

    /// Class of an arbitrary-modulus cocycle: scales into T[N] when possible,
    /// otherwise compares against every class through an exact coboundary
    /// test with the denominator bound modulus * d_max.
    IntVector class_of(const TranslationCocycle& z) const {
        if (z.modulus == N_) return reduce(z);
        if (N_ % z.modulus == 0) {
            TranslationCocycle scaled;
            scaled.modulus = N_;
            Int s = N_ / z.modulus;
            for (const auto& row : z.table) {
                IntVector v(row.size());
                for (std::size_t i = 0; i < row.size(); ++i) v[i] = row[i] * s;
                scaled.table.push_back(vec_mod(v, N_));
            }
            return reduce(scaled);
        }
        const Int Q = lcm_int(z.modulus, N_);
        for (const auto& label : all_labels()) {
            TranslationCocycle rep = class_table(label);
            IntVector diff(dim_);
            for (std::size_t e = 1; e < q_; ++e)
                for (std::size_t i = 0; i < n_; ++i)
                    diff[(e - 1) * n_ + i] = mod_floor(z.table[e][i] * (Q / z.modulus) -
                                                           rep.table[e][i] * (Q / N_),
                                                       Q);
            if (is_coboundary(diff, Q)) return label;
        }
        throw CrossCheckError("cocycle matches no class; torsion caps insufficient");
    }

    std::vector<IntVector> all_labels(std::size_t bound = 1u << 20) const {
        Int total = class_count();
        if (total > int_from_size(bound)) throw ResourceBound("class enumeration exceeds bound");
        std::vector<IntVector> out;
        IntVector cur(summand_orders_.size(), Int(0));
        for (;;) {
            out.push_back(cur);
            std::size_t k = summand_orders_.size();
            while (k-- > 0) {
                if (++cur[k] < summand_orders_[k]) break;
                cur[k] = 0;
                if (k == 0) return out;
            }
            if (summand_orders_.empty()) return out;
        }
    }

    const DiagonalAction& action() const { return *act_; }

  private:
    const DiagonalAction* act_;
    Int N_;
    std::size_t n_, q_, dim_ = 0;
    AbelianStructure structure_;
    std::vector<Int> summand_orders_;
    std::vector<IntVector> reps_;  // flattened canonical cocycles, one per summand

    IntMatrix v_inv_;   // inverse of V from the cocycle-lattice Smith form
    IntVector lambda_;  // cocycle lattice = V * diag(lambda)
    IntMatrix k_basis_;
    IntMatrix u_c_, u_c_inv_;
    IntVector all_orders_;
    std::vector<std::size_t> summand_pos_;
    IntMatrix stacked_;     // rows (rho(g) - I), g != 1
    Int d_max_ = 1;         // largest invariant factor of stacked_

    TranslationCocycle unflatten(const IntVector& flat) const {
        TranslationCocycle z;
        z.modulus = N_;
        z.table.assign(q_, IntVector(n_, Int(0)));
        for (std::size_t e = 1; e < q_; ++e)
            for (std::size_t i = 0; i < n_; ++i) z.table[e][i] = flat[(e - 1) * n_ + i];
        return z;
    }

    std::optional<IntVector> reduce_flat(const IntVector& x) const {
        IntVector w = v_inv_ * x;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] % lambda_[i] != 0) return std::nullopt;
            w[i] /= lambda_[i];
        }
        IntVector y = u_c_ * w;
        IntVector label;
        for (std::size_t pos : summand_pos_) label.push_back(mod_floor(y[pos], all_orders_[pos]));
        return label;
    }

    // delta(t)(g) = (rho(g) - 1) t; is diff (numerators mod Q) of that shape
    // for some torsion t with denominator Q * d_max?
    bool is_coboundary(const IntVector& diff, const Int& Q) const {
        const Int QQ = Q * d_max_;
        RatVector rhs(dim_);
        for (std::size_t i = 0; i < dim_; ++i) rhs[i] = Rat(diff[i] * d_max_);
        return solve_linear(stacked_, rhs, QQ).solvable;
    }

    void build() {
        dim_ = n_ * (q_ - 1);
        const GroupTable G = act_->group_table();

        // Cocycle constraints over T[N]: for every pair (g,h) with g,h != 1,
        // z(gh) - z(g) - rho(g) z(h) = 0 mod N (z(1) = 0 is built in).
        const std::size_t pair_rows = n_ * (q_ - 1) * (q_ - 1);
        IntMatrix A(pair_rows, dim_);
        std::size_t row = 0;
        for (std::size_t g = 1; g < q_; ++g)
            for (std::size_t h = 1; h < q_; ++h) {
                const int gh = G.mult[g][h];
                for (std::size_t i = 0; i < n_; ++i) {
                    if (gh != 0) A(row + i, (gh - 1) * n_ + i) += 1;
                    A(row + i, (g - 1) * n_ + i) -= 1;
                    for (std::size_t j = 0; j < n_; ++j) {
                        const Int& v = act_->rho(g)(i, j);
                        if (v != 0) A(row + i, (h - 1) * n_ + j) -= v;
                    }
                }
                row += n_;
            }

        // Lattice {x : A x = 0 mod N} = V diag(lambda).
        SmithNormalForm s = smith_dv(A);
        lambda_.assign(dim_, Int(1));
        const std::size_t S = std::min(A.rows(), A.cols());
        for (std::size_t j = 0; j < S; ++j)
            if (s.D(j, j) != 0) lambda_[j] = N_ / gcd_int(s.D(j, j), N_);
        k_basis_ = IntMatrix(dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) k_basis_(i, j) = s.V(i, j) * lambda_[j];
        v_inv_ = unimodular_inverse(s.V);

        // Stacked (rho(g) - I), used for coboundaries and the membership test.
        stacked_ = IntMatrix(dim_, n_);
        for (std::size_t g = 1; g < q_; ++g) {
            IntMatrix blk = act_->rho(g) - IntMatrix::identity(n_);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j) stacked_((g - 1) * n_ + i, j) = blk(i, j);
        }
        SmithNormalForm st = smith_dv(stacked_);
        for (const auto& d : st.diagonal())
            if (d > d_max_) d_max_ = d;

        // Coboundary generators: tau with S tau = 0 mod N yields the table
        // (S tau)/N, i.e. the coboundary of tau/N^2 when it is T[N]-valued.
        IntVector mu(n_, Int(1));
        const std::size_t Sn = std::min(stacked_.rows(), stacked_.cols());
        for (std::size_t j = 0; j < Sn; ++j)
            if (st.D(j, j) != 0) mu[j] = N_ / gcd_int(st.D(j, j), N_);
        IntMatrix tau_basis(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) tau_basis(i, j) = st.V(i, j) * mu[j];

        std::vector<IntVector> den_cols;
        IntMatrix stau = stacked_ * tau_basis;
        for (std::size_t j = 0; j < n_; ++j) {
            IntVector col(dim_);
            for (std::size_t i = 0; i < dim_; ++i) {
                if (stau(i, j) % N_ != 0) throw CrossCheckError("coboundary generator not divisible by N");
                col[i] = stau(i, j) / N_;
            }
            den_cols.push_back(std::move(col));
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            IntVector e(dim_, Int(0));
            e[i] = N_;
            den_cols.push_back(std::move(e));
        }

        // Quotient: coordinates of the denominators inside the cocycle lattice.
        IntMatrix C(dim_, den_cols.size());
        for (std::size_t j = 0; j < den_cols.size(); ++j) {
            IntVector w = v_inv_ * den_cols[j];
            for (std::size_t i = 0; i < dim_; ++i) {
                if (w[i] % lambda_[i] != 0) throw CrossCheckError("coboundary outside the cocycle lattice");
                C(i, j) = w[i] / lambda_[i];
            }
        }
        SmithNormalForm cs = smith_normal_form(C);
        all_orders_.assign(dim_, Int(0));
        const std::size_t S2 = std::min(C.rows(), C.cols());
        for (std::size_t i = 0; i < S2; ++i) all_orders_[i] = cs.D(i, i);
        for (const auto& d : all_orders_)
            if (d == 0) throw CrossCheckError("H^1(G,T) has unexpected free part");
        u_c_ = cs.U;
        u_c_inv_ = unimodular_inverse(cs.U);
        for (std::size_t i = 0; i < dim_; ++i)
            if (all_orders_[i] >= 2) summand_pos_.push_back(i);
        for (std::size_t pos : summand_pos_) {
            summand_orders_.push_back(all_orders_[pos]);
            reps_.push_back(vec_mod(k_basis_ * u_c_inv_.column(pos), N_));
        }
        structure_ = merge_cyclic_orders(summand_orders_);
    }
};

inline TorusCohomology torus_h1(const DiagonalAction& act, bool cross_check = true) {
    return TorusCohomology(act, cross_check);
}

}  // namespace fkm
