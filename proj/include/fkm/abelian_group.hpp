#pragma once

#include "fkm/int_matrix.hpp"
#include "fkm/matrix_group.hpp"

#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace fkm {

/// Z/m1 x ... x Z/mr with elements indexed by mixed-radix exponent tuples
/// (last coordinate fastest).  Index 0 is the identity.
class AbstractAbelianGroup {
  public:
    AbstractAbelianGroup() : moduli_{1} {}
    explicit AbstractAbelianGroup(std::vector<int> moduli) : moduli_(std::move(moduli)) {
        if (moduli_.empty()) moduli_ = {1};
        order_ = 1;
        for (int m : moduli_) {
            if (m < 1) throw SemanticError("abelian group modulus must be >= 1");
            order_ *= static_cast<std::size_t>(m);
        }
    }

    const std::vector<int>& moduli() const { return moduli_; }
    std::size_t rank() const { return moduli_.size(); }
    std::size_t order() const { return order_; }

    int exponent() const {
        int e = 1;
        for (int m : moduli_) e = std::lcm(e, m);
        return e;
    }

    std::vector<int> tuple_of(std::size_t index) const {
        std::vector<int> t(moduli_.size());
        for (std::size_t k = moduli_.size(); k-- > 0;) {
            t[k] = static_cast<int>(index % moduli_[k]);
            index /= moduli_[k];
        }
        return t;
    }
    std::size_t index_of(const std::vector<int>& t) const {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < moduli_.size(); ++k) {
            int v = ((t[k] % moduli_[k]) + moduli_[k]) % moduli_[k];
            idx = idx * moduli_[k] + static_cast<std::size_t>(v);
        }
        return idx;
    }

    int mul(int i, int j) const {
        auto a = tuple_of(i), b = tuple_of(j);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = (a[k] + b[k]) % moduli_[k];
        return static_cast<int>(index_of(a));
    }
    int inv(int i) const {
        auto a = tuple_of(i);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = (moduli_[k] - a[k]) % moduli_[k];
        return static_cast<int>(index_of(a));
    }

    std::size_t generator_index(std::size_t k) const {
        std::vector<int> t(moduli_.size(), 0);
        t[k] = moduli_[k] > 1 ? 1 : 0;
        return index_of(t);
    }

    std::string element_name(std::size_t index) const {
        auto t = tuple_of(index);
        std::string s = "(";
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(t[k]);
        }
        return s + ")";
    }

    GroupTable group_table() const {
        GroupTable t;
        t.order = order_;
        t.mult.assign(order_, std::vector<int>(order_));
        t.inverse.resize(order_);
        for (std::size_t i = 0; i < order_; ++i) {
            for (std::size_t j = 0; j < order_; ++j) t.mult[i][j] = mul(static_cast<int>(i), static_cast<int>(j));
            t.inverse[i] = inv(static_cast<int>(i));
        }
        return t;
    }

  private:
    std::vector<int> moduli_;
    std::size_t order_ = 1;
};

/// All automorphisms of a small abelian group, as r x r integer matrices
/// acting on exponent tuples (row i taken mod m_i).  Enumerated by brute
/// force over generator images, which is fine at holonomy scale.
inline std::vector<IntMatrix> automorphism_group(const AbstractAbelianGroup& G, std::size_t bound = 10000) {
    if (G.order() > bound) throw ClosureExceedsBound("abelian group too large for automorphism enumeration");
    const std::size_t r = G.rank();
    const auto& m = G.moduli();

    // Candidate images for generator k: elements killed by m_k.
    std::vector<std::vector<std::vector<int>>> candidates(r);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t e = 0; e < G.order(); ++e) {
            auto t = G.tuple_of(e);
            bool killed = true;
            for (std::size_t i = 0; i < r && killed; ++i) killed = (t[i] * m[k]) % m[i] == 0;
            if (killed) candidates[k].push_back(t);
        }

    std::vector<IntMatrix> result;
    std::vector<std::size_t> pick(r, 0);
    for (;;) {
        IntMatrix A(r, r);
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t i = 0; i < r; ++i) A(i, k) = candidates[k][pick[k]][i];
        // Bijectivity by direct image count.
        std::set<std::size_t> image;
        for (std::size_t e = 0; e < G.order(); ++e) {
            auto t = G.tuple_of(e);
            std::vector<int> img(r, 0);
            for (std::size_t i = 0; i < r; ++i) {
                Int acc = 0;
                for (std::size_t k = 0; k < r; ++k) acc += A(i, k) * t[k];
                img[i] = static_cast<int>(mod_floor(acc, m[i]));
            }
            image.insert(G.index_of(img));
        }
        if (image.size() == G.order()) result.push_back(A);

        std::size_t k = r;
        while (k-- > 0) {
            if (++pick[k] < candidates[k].size()) break;
            pick[k] = 0;
            if (k == 0) return result;
        }
    }
}

/// Applies an automorphism matrix to an element index.
inline std::size_t apply_automorphism(const AbstractAbelianGroup& G, const IntMatrix& A, std::size_t e) {
    auto t = G.tuple_of(e);
    std::vector<int> img(G.rank(), 0);
    for (std::size_t i = 0; i < G.rank(); ++i) {
        Int acc = 0;
        for (std::size_t k = 0; k < G.rank(); ++k) acc += A(i, k) * t[k];
        img[i] = static_cast<int>(mod_floor(acc, G.moduli()[i]));
    }
    return G.index_of(img);
}

}  // namespace fkm
