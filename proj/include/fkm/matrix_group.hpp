#pragma once

#include "fkm/int_matrix.hpp"

#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace fkm {

/// Plain multiplication/inverse tables; the shape both group flavours reduce
/// to for cohomology and cocycle work.  Index 0 is the identity.
struct GroupTable {
    std::size_t order = 1;
    std::vector<std::vector<int>> mult;
    std::vector<int> inverse;

    int mul(int i, int j) const { return mult[i][j]; }
    int inv(int i) const { return inverse[i]; }
};

/// Finite group of integer matrices, closed under product and inverse.
/// Element 0 is the identity; the rest are sorted lexicographically by
/// flattened entries.
class FiniteMatrixGroup {
  public:
    FiniteMatrixGroup() = default;

    /// Builds directly from a closed element set (validated).
    FiniteMatrixGroup(std::size_t degree, std::vector<IntMatrix> elements,
                      std::vector<int> generator_indices, bool build_table = true)
        : degree_(degree), elements_(std::move(elements)), generators_(std::move(generator_indices)) {
        for (std::size_t i = 0; i < elements_.size(); ++i) index_[elements_[i]] = static_cast<int>(i);
        if (build_table) build_mult_table();
    }

    std::size_t degree() const { return degree_; }
    std::size_t order() const { return elements_.size(); }
    const IntMatrix& element(std::size_t i) const { return elements_[i]; }
    const std::vector<IntMatrix>& elements() const { return elements_; }
    const std::vector<int>& generator_indices() const { return generators_; }

    std::optional<int> index_of(const IntMatrix& m) const {
        auto it = index_.find(m);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    int mul(int i, int j) const {
        if (table_) return (*table_)[i][j];
        auto idx = index_of(elements_[i] * elements_[j]);
        if (!idx) throw SemanticError("matrix group not closed under product");
        return *idx;
    }

    int inverse(int i) const {
        if (!inverse_.empty()) return inverse_[i];
        for (std::size_t j = 0; j < elements_.size(); ++j)
            if ((elements_[i] * elements_[j]).is_identity()) return static_cast<int>(j);
        throw SemanticError("matrix group element without inverse");
    }

    bool contains(const IntMatrix& m) const { return index_.count(m) > 0; }

    bool is_abelian() const {
        for (std::size_t i = 0; i < order(); ++i)
            for (std::size_t j = i + 1; j < order(); ++j)
                if (elements_[i] * elements_[j] != elements_[j] * elements_[i]) return false;
        return true;
    }

    int element_order(int i) const {
        int o = 1;
        int cur = i;
        while (cur != 0) {
            cur = mul(cur, i);
            ++o;
        }
        return o;
    }

    GroupTable group_table() const {
        GroupTable t;
        t.order = order();
        t.mult.assign(order(), std::vector<int>(order()));
        t.inverse.resize(order());
        for (std::size_t i = 0; i < order(); ++i) {
            for (std::size_t j = 0; j < order(); ++j) t.mult[i][j] = mul(static_cast<int>(i), static_cast<int>(j));
            t.inverse[i] = inverse(static_cast<int>(i));
        }
        return t;
    }

    void build_mult_table() {
        const std::size_t n = order();
        table_.emplace(n, std::vector<int>(n));
        inverse_.assign(n, -1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                auto idx = index_of(elements_[i] * elements_[j]);
                if (!idx) throw SemanticError("matrix group not closed under product");
                (*table_)[i][j] = *idx;
                if (*idx == 0) inverse_[i] = static_cast<int>(j);
            }
    }

    bool has_mult_table() const { return table_.has_value(); }

  private:
    std::size_t degree_ = 0;
    std::vector<IntMatrix> elements_;
    std::vector<int> generators_;
    std::map<IntMatrix, int> index_;
    std::optional<std::vector<std::vector<int>>> table_;
    std::vector<int> inverse_;
};

/// Closure of integer matrix generators under multiplication.  Generators
/// must be square, of one degree, and invertible over Z; throws
/// ClosureExceedsBound past `bound` elements (an infinite-order generator
/// shows up this way).
inline FiniteMatrixGroup generate_closure(const std::vector<IntMatrix>& gens, std::size_t bound = 10000) {
    if (gens.empty()) throw DimensionMismatch("generate_closure: no generators");
    const std::size_t n = gens[0].rows();
    for (const auto& g : gens) {
        if (g.rows() != n || g.cols() != n) throw DimensionMismatch("generate_closure: mixed degrees");
        if (abs_int(determinant(g)) != 1) throw SemanticError("generator not invertible over Z");
    }
    std::map<IntMatrix, int> seen;
    std::vector<IntMatrix> elems{IntMatrix::identity(n)};
    seen[elems[0]] = 0;
    std::deque<std::size_t> todo{0};
    while (!todo.empty()) {
        std::size_t cur = todo.front();
        todo.pop_front();
        for (const auto& g : gens) {
            IntMatrix prod = elems[cur] * g;
            if (seen.emplace(prod, static_cast<int>(elems.size())).second) {
                elems.push_back(prod);
                if (elems.size() > bound)
                    throw ClosureExceedsBound("matrix group closure exceeds bound " + std::to_string(bound));
                todo.push_back(elems.size() - 1);
            }
        }
    }
    // Canonical order: identity first, the rest lexicographic.
    std::sort(elems.begin() + 1, elems.end());
    std::map<IntMatrix, int> pos;
    for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
    std::vector<int> gen_idx;
    for (const auto& g : gens) gen_idx.push_back(pos.at(g));
    const bool table = elems.size() <= 2048;
    return FiniteMatrixGroup(n, std::move(elems), std::move(gen_idx), table);
}

/// The automorphism of G induced by conjugation g -> n g n^{-1}, as a
/// permutation of element indices, or nullopt when n does not normalize G.
inline std::optional<std::vector<int>> conjugation_map(const FiniteMatrixGroup& G, const IntMatrix& n) {
    if (n.rows() != n.cols() || n.rows() != G.degree())
        throw DimensionMismatch("conjugation_map: degree mismatch");
    auto inv = rational_inverse(n);
    if (!inv) throw SemanticError("conjugation_map: matrix not invertible");
    std::vector<int> perm(G.order());
    for (std::size_t i = 0; i < G.order(); ++i) {
        const IntMatrix& g = G.element(i);
        // n * g * n^{-1}, exactly; bail out if the result is not integral.
        IntMatrix ng = n * g;
        IntMatrix out(ng.rows(), ng.cols());
        for (std::size_t r = 0; r < ng.rows(); ++r)
            for (std::size_t c = 0; c < ng.cols(); ++c) {
                Rat acc = 0;
                for (std::size_t k = 0; k < ng.cols(); ++k) acc += Rat(ng(r, k)) * (*inv)[k][c];
                if (denominator(acc) != 1) return std::nullopt;
                out(r, c) = numerator(acc);
            }
        auto idx = G.index_of(out);
        if (!idx) return std::nullopt;
        perm[i] = *idx;
    }
    return perm;
}

}  // namespace fkm
