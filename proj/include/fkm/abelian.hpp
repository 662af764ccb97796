#pragma once

#include "fkm/numeric.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace fkm {

/// Isomorphism type of a finitely generated abelian group:
/// Z/d1 + Z/d2 + ... + Z^free_rank with d1 | d2 | ... and every di >= 2.
struct AbelianStructure {
    std::vector<Int> invariant_factors;
    std::size_t free_rank = 0;

    bool is_trivial() const { return invariant_factors.empty() && free_rank == 0; }
    bool is_finite() const { return free_rank == 0; }
    std::optional<Int> order() const {
        if (free_rank > 0) return std::nullopt;
        Int o = 1;
        for (const auto& d : invariant_factors) o *= d;
        return o;
    }

    friend bool operator==(const AbelianStructure& a, const AbelianStructure& b) {
        return a.invariant_factors == b.invariant_factors && a.free_rank == b.free_rank;
    }
    friend bool operator!=(const AbelianStructure& a, const AbelianStructure& b) { return !(a == b); }

    std::string to_string() const {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& d : invariant_factors) {
            if (!first) os << " + ";
            os << "Z/" << d;
            first = false;
        }
        if (free_rank > 0) {
            if (!first) os << " + ";
            os << "Z^" << free_rank;
        }
        return os.str();
    }
};

/// Recombines a bag of cyclic orders (not necessarily a chain) into invariant
/// factor form.  Used when assembling a direct sum computed blockwise.
inline AbelianStructure merge_cyclic_orders(const std::vector<Int>& orders, std::size_t free_rank = 0) {
    std::map<Int, std::vector<unsigned>> by_prime;  // prime -> exponents, descending
    for (const auto& d : orders) {
        if (d <= 1) continue;
        for (const auto& [p, e] : factorize(d)) by_prime[p].push_back(e);
    }
    std::size_t slots = 0;
    for (auto& [p, es] : by_prime) {
        std::sort(es.begin(), es.end(), std::greater<>());
        slots = std::max(slots, es.size());
    }
    // slot 0 collects the largest prime powers, so build factors from last slot up.
    std::vector<Int> factors(slots, 1);
    for (const auto& [p, es] : by_prime)
        for (std::size_t k = 0; k < es.size(); ++k) {
            Int pe = 1;
            for (unsigned i = 0; i < es[k]; ++i) pe *= p;
            factors[k] *= pe;
        }
    std::reverse(factors.begin(), factors.end());
    return AbelianStructure{std::move(factors), free_rank};
}

inline AbelianStructure merge_structures(const std::vector<AbelianStructure>& parts) {
    std::vector<Int> orders;
    std::size_t free_rank = 0;
    for (const auto& p : parts) {
        orders.insert(orders.end(), p.invariant_factors.begin(), p.invariant_factors.end());
        free_rank += p.free_rank;
    }
    return merge_cyclic_orders(orders, free_rank);
}

}  // namespace fkm
