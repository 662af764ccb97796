#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkm {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error taxonomy shared across the library.  The CLI maps these to exit codes.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ClosureExceedsBound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceBound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpecParseError : std::runtime_error {
    SpecParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};
struct NotFreeError : std::runtime_error {
    NotFreeError(std::string element, const std::string& what)
        : std::runtime_error(what), element(std::move(element)) {}
    std::string element;  // name of the group element with a fixed point
};
struct CrossCheckError : std::logic_error {
    using std::logic_error::logic_error;
};

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// Representative of a mod m in [0, m).  Requires m >= 1.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = (a < 0) ? -1 : 1;
        y = 0;
        return abs_int(a);
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Inverse of a mod m; throws if gcd(a, m) != 1.
inline Int mod_inverse(const Int& a, const Int& m) {
    Int x, y;
    Int g = ext_gcd(mod_floor(a, m), m, x, y);
    if (g != 1) throw SemanticError("value not invertible modulo " + m.str());
    return mod_floor(x, m);
}

// Trial-division factorization; fine for the desk-scale orders showing up here.
inline std::map<Int, unsigned> factorize(Int n) {
    std::map<Int, unsigned> out;
    if (n < 0) n = -n;
    for (Int p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    if (n > 1) ++out[n];
    return out;
}

inline Int int_from_size(std::size_t v) { return Int(static_cast<std::uint64_t>(v)); }

// Checked narrowing for JSON counts and loop bounds.
inline std::int64_t to_int64(const Int& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw ResourceBound("integer too large for a 64-bit field: " + v.str());
    return static_cast<std::int64_t>(v);
}

}  // namespace fkm
