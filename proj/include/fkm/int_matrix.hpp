#pragma once

#include "fkm/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace fkm {

using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

/// Dense matrix of exact integers, row-major.  Empty matrices are legal and
/// behave as rank 0 everywhere.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
            for (const auto& v : r) a_.push_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMatrix diagonal(const IntVector& d) {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols) {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw DimensionMismatch("column length");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }
    static IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
        std::size_t r = 0, c = 0;
        for (const auto& b : blocks) r += b.rows(), c += b.cols();
        IntMatrix m(r, c);
        std::size_t ro = 0, co = 0;
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j) m(ro + i, co + j) = b(i, j);
            ro += b.rows();
            co += b.cols();
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<Int>& flat() const { return a_; }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
        IntMatrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& v = (*this)(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += v * o(k, j);
            }
        return out;
    }
    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape");
        IntMatrix out = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += o.a_[i];
        return out;
    }
    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix diff shape");
        IntMatrix out = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= o.a_[i];
        return out;
    }
    IntMatrix operator-() const {
        IntMatrix out = *this;
        for (auto& v : out.a_) v = -v;
        return out;
    }

    IntVector operator*(const IntVector& x) const {
        if (cols_ != x.size()) throw DimensionMismatch("matrix-vector shape");
        IntVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Int s = 0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            out[i] = s;
        }
        return out;
    }
    RatVector operator*(const RatVector& x) const {
        if (cols_ != x.size()) throw DimensionMismatch("matrix-vector shape");
        RatVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rat s = 0;
            for (std::size_t j = 0; j < cols_; ++j) s += Rat((*this)(i, j)) * x[j];
            out[i] = s;
        }
        return out;
    }

    IntMatrix transpose() const {
        IntMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    IntMatrix mod_reduced(const Int& m) const {
        IntMatrix out = *this;
        for (auto& v : out.a_) v = mod_floor(v, m);
        return out;
    }

    IntMatrix submatrix(const std::vector<std::size_t>& row_idx,
                        const std::vector<std::size_t>& col_idx) const {
        IntMatrix out(row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j) out(i, j) = (*this)(row_idx[i], col_idx[j]);
        return out;
    }

    IntVector column(std::size_t j) const {
        IntVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }
    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const Int& v) { return v == 0; });
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }
    // Lexicographic on (rows, cols, flattened entries); the canonical element
    // order used by matrix groups.
    friend bool operator<(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
        return a.a_ < b.a_;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) os << ";";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) os << ",";
                os << (*this)(i, j);
            }
        }
        os << "]";
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) { return os << m.to_string(); }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// Fraction-free (Bareiss) determinant.
inline Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix w = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && w(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(w(k, j), w(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                w(i, j) = (w(i, j) * w(k, k) - w(i, k) * w(k, j)) / prev;
        prev = w(k, k);
    }
    return sign > 0 ? w(n - 1, n - 1) : Int(-w(n - 1, n - 1));
}

inline bool is_unimodular(const IntMatrix& m) {
    return m.rows() == m.cols() && abs_int(determinant(m)) == 1;
}

// Exact inverse over the rationals; nullopt for singular input.
inline std::optional<std::vector<RatVector>> rational_inverse(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = m.rows();
    std::vector<RatVector> w(n, RatVector(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w[i][j] = Rat(m(i, j));
        w[i][n + i] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && w[p][k] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(w[k], w[p]);
        Rat piv = w[k][k];
        for (auto& v : w[k]) v /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || w[i][k] == 0) continue;
            Rat f = w[i][k];
            for (std::size_t j = 0; j < 2 * n; ++j) w[i][j] -= f * w[k][j];
        }
    }
    std::vector<RatVector> inv(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = w[i][n + j];
    return inv;
}

// Inverse of a unimodular integer matrix, exactly.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    auto inv = rational_inverse(m);
    if (!inv) throw SemanticError("matrix not invertible");
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (denominator((*inv)[i][j]) != 1)
                throw SemanticError("matrix not invertible over the integers");
            out(i, j) = numerator((*inv)[i][j]);
        }
    return out;
}

inline IntVector vec_add(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sum shape");
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}
inline IntVector vec_sub(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector diff shape");
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}
inline IntVector vec_mod(const IntVector& a, const Int& m) {
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod_floor(a[i], m);
    return out;
}
inline bool vec_is_zero(const IntVector& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& v) { return v == 0; });
}

}  // namespace fkm
