#pragma once

#include "blform/rational.hpp"

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace blform {

/// Thrown by inverse() on a rank-deficient square matrix.
class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix() : std::runtime_error("matrix is singular") {}
};

/// Dense matrix over the rationals, row-major. All arithmetic is exact;
/// nothing in this header ever rounds.
class RationalMatrix {
public:
    RationalMatrix() = default;

    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative dimension");
    }

    /// Row-major construction from nested lists, e.g. {{1,2},{3,4}}.
    RationalMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
        entries_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_)
                throw std::invalid_argument("matrix: ragged initializer");
            for (const auto& v : row) entries_.push_back(v);
        }
    }

    static RationalMatrix identity(int n) {
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RationalMatrix zero(int rows, int cols) { return RationalMatrix(rows, cols); }

    /// Single column from a list of entries.
    static RationalMatrix column(const std::vector<Rational>& v) {
        RationalMatrix m(static_cast<int>(v.size()), 1);
        for (size_t i = 0; i < v.size(); ++i) m(static_cast<int>(i), 0) = v[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return entries_[index(i, j)]; }
    const Rational& operator()(int i, int j) const { return entries_[index(i, j)]; }

    bool operator==(const RationalMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
    }
    bool operator!=(const RationalMatrix& other) const { return !(*this == other); }

    RationalMatrix transpose() const {
        RationalMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RationalMatrix operator*(const RationalMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("matrix: shape mismatch in product");
        RationalMatrix out(rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(i, k);
                if (a == 0) continue;
                for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    RationalMatrix operator*(const Rational& s) const {
        RationalMatrix out = *this;
        for (auto& e : out.entries_) e *= s;
        return out;
    }

    RationalMatrix operator+(const RationalMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("matrix: shape mismatch in sum");
        RationalMatrix out = *this;
        for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
        return out;
    }

    RationalMatrix operator-(const RationalMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("matrix: shape mismatch in difference");
        RationalMatrix out = *this;
        for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= rhs.entries_[i];
        return out;
    }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (e != 0) return false;
        return true;
    }

    RationalMatrix col(int j) const {
        RationalMatrix out(rows_, 1);
        for (int i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, j);
        return out;
    }

    /// Horizontal concatenation [this | rhs].
    RationalMatrix hcat(const RationalMatrix& rhs) const {
        if (rows_ != rhs.rows_) throw std::invalid_argument("matrix: hcat row mismatch");
        RationalMatrix out(rows_, cols_ + rhs.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
            for (int j = 0; j < rhs.cols_; ++j) out(i, cols_ + j) = rhs(i, j);
        }
        return out;
    }

private:
    size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("matrix: index out of range");
        return static_cast<size_t>(i) * cols_ + j;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> entries_;
};

/// Reduced row echelon form with the list of pivot columns. Pivots are
/// normalized to 1 and cleared above and below.
inline std::pair<RationalMatrix, std::vector<int>> rref(RationalMatrix m) {
    std::vector<int> pivots;
    int lead = 0;
    for (int r = 0; r < m.rows() && lead < m.cols(); ++r) {
        int i = r;
        while (i < m.rows() && m(i, lead) == 0) ++i;
        if (i == m.rows()) {
            --r;
            ++lead;
            continue;
        }
        if (i != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(i, j), m(r, j));
        Rational p = m(r, lead);
        for (int j = 0; j < m.cols(); ++j) m(r, j) /= p;
        for (int k = 0; k < m.rows(); ++k) {
            if (k == r || m(k, lead) == 0) continue;
            Rational f = m(k, lead);
            for (int j = 0; j < m.cols(); ++j) m(k, j) -= f * m(r, j);
        }
        pivots.push_back(lead);
        ++lead;
    }
    return {std::move(m), std::move(pivots)};
}

inline int rank(const RationalMatrix& m) {
    return static_cast<int>(rref(m).second.size());
}

/// One exact solution of A x = b, or nullopt when inconsistent. When the
/// solution set is positive-dimensional the free variables are set to zero,
/// so the answer is deterministic.
inline std::optional<RationalMatrix> solve(const RationalMatrix& a, const RationalMatrix& b) {
    if (b.cols() != 1 || b.rows() != a.rows())
        throw std::invalid_argument("solve: b must be a column matching A");
    auto [r, pivots] = rref(a.hcat(b));
    // Inconsistent iff some pivot lands in the appended column.
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    RationalMatrix x(a.cols(), 1);
    for (size_t k = 0; k < pivots.size(); ++k) x(pivots[k], 0) = r(static_cast<int>(k), a.cols());
    return x;
}

inline Rational determinant(RationalMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: square matrix required");
    int n = m.rows();
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int i = c;
        while (i < n && m(i, c) == 0) ++i;
        if (i == n) return 0;
        if (i != c) {
            for (int j = 0; j < n; ++j) std::swap(m(i, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (int k = c + 1; k < n; ++k) {
            if (m(k, c) == 0) continue;
            Rational f = m(k, c) / m(c, c);
            for (int j = c; j < n; ++j) m(k, j) -= f * m(c, j);
        }
    }
    return det;
}

/// Exact inverse. Throws SingularMatrix when det = 0.
inline RationalMatrix inverse(const RationalMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: square matrix required");
    int n = a.rows();
    auto [r, pivots] = rref(a.hcat(RationalMatrix::identity(n)));
    if (static_cast<int>(pivots.size()) != n || (n > 0 && pivots.back() != n - 1))
        throw SingularMatrix();
    RationalMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
    return inv;
}

/// Columns of a basis for the nullspace of m (free variables set to 1 one at
/// a time, pivot variables back-substituted). Empty matrix when trivial.
inline RationalMatrix nullspace(const RationalMatrix& m) {
    auto [r, pivots] = rref(m);
    std::vector<int> free_cols;
    {
        size_t pi = 0;
        for (int j = 0; j < m.cols(); ++j) {
            if (pi < pivots.size() && pivots[pi] == j)
                ++pi;
            else
                free_cols.push_back(j);
        }
    }
    RationalMatrix basis(m.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int f = free_cols[k];
        basis(f, static_cast<int>(k)) = 1;
        for (size_t p = 0; p < pivots.size(); ++p)
            basis(pivots[p], static_cast<int>(k)) = -r(static_cast<int>(p), f);
    }
    return basis;
}

} // namespace blform
