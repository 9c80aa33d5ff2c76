#pragma once

#include "blform/matrix.hpp"

#include <stdexcept>

namespace blform {

/// A linear subspace of Q^3 in a canonical basis: the basis columns are the
/// nonzero rows of the RREF of the transposed spanning set, transposed back.
/// Two Subspace values are equal iff the subspaces are equal, so equality and
/// containment can be decided on the stored representation.
class Subspace {
public:
    Subspace() : basis_(3, 0) {}

    /// Span of the columns of `spanning` (3 x m).
    static Subspace span_of_columns(const RationalMatrix& spanning) {
        if (spanning.rows() != 3) throw std::invalid_argument("subspace: ambient dimension is 3");
        auto [r, pivots] = rref(spanning.transpose());
        RationalMatrix basis(3, static_cast<int>(pivots.size()));
        for (size_t k = 0; k < pivots.size(); ++k)
            for (int j = 0; j < 3; ++j) basis(j, static_cast<int>(k)) = r(static_cast<int>(k), j);
        Subspace s;
        s.basis_ = basis;
        return s;
    }

    int ambient_dim() const { return 3; }
    int dim() const { return basis_.cols(); }
    const RationalMatrix& basis() const { return basis_; }

    /// First canonical basis vector; throws on the zero subspace.
    RationalMatrix canonical_vector() const {
        if (dim() == 0) throw std::logic_error("subspace: zero subspace has no spanning vector");
        return basis_.col(0);
    }

    bool contains_vector(const RationalMatrix& v) const {
        if (v.rows() != 3 || v.cols() != 1) throw std::invalid_argument("subspace: expected 3-vector");
        if (dim() == 0) return v.is_zero();
        return solve(basis_, v).has_value();
    }

    bool operator==(const Subspace& other) const { return basis_ == other.basis_; }
    bool operator!=(const Subspace& other) const { return !(*this == other); }

private:
    RationalMatrix basis_;
};

/// Image of P^T for a k x 3 projection matrix (k = 1 or 2): the subspace V_j.
inline Subspace range_of_adjoint(const RationalMatrix& p) {
    if (p.cols() != 3) throw std::invalid_argument("range_of_adjoint: expected k x 3 matrix");
    return Subspace::span_of_columns(p.transpose());
}

inline Subspace sum_span(const Subspace& s, const Subspace& t) {
    return Subspace::span_of_columns(s.basis().hcat(t.basis()));
}

inline Subspace intersect(const Subspace& s, const Subspace& t) {
    if (s.dim() == 0 || t.dim() == 0) return Subspace();
    // Null vectors (u; v) of [S | T] give S u = -T v in the intersection.
    RationalMatrix stacked = s.basis().hcat(t.basis());
    RationalMatrix null_basis = nullspace(stacked);
    RationalMatrix vectors(3, null_basis.cols());
    for (int k = 0; k < null_basis.cols(); ++k) {
        for (int i = 0; i < 3; ++i) {
            Rational acc = 0;
            for (int j = 0; j < s.dim(); ++j) acc += s.basis()(i, j) * null_basis(j, k);
            vectors(i, k) = acc;
        }
    }
    return Subspace::span_of_columns(vectors);
}

inline bool contains(const Subspace& s, const Subspace& t) {
    for (int j = 0; j < t.dim(); ++j)
        if (!s.contains_vector(t.basis().col(j))) return false;
    return true;
}

inline bool equal(const Subspace& s, const Subspace& t) { return s == t; }

} // namespace blform
