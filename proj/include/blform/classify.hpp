#pragma once

#include "blform/datum.hpp"

#include <stdexcept>

namespace blform {

class InvalidDatum : public std::runtime_error {
public:
    explicit InvalidDatum(const std::string& what) : std::runtime_error(what) {}
};

/// Some V4 cap V_j is nontrivial; such data are outside the classification.
class HypothesisViolated : public std::runtime_error {
public:
    HypothesisViolated() : std::runtime_error("V4 meets some V_j nontrivially") {}
};

/// A coefficient the case analysis guarantees to be nonzero came out zero.
/// Indicates a bug, never expected on valid input.
class InternalDegeneracy : public std::logic_error {
public:
    explicit InternalDegeneracy(const std::string& what) : std::logic_error(what) {}
};

class CrossRatioUndefined : public std::runtime_error {
public:
    CrossRatioUndefined() : std::runtime_error("cross ratio requires V2 != V3") {}
};

struct ClassificationResult {
    NormalForm normal_form;
    EquivalenceWitness witness;
    SubspaceProfile profile;
};

namespace detail {

/// First canonical basis column of s that is independent of v.
inline RationalMatrix independent_column(const Subspace& s, const RationalMatrix& v) {
    for (int j = 0; j < s.dim(); ++j) {
        RationalMatrix c = s.basis().col(j);
        if (rank(v.hcat(c)) == 2) return c;
    }
    throw InternalDegeneracy("no basis column independent of the given vector");
}

/// Unique coefficients of v in the column basis `cols` (must be consistent).
inline RationalMatrix coefficients_in(const RationalMatrix& cols, const RationalMatrix& v) {
    auto c = solve(cols, v);
    if (!c) throw InternalDegeneracy("vector not in the span of the chosen basis");
    return *c;
}

/// Splits v = (component in s) + (component in t) for s + t = Q^3 direct.
inline std::pair<RationalMatrix, RationalMatrix> split_across(const Subspace& s,
                                                              const Subspace& t,
                                                              const RationalMatrix& v) {
    RationalMatrix stacked = s.basis().hcat(t.basis());
    RationalMatrix c = coefficients_in(stacked, v);
    RationalMatrix vs(3, 1), vt(3, 1);
    for (int i = 0; i < 3; ++i) {
        Rational a = 0;
        for (int j = 0; j < s.dim(); ++j) a += s.basis()(i, j) * c(j, 0);
        vs(i, 0) = a;
        Rational b = 0;
        for (int j = 0; j < t.dim(); ++j) b += t.basis()(i, j) * c(s.dim() + j, 0);
        vt(i, 0) = b;
    }
    return {vs, vt};
}

/// Builds the witness whose B maps the frame (v1, v2, v3) so that
/// B^T v_i = e_i, then solves the small systems making each
/// B^T Pi_j^T A_j^T hit the target of nf exactly.
inline EquivalenceWitness witness_from_frame(const BLDatum& d, const NormalForm& nf,
                                             const RationalMatrix& v1, const RationalMatrix& v2,
                                             const RationalMatrix& v3) {
    RationalMatrix frame = v1.hcat(v2).hcat(v3);
    if (determinant(frame) == 0) throw InternalDegeneracy("frame vectors are dependent");
    RationalMatrix b = inverse(frame).transpose(); // B^T = frame^{-1}
    auto targets = normal_form_targets(nf);

    EquivalenceWitness w;
    w.b = b;
    RationalMatrix bt = b.transpose();
    const std::array<const RationalMatrix*, 4> pis = {&d.pi1, &d.pi2, &d.pi3, &d.pi4};
    std::array<RationalMatrix*, 4> as = {&w.a1, &w.a2, &w.a3, &w.a4};
    for (int j = 0; j < 4; ++j) {
        RationalMatrix r = bt * pis[j]->transpose(); // 3 x k_j
        int k = r.cols();
        RationalMatrix at(k, k);
        for (int c = 0; c < k; ++c) {
            auto u = solve(r, targets[j].col(c));
            if (!u) throw InternalDegeneracy("target column not reachable");
            for (int i = 0; i < k; ++i) at(i, c) = (*u)(i, 0);
        }
        *as[j] = at.transpose();
        if (determinant(*as[j]) == 0) throw InternalDegeneracy("synthesized A_j is singular");
    }
    if (!verify_witness(d, w, nf)) throw InternalDegeneracy("synthesized witness fails verification");
    return w;
}

} // namespace detail

/// Decides which standard form the datum is equivalent to and synthesizes a
/// verified witness. The seven guards follow the V2 = V3 / containment case
/// split; every vector choice is pinned to canonical basis columns and
/// zero-free-variable solves, so the witness is a deterministic function of
/// the datum.
inline ClassificationResult classify(const BLDatum& d) {
    ValidationReport report = validate(d);
    if (!report.valid()) throw InvalidDatum("datum fails rank conditions: " + report.violations[0]);
    SubspaceProfile p = subspace_profile(d);
    if (!p.hypothesis_holds) throw HypothesisViolated();

    Subspace w = intersect(p.v2, p.v3);
    ClassificationResult result;
    result.profile = p;

    if (p.v2_equals_v3) {
        if (p.v1_in_v2) {
            // Case 0: the kernel variable decouples and the form vanishes.
            RationalMatrix v1 = p.v1.canonical_vector();
            RationalMatrix v2 = detail::independent_column(p.v2, v1);
            RationalMatrix v3 = p.v4.canonical_vector();
            result.normal_form = NormalForm::zero();
            result.witness = detail::witness_from_frame(d, result.normal_form, v1, v2, v3);
            return result;
        }
        // Case 1: split the V1 direction across V2 and V4.
        RationalMatrix v = p.v1.canonical_vector();
        auto [v1, v3] = detail::split_across(p.v2, p.v4, v);
        if (v1.is_zero() || v3.is_zero()) throw InternalDegeneracy("case 1 split vanished");
        RationalMatrix v2 = detail::independent_column(p.v2, v1);
        result.normal_form = NormalForm::l4(0);
        result.witness = detail::witness_from_frame(d, result.normal_form, v1, v2, v3);
        return result;
    }

    if (p.v1_in_v2 && p.v1_in_v3) {
        // Case 2: complete V1 inside V3, splitting the new direction.
        RationalMatrix v1 = p.v1.canonical_vector();
        RationalMatrix v = detail::independent_column(p.v3, v1);
        auto [v2, v3] = detail::split_across(p.v2, p.v4, v);
        if (v3.is_zero()) throw InternalDegeneracy("case 2: V3 inside V2");
        if (rank(v1.hcat(v2)) != 2) throw InternalDegeneracy("case 2: dependent V2 part");
        result.normal_form = NormalForm::l1();
        result.witness = detail::witness_from_frame(d, result.normal_form, v1, v2, v3);
        return result;
    }

    if (p.v1_in_v2 && !p.v1_in_v3) {
        // Case 3: frame from V1, the axis W, and V4.
        RationalMatrix u1 = p.v1.canonical_vector();
        RationalMatrix v2 = w.canonical_vector();
        RationalMatrix s4 = p.v4.canonical_vector();
        RationalMatrix v = detail::independent_column(p.v3, v2);
        RationalMatrix c = detail::coefficients_in(u1.hcat(v2).hcat(s4), v);
        if (c(0, 0) == 0 || c(2, 0) == 0) throw InternalDegeneracy("case 3 coefficient vanished");
        result.normal_form = NormalForm::l2();
        result.witness =
            detail::witness_from_frame(d, result.normal_form, u1 * c(0, 0), v2, s4 * c(2, 0));
        return result;
    }

    if (!p.v1_in_v2 && p.v1_in_v3) {
        // Case 4: split the V1 direction across V2 and V4; keep the axis W.
        RationalMatrix v = p.v1.canonical_vector();
        RationalMatrix v2 = w.canonical_vector();
        auto [v1p, v3] = detail::split_across(p.v2, p.v4, v);
        if (v1p.is_zero() || v3.is_zero()) throw InternalDegeneracy("case 4 split vanished");
        result.normal_form = NormalForm::l4(1);
        result.witness = detail::witness_from_frame(d, result.normal_form, v1p, v2, v3);
        return result;
    }

    if (p.v1_in_span_w_v4) {
        // Case 5: V1 sits inside span(W, V4).
        RationalMatrix vt = p.v1.canonical_vector();
        RationalMatrix wc = w.canonical_vector();
        RationalMatrix s4 = p.v4.canonical_vector();
        RationalMatrix c = detail::coefficients_in(wc.hcat(s4), vt);
        if (c(0, 0) == 0 || c(1, 0) == 0) throw InternalDegeneracy("case 5 split vanished");
        RationalMatrix v1 = wc * c(0, 0);
        RationalMatrix v3 = s4 * c(1, 0);
        RationalMatrix v = detail::independent_column(p.v3, v1);
        RationalMatrix t2 = detail::independent_column(p.v2, v1);
        RationalMatrix alpha = detail::coefficients_in(v1.hcat(t2).hcat(v3), v);
        if (alpha(1, 0) == 0 || alpha(2, 0) == 0)
            throw InternalDegeneracy("case 5 coefficient vanished");
        RationalMatrix v2p = t2 * (alpha(1, 0) / alpha(2, 0));
        result.normal_form = NormalForm::l3();
        result.witness = detail::witness_from_frame(d, result.normal_form, v1, v2p, v3);
        return result;
    }

    // Case 6: the one-parameter family; beta = alpha3 / alpha1 from the
    // coordinates of a second V3 direction in the frame (v1, v2, v3).
    RationalMatrix v2 = w.canonical_vector();
    RationalMatrix vt = p.v1.canonical_vector();
    auto [v1, v3] = detail::split_across(p.v2, p.v4, vt);
    if (v1.is_zero() || v3.is_zero()) throw InternalDegeneracy("case 6 split vanished");
    RationalMatrix v = detail::independent_column(p.v3, v2);
    RationalMatrix alpha = detail::coefficients_in(v1.hcat(v2).hcat(v3), v);
    if (alpha(0, 0) == 0) throw InternalDegeneracy("case 6: alpha1 vanished");
    Rational beta = alpha(2, 0) / alpha(0, 0);
    if (beta == 0 || beta == 1) throw InternalDegeneracy("case 6 produced excluded beta");
    result.normal_form = NormalForm::l4(beta);
    result.witness = detail::witness_from_frame(d, result.normal_form, v1, v2, v3);
    return result;
}

/// Cross ratio of the four planes span(V1, W), V2, V3, span(V4, W) through
/// the axis W = V2 cap V3, computed from the parameters of their
/// intersections with a deterministically chosen lattice line. Exact value;
/// `infinite` is the sentinel for the coincidence degeneracies (s1 = s2 or
/// s3 = s4) and for an indeterminate first or last plane (V1 or V4 inside W).
struct CrossRatio {
    bool infinite = false;
    Rational value = 0;

    bool operator==(const CrossRatio& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    std::string str() const { return infinite ? "inf" : blform::to_string(value); }
};

namespace detail {

inline RationalMatrix cross_product(const RationalMatrix& a, const RationalMatrix& b) {
    RationalMatrix n(3, 1);
    n(0, 0) = a(1, 0) * b(2, 0) - a(2, 0) * b(1, 0);
    n(1, 0) = a(2, 0) * b(0, 0) - a(0, 0) * b(2, 0);
    n(2, 0) = a(0, 0) * b(1, 0) - a(1, 0) * b(0, 0);
    return n;
}

inline Rational dot(const RationalMatrix& a, const RationalMatrix& b) {
    Rational s = 0;
    for (int i = 0; i < 3; ++i) s += a(i, 0) * b(i, 0);
    return s;
}

} // namespace detail

inline CrossRatio cross_ratio(const BLDatum& d) {
    SubspaceProfile p = subspace_profile(d);
    if (p.v2_equals_v3) throw CrossRatioUndefined();
    Subspace w = intersect(p.v2, p.v3);

    Subspace plane1 = sum_span(p.v1, w);
    Subspace plane4 = sum_span(p.v4, w);
    if (plane1.dim() < 2 || plane4.dim() < 2) return CrossRatio{true, 0};

    std::array<RationalMatrix, 4> normals = {
        detail::cross_product(plane1.basis().col(0), plane1.basis().col(1)),
        detail::cross_product(p.v2.basis().col(0), p.v2.basis().col(1)),
        detail::cross_product(p.v3.basis().col(0), p.v3.basis().col(1)),
        detail::cross_product(plane4.basis().col(0), plane4.basis().col(1))};
    RationalMatrix axis = w.canonical_vector();

    // First lattice line (pairs of points with coordinates in {-2..2}, in
    // lexicographic order) that misses the axis and meets all four planes
    // transversally. The cross ratio does not depend on which line is found.
    std::vector<RationalMatrix> points;
    points.reserve(125);
    for (int x = -2; x <= 2; ++x)
        for (int y = -2; y <= 2; ++y)
            for (int z = -2; z <= 2; ++z)
                points.push_back(RationalMatrix{{Rational(x)}, {Rational(y)}, {Rational(z)}});

    for (size_t i = 0; i < points.size(); ++i) {
        for (size_t j = i + 1; j < points.size(); ++j) {
            const RationalMatrix& base = points[i];
            RationalMatrix dir = points[j] - base;
            // Reject lines touching the axis: base + s dir = t axis solvable.
            RationalMatrix neg = base * Rational(-1);
            if (solve(dir.hcat(axis), neg).has_value()) continue;
            std::array<Rational, 4> s;
            bool transversal = true;
            for (int k = 0; k < 4; ++k) {
                Rational nd = detail::dot(normals[k], dir);
                if (nd == 0) {
                    transversal = false;
                    break;
                }
                s[k] = -detail::dot(normals[k], base) / nd;
            }
            if (!transversal) continue;
            Rational numer = (s[0] - s[3]) * (s[2] - s[1]);
            Rational denom = (s[0] - s[1]) * (s[2] - s[3]);
            if (denom == 0) return CrossRatio{true, 0};
            return CrossRatio{false, numer / denom};
        }
    }
    throw InternalDegeneracy("no admissible lattice line found");
}

/// True iff both data classify to the same normal form (tag and beta, exact).
inline bool equivalent(const BLDatum& d1, const BLDatum& d2) {
    return classify(d1).normal_form == classify(d2).normal_form;
}

/// Datum of the special family f(x + alpha y) G(y,z) H(z,x) / (x+y+z) in the
/// variable order (x, y, z).
inline BLDatum special_family_datum(const Rational& alpha) {
    return BLDatum(RationalMatrix{{1, alpha, 0}},
                   RationalMatrix{{0, 1, 0}, {0, 0, 1}},
                   RationalMatrix{{0, 0, 1}, {1, 0, 0}},
                   RationalMatrix{{1, 1, 1}});
}

/// The explicit witness for the special family at alpha != 1 (maps to
/// L4(1 - alpha)): A1 = A4 = 1, A2, A3 2x2 and B built from alpha.
inline EquivalenceWitness special_family_witness(const Rational& alpha) {
    if (alpha == 1) throw std::invalid_argument("special_family_witness: alpha must differ from 1");
    Rational am1 = alpha - 1;
    EquivalenceWitness w;
    w.a1 = RationalMatrix{{1}};
    w.a4 = RationalMatrix{{1}};
    w.a2 = RationalMatrix{{am1, -1}, {0, 1}};
    w.a3 = RationalMatrix{{-alpha, Rational(1) - alpha}, {1, 0}};
    w.b = RationalMatrix{{-1 / am1, -alpha / am1, 1}, {1 / am1, 1 / am1, 0}, {0, 1, 0}};
    return w;
}

} // namespace blform
