#pragma once

#include "blform/matrix.hpp"
#include "blform/subspace.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace blform {

class SingularWitness : public std::runtime_error {
public:
    SingularWitness() : std::runtime_error("witness matrices must all be invertible") {}
};

/// Projection datum (Pi1, Pi2, Pi3, Pi4) with dimension datum (1,2,2;1):
/// Pi1, Pi4 are 1x3 and Pi2, Pi3 are 2x3, all required surjective.
struct BLDatum {
    RationalMatrix pi1{1, 3};
    RationalMatrix pi2{2, 3};
    RationalMatrix pi3{2, 3};
    RationalMatrix pi4{1, 3};

    BLDatum() = default;
    BLDatum(RationalMatrix p1, RationalMatrix p2, RationalMatrix p3, RationalMatrix p4)
        : pi1(std::move(p1)), pi2(std::move(p2)), pi3(std::move(p3)), pi4(std::move(p4)) {
        if (pi1.rows() != 1 || pi1.cols() != 3 || pi4.rows() != 1 || pi4.cols() != 3 ||
            pi2.rows() != 2 || pi2.cols() != 3 || pi3.rows() != 2 || pi3.cols() != 3)
            throw std::invalid_argument("datum: shapes must be 1x3, 2x3, 2x3, 1x3");
    }

    bool operator==(const BLDatum& o) const {
        return pi1 == o.pi1 && pi2 == o.pi2 && pi3 == o.pi3 && pi4 == o.pi4;
    }
};

enum class FormTag { Zero, L1, L2, L3, L4 };

inline std::string tag_name(FormTag t) {
    switch (t) {
        case FormTag::Zero: return "Zero";
        case FormTag::L1: return "L1";
        case FormTag::L2: return "L2";
        case FormTag::L3: return "L3";
        case FormTag::L4: return "L4";
    }
    return "?";
}

/// Standard-form name: one of the discrete forms or the one-parameter family
/// L4(beta). beta is meaningful only for tag L4; beta = 0 and beta = 1 are
/// legal members of the family.
struct NormalForm {
    FormTag tag = FormTag::Zero;
    Rational beta = 0;

    static NormalForm zero() { return {FormTag::Zero, 0}; }
    static NormalForm l1() { return {FormTag::L1, 0}; }
    static NormalForm l2() { return {FormTag::L2, 0}; }
    static NormalForm l3() { return {FormTag::L3, 0}; }
    static NormalForm l4(Rational b) { return {FormTag::L4, std::move(b)}; }

    bool operator==(const NormalForm& o) const {
        if (tag != o.tag) return false;
        return tag != FormTag::L4 || beta == o.beta;
    }
    bool operator!=(const NormalForm& o) const { return !(*this == o); }

    std::string name() const {
        if (tag == FormTag::L4) return "L4(" + blform::to_string(beta) + ")";
        return tag_name(tag);
    }
};

/// Invertible (A1, A2, A3, A4, B) realizing Pi'_j = A_j Pi_j B.
struct EquivalenceWitness {
    RationalMatrix a1{1, 1};
    RationalMatrix a2{2, 2};
    RationalMatrix a3{2, 2};
    RationalMatrix a4{1, 1};
    RationalMatrix b{3, 3};

    static EquivalenceWitness identity() {
        return {RationalMatrix::identity(1), RationalMatrix::identity(2),
                RationalMatrix::identity(2), RationalMatrix::identity(1),
                RationalMatrix::identity(3)};
    }

    bool invertible() const {
        return determinant(a1) != 0 && determinant(a2) != 0 && determinant(a3) != 0 &&
               determinant(a4) != 0 && determinant(b) != 0;
    }

    EquivalenceWitness inverse_witness() const {
        return {inverse(a1), inverse(a2), inverse(a3), inverse(a4), inverse(b)};
    }

    /// Composition: applying `first` then `second` equals applying the result.
    static EquivalenceWitness compose(const EquivalenceWitness& second,
                                      const EquivalenceWitness& first) {
        return {second.a1 * first.a1, second.a2 * first.a2, second.a3 * first.a3,
                second.a4 * first.a4, first.b * second.b};
    }
};

/// Exponents (p1, p2, p3), infinity allowed. The endpoint range is p1 = inf,
/// 1/p2 + 1/p3 = 1 with 1 < p2, p3 < inf.
struct ExponentTriple {
    double p1 = std::numeric_limits<double>::infinity();
    double p2 = 2.0;
    double p3 = 2.0;

    bool valid() const {
        auto ok = [](double p) { return p >= 1.0; };
        return ok(p1) && ok(p2) && ok(p3);
    }

    bool in_endpoint_range() const {
        if (!std::isinf(p1)) return false;
        if (!(p2 > 1.0 && p3 > 1.0 && std::isfinite(p2) && std::isfinite(p3))) return false;
        return std::abs(1.0 / p2 + 1.0 / p3 - 1.0) < 1e-9;
    }
};

/// Empty report = valid datum.
struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

inline ValidationReport validate(const BLDatum& d) {
    ValidationReport report;
    auto check = [&](const RationalMatrix& m, int expected, const char* name) {
        int r = rank(m);
        if (r != expected)
            report.violations.push_back(std::string("rank(") + name + ")=" + std::to_string(r) +
                                        " != " + std::to_string(expected));
    };
    check(d.pi1, 1, "pi1");
    check(d.pi2, 2, "pi2");
    check(d.pi3, 2, "pi3");
    check(d.pi4, 1, "pi4");
    return report;
}

/// The subspaces V_j = range(Pi_j^T) together with the containment flags the
/// classification branches on, plus the hypothesis that V4 meets each other
/// V_j trivially.
struct SubspaceProfile {
    Subspace v1, v2, v3, v4;
    bool v2_equals_v3 = false;
    bool v1_in_v2 = false;
    bool v1_in_v3 = false;
    bool v1_in_span_w_v4 = false; // V1 inside span(V2 cap V3, V4)
    bool hypothesis_holds = false;
};

inline SubspaceProfile subspace_profile(const BLDatum& d) {
    SubspaceProfile p;
    p.v1 = range_of_adjoint(d.pi1);
    p.v2 = range_of_adjoint(d.pi2);
    p.v3 = range_of_adjoint(d.pi3);
    p.v4 = range_of_adjoint(d.pi4);
    p.v2_equals_v3 = equal(p.v2, p.v3);
    p.v1_in_v2 = contains(p.v2, p.v1);
    p.v1_in_v3 = contains(p.v3, p.v1);
    Subspace w = intersect(p.v2, p.v3);
    p.v1_in_span_w_v4 = contains(sum_span(w, p.v4), p.v1);
    p.hypothesis_holds = intersect(p.v4, p.v1).dim() == 0 &&
                         intersect(p.v4, p.v2).dim() == 0 &&
                         intersect(p.v4, p.v3).dim() == 0;
    return p;
}

/// The four target matrices (3x1, 3x2, 3x2, 3x1) in the transposed
/// convention: a witness is correct when B^T Pi_j^T A_j^T equals target j.
/// For L4 the (3,1) entry of the third target is beta.
inline std::array<RationalMatrix, 4> normal_form_targets(const NormalForm& nf) {
    RationalMatrix t2{{1, 0}, {0, 1}, {0, 0}};
    RationalMatrix t4{{0}, {0}, {1}};
    RationalMatrix t1{{1}, {0}, {0}};
    RationalMatrix t3 = t2;
    switch (nf.tag) {
        case FormTag::Zero:
            break;
        case FormTag::L1:
            t3 = RationalMatrix{{1, 0}, {0, 1}, {0, 1}};
            break;
        case FormTag::L2:
            t3 = RationalMatrix{{1, 0}, {0, 1}, {1, 0}};
            break;
        case FormTag::L3:
            t1 = RationalMatrix{{1}, {0}, {1}};
            t3 = RationalMatrix{{1, 0}, {0, 1}, {0, 1}};
            break;
        case FormTag::L4:
            t1 = RationalMatrix{{1}, {0}, {1}};
            t3 = RationalMatrix{{1, 0}, {0, 1}, {nf.beta, 0}};
            break;
    }
    return {t1, t2, t3, t4};
}

/// Canonical datum of a normal form, read off the targets by transposition.
inline BLDatum datum_of(const NormalForm& nf) {
    auto t = normal_form_targets(nf);
    return BLDatum(t[0].transpose(), t[1].transpose(), t[2].transpose(), t[3].transpose());
}

/// Pi'_j = A_j Pi_j B, exactly.
inline BLDatum apply_witness(const BLDatum& d, const EquivalenceWitness& w) {
    if (!w.invertible()) throw SingularWitness();
    return BLDatum(w.a1 * d.pi1 * w.b, w.a2 * d.pi2 * w.b, w.a3 * d.pi3 * w.b,
                   w.a4 * d.pi4 * w.b);
}

/// True iff B^T Pi_j^T A_j^T matches every target of nf, by exact equality.
inline bool verify_witness(const BLDatum& d, const EquivalenceWitness& w, const NormalForm& nf) {
    auto targets = normal_form_targets(nf);
    RationalMatrix bt = w.b.transpose();
    const std::array<const RationalMatrix*, 4> pis = {&d.pi1, &d.pi2, &d.pi3, &d.pi4};
    const std::array<const RationalMatrix*, 4> as = {&w.a1, &w.a2, &w.a3, &w.a4};
    for (int j = 0; j < 4; ++j) {
        if (bt * pis[j]->transpose() * as[j]->transpose() != targets[j]) return false;
    }
    return true;
}

/// Constant-change factor |a4|^(1/p1 + 2/p2 + 2/p3 - 3) / (|det B| prod_j |det A_j|^(1/p_j)),
/// with 1/inf read as 0. Determinants are taken in absolute value.
inline double constant_factor(const EquivalenceWitness& w, const ExponentTriple& p) {
    if (!w.invertible()) throw SingularWitness();
    auto inv = [](double q) { return std::isinf(q) ? 0.0 : 1.0 / q; };
    double e = inv(p.p1) + 2.0 * inv(p.p2) + 2.0 * inv(p.p3) - 3.0;
    double a4 = std::abs(to_double(w.a4(0, 0)));
    double numer = std::pow(a4, e);
    double denom = std::abs(to_double(determinant(w.b)));
    denom *= std::pow(std::abs(to_double(determinant(w.a1))), inv(p.p1));
    denom *= std::pow(std::abs(to_double(determinant(w.a2))), inv(p.p2));
    denom *= std::pow(std::abs(to_double(determinant(w.a3))), inv(p.p3));
    return numer / denom;
}

} // namespace blform
