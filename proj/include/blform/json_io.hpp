#pragma once

#include "blform/datum.hpp"
#include "blform/function_spec.hpp"
#include "blform/quadrature.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace blform {

using Json = nlohmann::json;

// Rationals travel as integers or "p/q" strings so nothing is lost.
inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument("expected an integer or a 'p/q' string");
}

inline Json rational_to_json(const Rational& q) {
    if (den(q) == 1 && num(q) >= -((BigInt(1) << 62)) && num(q) <= (BigInt(1) << 62))
        return Json(num(q).template convert_to<long long>());
    return Json(to_string(q));
}

inline RationalMatrix matrix_from_json(const Json& j, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw std::invalid_argument("matrix: wrong row count");
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("matrix: wrong column count");
        for (int k = 0; k < cols; ++k) m(i, k) = rational_from_json(row.at(k));
    }
    return m;
}

inline Json matrix_to_json(const RationalMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline BLDatum datum_from_json(const Json& j) {
    return BLDatum(matrix_from_json(j.at("pi1"), 1, 3), matrix_from_json(j.at("pi2"), 2, 3),
                   matrix_from_json(j.at("pi3"), 2, 3), matrix_from_json(j.at("pi4"), 1, 3));
}

inline Json datum_to_json(const BLDatum& d) {
    return Json{{"pi1", matrix_to_json(d.pi1)},
                {"pi2", matrix_to_json(d.pi2)},
                {"pi3", matrix_to_json(d.pi3)},
                {"pi4", matrix_to_json(d.pi4)}};
}

inline EquivalenceWitness witness_from_json(const Json& j) {
    EquivalenceWitness w;
    w.a1 = matrix_from_json(j.at("a1"), 1, 1);
    w.a2 = matrix_from_json(j.at("a2"), 2, 2);
    w.a3 = matrix_from_json(j.at("a3"), 2, 2);
    w.a4 = matrix_from_json(j.at("a4"), 1, 1);
    w.b = matrix_from_json(j.at("b"), 3, 3);
    return w;
}

inline Json witness_to_json(const EquivalenceWitness& w) {
    return Json{{"a1", matrix_to_json(w.a1)},
                {"a2", matrix_to_json(w.a2)},
                {"a3", matrix_to_json(w.a3)},
                {"a4", matrix_to_json(w.a4)},
                {"b", matrix_to_json(w.b)}};
}

/// {"type": "...", ...}; see README for the full table of spec types.
inline SpecPtr spec_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "gaussian") return spec::gaussian(j.value("a", 1.0));
    if (type == "box") return spec::box(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (type == "smooth_bump") return spec::smooth_bump();
    if (type == "sign_window") return spec::sign_window(j.at("m").get<double>());
    if (type == "sign_step") return spec::sign_step();
    if (type == "linf_dilate") return spec::dilate(j.at("n").get<double>(), spec_from_json(j.at("of")));
    if (type == "scale") return spec::scale(j.at("c").get<double>(), spec_from_json(j.at("of")));
    if (type == "modulate")
        return spec::modulate(j.at("freq").get<double>(), spec_from_json(j.at("of")));
    if (type == "bandlimited_m") return spec::bandlimited_m_spec();
    if (type == "sum" || type == "product") {
        std::vector<SpecPtr> parts;
        for (const auto& p : j.at(type == "sum" ? "terms" : "factors"))
            parts.push_back(spec_from_json(p));
        return type == "sum" ? spec::sum(std::move(parts)) : spec::product(std::move(parts));
    }
    if (type == "tensor")
        return spec::tensor(spec_from_json(j.at("fx")), spec_from_json(j.at("fy")));
    if (type == "pullback") {
        const Json& rows = j.at("matrix");
        int r = static_cast<int>(rows.size());
        int c = static_cast<int>(rows.at(0).size());
        std::vector<double> entries;
        for (const auto& row : rows)
            for (const auto& e : row) entries.push_back(e.get<double>());
        return spec::pullback(r, c, std::move(entries), spec_from_json(j.at("of")));
    }
    if (type == "sqrt_split")
        return spec::sqrt_split(spec_from_json(j.at("g")),
                                j.value("sign", std::string("plus")) == "signed");
    throw std::invalid_argument("unknown function spec type '" + type + "'");
}

inline QuadConfig quad_config_from_json(const Json& j) {
    QuadConfig cfg;
    cfg.t_eps = j.value("t_eps", cfg.t_eps);
    cfg.t_max = j.value("t_max", cfg.t_max);
    cfg.t_panels = j.value("t_panels", cfg.t_panels);
    cfg.xy_box = j.value("xy_box", cfg.xy_box);
    cfg.xy_points = j.value("xy_points", cfg.xy_points);
    cfg.refine = j.value("refine", cfg.refine);
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    cfg.t_uniform_points = j.value("t_uniform_points", cfg.t_uniform_points);
    cfg.t_uniform_box = j.value("t_uniform_box", cfg.t_uniform_box);
    cfg.check();
    return cfg;
}

inline PiecewisePhase phase_from_json(const Json& j) {
    PiecewisePhase phase;
    for (const auto& p : j)
        phase.pieces.push_back(
            {p.at("lo").get<double>(), p.at("hi").get<double>(), p.at("freq").get<double>()});
    return phase;
}

} // namespace blform
