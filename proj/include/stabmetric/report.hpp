#pragma once

// JSON encodings of the domain types and certificates.

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stabmetric/dynamics.hpp"
#include "stabmetric/lin2.hpp"
#include "stabmetric/metriclab.hpp"
#include "stabmetric/quotient.hpp"
#include "stabmetric/stabmodel.hpp"

namespace stabmetric {

using json = nlohmann::json;

/// %.17g, enough digits to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline double number(const json& j) {
    if (!j.is_number()) throw InvalidInput("expected a number, got " + j.dump());
    return j.get<double>();
}

inline std::int64_t integer(const json& j) {
    if (!j.is_number_integer()) throw InvalidInput("expected an integer, got " + j.dump());
    return j.get<std::int64_t>();
}

template <std::size_t N>
std::array<double, N> number_array(const json& j) {
    if (!j.is_array() || j.size() != N)
        throw InvalidInput("expected an array of " + std::to_string(N) + " numbers, got " + j.dump());
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i]);
    return out;
}

inline const json& matrix_rows(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
        j[1].size() != 2)
        throw InvalidInput("expected a 2x2 matrix [[a,b],[c,d]], got " + j.dump());
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------- lin2

inline json to_json(const Mat2& m) { return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})}); }

inline Mat2 mat2_from_json(const json& j) {
    const json& r = detail::matrix_rows(j);
    return {detail::number(r[0][0]), detail::number(r[0][1]), detail::number(r[1][0]), detail::number(r[1][1])};
}

inline json to_json(const CoveredMap& g) { return {{"matrix", to_json(g.matrix)}, {"lift_index", g.lift_index}}; }

inline CoveredMap covered_map_from_json(const json& j) {
    const Mat2 m = mat2_from_json(detail::require(j, "matrix"));
    const std::int64_t k = j.contains("lift_index") ? detail::integer(j.at("lift_index")) : 0;
    return {m, k};
}

// ---------------------------------------------------------------- stabmodel

inline json to_json(const KroneckerPoint& p) { return {{"x", p.x}, {"l", p.l}}; }

inline KroneckerPoint kronecker_from_json(const json& j) {
    const R4 x = detail::number_array<4>(detail::require(j, "x"));
    const int l = j.contains("l") ? static_cast<int>(detail::integer(j.at("l"))) : 3;
    KroneckerPoint p(x, l);
    p.validate();
    return p;
}

inline json to_json(const ObjectClass& c) { return {{"k", json::array({c.k1, c.k2})}, {"shift", c.shift}}; }

inline ObjectClass object_class_from_json(const json& j) {
    const json& k = detail::require(j, "k");
    if (!k.is_array() || k.size() != 2) throw InvalidInput("\"k\" must be [k1, k2]");
    const auto k1 = detail::integer(k[0]), k2 = detail::integer(k[1]);
    if (k1 < 0 || k2 < 0) throw InvalidClass("multiplicities must be nonnegative");
    ObjectClass c{static_cast<std::uint64_t>(k1), static_cast<std::uint64_t>(k2),
                  j.contains("shift") ? detail::integer(j.at("shift")) : 0};
    c.validate();
    return c;
}

inline json to_json(const HNProfile& h) {
    json factors = json::array();
    for (const auto& f : h.factors)
        factors.push_back({{"class", to_json(f.cls)}, {"phase", f.phase}, {"mass_term", f.mass_term}});
    return {{"factors", factors},  {"mass", h.mass},
            {"phi_plus", h.phi_plus}, {"phi_minus", h.phi_minus},
            {"semistable", h.semistable()}};
}

// ---------------------------------------------------------------- quotient

inline json to_json(const QuotPoint& q) { return {{"rep", q.rep()}}; }

/// Accepts {"rep": [...]} (any representative, canonicalized) or a bare 4-array.
inline QuotPoint quot_point_from_json(const json& j) {
    if (j.is_array()) return QuotPoint(detail::number_array<4>(j));
    return QuotPoint(detail::number_array<4>(detail::require(j, "rep")));
}

inline R4 r4_from_json(const json& j) {
    if (j.is_object()) return detail::number_array<4>(detail::require(j, "x"));
    return detail::number_array<4>(j);
}

inline SolverParams solver_params_from_json(const json& j) {
    SolverParams p;
    if (j.contains("grid")) p.grid = static_cast<int>(detail::integer(j.at("grid")));
    if (j.contains("tol")) p.tol = detail::number(j.at("tol"));
    if (j.contains("max_iter")) p.max_iter = static_cast<int>(detail::integer(j.at("max_iter")));
    return p;
}

inline json to_json(const SolverParams& p) { return {{"grid", p.grid}, {"tol", p.tol}, {"max_iter", p.max_iter}}; }

// ---------------------------------------------------------------- dynamics

inline json to_json(const Autoeq& f) {
    return {{"A", json::array({json::array({f.a, f.b}), json::array({f.c, f.d})})}};
}

inline Autoeq autoeq_from_json(const json& j) {
    const json& r = detail::matrix_rows(j.is_object() ? detail::require(j, "A") : j);
    return {detail::integer(r[0][0]), detail::integer(r[0][1]), detail::integer(r[1][0]), detail::integer(r[1][1])};
}

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    const auto v = detail::number_array<2>(j);
    return {v[0], v[1]};
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

/// Classification report with provenance notes.
inline json pa_report(const Autoeq& f) {
    const PaClassification c = pa_classify(f);
    const PoincareTranslation p = poincare_translation_length(f);
    json out = to_json(f);
    out["classification"] = c.pseudo_anosov ? "PseudoAnosov" : "NotPseudoAnosov";
    out["type"] = to_string(c.type);
    out["trace"] = c.trace;
    out["reason"] = c.reason;
    if (c.pseudo_anosov) {
        out["rho"] = stretch_factor(f);
        out["log_rho"] = translation_length(f);
    } else {
        out["rho"] = nullptr;
        out["log_rho"] = nullptr;
    }
    out["poincare_translation_length"] = p.length;
    out["entropy"] = entropy_value(f);
    out["notes"] = json::array({"entropy is the closed-form value, not computed from generator towers",
                                 "translation length is on the C-quotient of the stability space"});
    return out;
}

inline json to_json(const CurveSummary& s) {
    json out{{"genus", s.genus}, {"pseudo_anosov_possible", s.pseudo_anosov_possible}, {"note", s.note}};
    if (s.classification) {
        out["classification"] = s.classification->pseudo_anosov ? "PseudoAnosov" : "NotPseudoAnosov";
        out["trace"] = s.classification->trace;
    }
    if (s.stretch) out["rho"] = *s.stretch;
    if (s.translation) out["translation_length"] = *s.translation;
    if (s.entropy) out["entropy"] = *s.entropy;
    return out;
}

// ---------------------------------------------------------------- certificates

template <class Point>
json to_json(const SpaceHandle<Point>& space, const TriangleCertificate<Point>& c) {
    json vertices = json::array(), witnesses = json::array(), params = json::array();
    for (const auto& v : c.vertices) vertices.push_back(space.coords(v));
    for (const auto& w : c.witnesses) witnesses.push_back(space.coords(w));
    for (const auto& p : c.witness_params) params.push_back({{"side", p.side}, {"t", p.t}});
    return {{"kind", to_string(c.kind)}, {"space", space.name},   {"vertices", vertices},
            {"witnesses", witnesses},   {"witness_params", params}, {"margin", c.margin},
            {"parameter", c.parameter}, {"seed", c.seed},         {"resolution", c.resolution}};
}

inline json to_json(const Rejection& r) { return {{"reject", to_string(r.reason)}, {"value", r.value}}; }

}  // namespace stabmetric
