#pragma once

// JSON forms of estimates and reports. Rationals are "p/q" strings, logs are
// decimal strings, and every value carries a mode tag.

#include <string>

#include "json.hpp"
#include "meanlab/classify.hpp"
#include "meanlab/correspondence.hpp"
#include "meanlab/density.hpp"
#include "meanlab/dsl.hpp"
#include "meanlab/entropy.hpp"
#include "meanlab/independence.hpp"
#include "meanlab/meanmetric.hpp"

namespace meanlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kLogDigits = 12;

inline Json rat(const Rational& r) { return to_string(r); }
inline Json dec(long double v) { return decimal(v, kLogDigits); }

inline Json to_json(const GroupElem& g) {
    Json a = Json::array();
    for (int i = 0; i < g.dim(); ++i) a.push_back(g[i]);
    return g.dim() == 1 ? Json(g[0]) : a;
}

inline Json to_json(const Window& w) {
    Json a = Json::array();
    for (const auto& g : w) a.push_back(to_json(g));
    return a;
}

inline Json to_json(const CylinderSet& c) {
    Json s = Json::array();
    for (auto v : c.symbols) s.push_back(v);
    return {{"window", to_json(c.window)}, {"symbols", s}};
}

inline std::string mode_tag(DensityMethod m) {
    switch (m) {
        case DensityMethod::ExactPeriodic: return "exact";
        case DensityMethod::Windowed: return "bounded";
        case DensityMethod::Empirical: return "empirical";
    }
    return "empirical";
}

inline Json to_json(const DensityEstimate& e) {
    return {{"lower", rat(e.lower)},
            {"upper", rat(e.upper)},
            {"mode", mode_tag(e.method)},
            {"method", to_string(e.method)},
            {"params", {{"nMax", e.params.n_max}, {"radius", e.params.radius}}},
            {"witness", {{"windowSide", e.witness_len}, {"shift", to_json(e.witness_shift)}}}};
}

inline Json to_json(const AsymptoticDensity& a) {
    Json rows = Json::array();
    for (const auto& r : a.ratios)
        rows.push_back({{"n", r.n}, {"size", r.size}, {"hits", r.hits}, {"ratio", rat(r.ratio)}, {"mode", "exact"}});
    return {{"ratios", rows}, {"limsup", to_json(a.upper)}, {"liminf", to_json(a.lower)}, {"limitExact", a.limit_exact}};
}

inline Json to_json(const MeanDistanceEstimate& e) {
    return {{"lower", rat(e.lower)},
            {"upper", rat(e.upper)},
            {"mode", e.mode == MeanMode::Windowed ? "bounded" : "exact"},
            {"method", to_string(e.mode)},
            {"params", {{"nMax", e.params.n_max}, {"radius", e.params.radius}, {"K", e.params.k}}},
            {"evidence",
             {{"infWindow", e.evidence.inf_window},
              {"supShift", to_json(e.evidence.sup_shift)},
              {"lowerWindow", e.evidence.lower_window},
              {"lowerShift", to_json(e.evidence.lower_shift)},
              {"note", e.evidence.note}}}};
}

inline Json to_json(const PointReport& r) {
    Json levels = Json::array();
    for (const auto& l : r.levels)
        levels.push_back({{"delta", "2^-" + std::to_string(l.delta_exponent)},
                          {"samples", l.samples},
                          {"maxLower", rat(l.max_lower)},
                          {"maxUpper", rat(l.max_upper)},
                          {"witness", l.witness},
                          {"mode", l.exact ? "exact" : "bounded"}});
    Json eps = Json::array();
    for (const auto& e : r.eps)
        eps.push_back({{"eps", rat(e.eps)},
                       {"delta", e.delta_exponent ? Json("2^-" + std::to_string(*e.delta_exponent)) : Json(nullptr)}});
    return {{"point", r.point},
            {"verdict", to_string(r.verdict)},
            {"mode", r.exact ? "exact" : (r.certified ? "bounded" : "empirical")},
            {"delta0", r.delta0 ? rat(*r.delta0) : Json(nullptr)},
            {"levels", levels},
            {"eps", eps}};
}

inline Json to_json(const SystemReport& r) {
    Json pts = Json::array();
    for (const auto& p : r.points) pts.push_back(to_json(p));
    return {{"system", r.system}, {"verdict", to_string(r.verdict)}, {"mode", r.grade}, {"points", pts}};
}

inline Json to_json(const IndependenceResult& r) {
    return {{"window", to_json(r.f)},
            {"J", to_json(r.best_j)},
            {"phi", r.phi},
            {"phiUpper", r.phi_upper},
            {"mode", r.exact ? "exact" : "bounded"}};
}

inline Json to_json(const DensityInterval& d) {
    Json w = Json::array();
    for (const auto& r : d.windows) w.push_back(to_json(r));
    return {{"densityLower", rat(d.lower)},
            {"densityUpper", rat(d.upper)},
            {"mode", d.lower == d.upper ? "exact" : "bounded"},
            {"certificate", d.certificate},
            {"windows", w}};
}

inline Json to_json(const IESearch& s) {
    Json tried = Json::array();
    for (const auto& [label, d] : s.tried)
        tried.push_back({{"pair", label}, {"densityLower", rat(d.lower)}, {"densityUpper", rat(d.upper)},
                         {"certificate", d.certificate}});
    Json w = nullptr;
    if (s.witness) {
        Json cyl = Json::array();
        for (const auto& c : s.witness->cylinders) cyl.push_back(to_json(c));
        w = {{"points", {s.witness->first_point, s.witness->second_point}},
             {"cylinders", cyl},
             {"J", to_json(s.witness->best_j)},
             {"phi", s.witness->density.windows.back().phi},
             {"window", to_json(s.witness->window)},
             {"densityLower", rat(s.witness->density.lower)},
             {"densityUpper", rat(s.witness->density.upper)},
             {"certificate", s.witness->density.certificate}};
    }
    return {{"witness", w}, {"scale", s.scale}, {"tried", tried}};
}

inline Json to_json(const EntropyEstimate& e) {
    Json rows = Json::array();
    for (const auto& r : e.rows)
        rows.push_back({{"n", r.n}, {"size", r.size}, {"count", r.count.str()}, {"value", dec(r.value)}, {"mode", "exact"}});
    const long double ln2 = std::log(2.0L);
    Json claim = {{"kind", to_string(e.kind)},
                  {"lower", dec(e.lo)},
                  {"upper", dec(e.hi)},
                  {"lowerLog2", dec(e.lo / ln2)},
                  {"upperLog2", dec(e.hi / ln2)},
                  {"note", e.note}};
    if (e.radius) claim["perronRoot"] = {{"lower", rat(e.radius->lo)}, {"upper", rat(e.radius->hi)}};
    return {{"rows", rows}, {"claim", claim}, {"monotone", e.monotone}};
}

inline Json to_json(const VariationalReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back({{"measure", x.measure}, {"hMu", dec(x.h_mu)}, {"mode", to_string(x.kind)}, {"ok", x.ok}});
    return {{"system", r.system},
            {"hTop", {{"lower", dec(r.h_top_lo)}, {"upper", dec(r.h_top_hi)}}},
            {"measures", rows},
            {"maxHMu", dec(r.max_h_mu)},
            {"gap", dec(r.gap)},
            {"tolerance", dec(r.tolerance)},
            {"pass", r.pass}};
}

inline Json to_json(const IntersectionWitness& w) {
    Json shifts = Json::array();
    for (const auto& s : w.shifts) shifts.push_back(to_json(s));
    return {{"shifts", shifts},
            {"density", to_json(w.density)},
            {"base", rat(w.base)},
            {"target", rat(w.target)},
            {"met", w.met},
            {"mode", w.exact ? "exact" : "bounded"}};
}

inline Json to_json(const FiniteWitness& w) {
    return {{"found", w.found},
            {"indices", w.indices},
            {"mass", rat(w.mass)},
            {"target", rat(w.target)},
            {"a", rat(w.a)},
            {"mode", "exact"},
            {"note", w.note}};
}

/// Report = {header: {version, config, seeds}, body}.
inline Json make_report(const Json& config, const Json& seeds, Json body) {
    return {{"header", {{"version", kVersion}, {"config", config}, {"seeds", seeds}}}, {"body", std::move(body)}};
}

}  // namespace meanlab
