#include "fifonc/io.hpp"

#include <cmath>
#include <fstream>

namespace fifonc {

namespace {

// JSON has no infinity; it is written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + "." + key + ": missing");
    return *it;
}

double real(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

const json& segments(const json& j, const char* type, const std::string& where) {
    const json& t = field(j, "type", where);
    if (!t.is_string() || t.get<std::string>() != type) {
        throw ParseError(where + ".type: expected \"" + std::string(type) + "\"");
    }
    const json& segs = field(j, "segments", where);
    if (!segs.is_array() || segs.empty()) throw ParseError(where + ".segments: expected a non-empty array");
    return segs;
}

}  // namespace

json to_json(const ConcaveCurve& c) {
    json segs = json::array();
    for (const auto& s : c.segments()) segs.push_back({{"rate", s.rate}, {"burst", s.burst}});
    return {{"type", "concave"}, {"segments", segs}};
}

json to_json(const ConvexCurve& c) {
    json segs = json::array();
    for (const auto& s : c.segments()) segs.push_back({{"rate", s.rate}, {"latency", s.latency}});
    return {{"type", "convex"}, {"segments", segs}};
}

json to_json(const Scenario& sc) {
    json cross = json::array();
    for (const auto& c : sc.cross_flows) cross.push_back(to_json(c));
    return {{"seed", sc.seed}, {"iteration", sc.iteration}, {"foi", to_json(sc.foi)}, {"cross", cross},
            {"beta", to_json(sc.beta)}};
}

json to_json(const SolveResult& r) {
    json cands = json::array();
    for (const auto& c : r.candidates) cands.push_back({{"t", number(c.source)}, {"theta", number(c.theta)}});
    return {{"method", to_string(r.method)}, {"theta", number(r.theta)}, {"backlog", number(r.backlog)},
            {"h_lower", number(r.h_lower)}, {"candidates", cands}, {"cpu_time_us", r.cpu_time_us}};
}

json to_json(const HeuristicTrace& t) {
    json theta = json::array();
    json adj = json::array();
    json diff = json::array();
    for (double v : t.theta_vec) theta.push_back(number(v));
    for (const auto& a : t.theta_adj) adj.push_back({{"value", number(a.value)}, {"open", a.open}});
    for (double v : t.diff) diff.push_back(number(v));
    return {{"theta_vec", theta},
            {"theta_adj", adj},
            {"diff", diff},
            {"matched_index", t.matched_index ? json(*t.matched_index) : json(nullptr)},
            {"fallback_used", t.fallback_used}};
}

ConcaveCurve concave_from_json(const json& j, const std::string& where) {
    const json& segs = segments(j, "concave", where);
    std::vector<TokenBucket> raw;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string at = where + ".segments[" + std::to_string(i) + "]";
        raw.push_back({real(segs[i], "rate", at), real(segs[i], "burst", at)});
    }
    try {
        return ConcaveCurve::normalize(std::move(raw));
    } catch (const ArgumentError& e) {
        throw ParseError(where + ".segments: " + e.what());
    }
}

ConvexCurve convex_from_json(const json& j, const std::string& where) {
    const json& segs = segments(j, "convex", where);
    std::vector<RateLatency> raw;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string at = where + ".segments[" + std::to_string(i) + "]";
        raw.push_back({real(segs[i], "rate", at), real(segs[i], "latency", at)});
    }
    try {
        return ConvexCurve::normalize(std::move(raw));
    } catch (const ArgumentError& e) {
        throw ParseError(where + ".segments: " + e.what());
    }
}

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    if (!j.is_object()) throw ParseError("scenario: expected an object");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ParseError("seed: expected a non-negative integer");
        sc.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("iteration")) {
        if (!j["iteration"].is_number_unsigned()) throw ParseError("iteration: expected a non-negative integer");
        sc.iteration = j["iteration"].get<std::uint64_t>();
    }
    sc.foi = concave_from_json(field(j, "foi", "scenario"), "foi");
    const json& cross = field(j, "cross", "scenario");
    if (!cross.is_array()) throw ParseError("cross: expected an array");
    for (std::size_t i = 0; i < cross.size(); ++i) {
        sc.cross_flows.push_back(concave_from_json(cross[i], "cross[" + std::to_string(i) + "]"));
    }
    sc.beta = convex_from_json(field(j, "beta", "scenario"), "beta");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path + ": cannot open");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error(path + ": cannot write");
    f << to_json(sc).dump(2) << '\n';
}

}  // namespace fifonc
