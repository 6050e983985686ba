#pragma once

#include <string>

#include "json.hpp"
#include "fifonc/exact.hpp"
#include "fifonc/heuristic.hpp"
#include "fifonc/scenario.hpp"

namespace fifonc {

using json = nlohmann::json;

json to_json(const ConcaveCurve& c);
json to_json(const ConvexCurve& c);
json to_json(const Scenario& sc);
json to_json(const SolveResult& r);
json to_json(const HeuristicTrace& t);

ConcaveCurve concave_from_json(const json& j, const std::string& where = "curve");
ConvexCurve convex_from_json(const json& j, const std::string& where = "curve");
Scenario scenario_from_json(const json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

}  // namespace fifonc
