#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "fifonc/heuristic.hpp"
#include "fifonc/io.hpp"
#include "fifonc/minplus.hpp"
#include "fifonc/oracle.hpp"
#include "fifonc/scenario.hpp"

namespace py = pybind11;
using namespace fifonc;

namespace {

std::vector<std::pair<double, double>> concave_pairs(const ConcaveCurve& c) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : c.segments()) out.emplace_back(s.rate, s.burst);
    return out;
}

std::vector<std::pair<double, double>> convex_pairs(const ConvexCurve& c) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : c.segments()) out.emplace_back(s.rate, s.latency);
    return out;
}

ConcaveCurve concave_from_pairs(const std::vector<std::pair<double, double>>& segs) {
    std::vector<TokenBucket> raw;
    for (auto [r, b] : segs) raw.push_back({r, b});
    return ConcaveCurve::normalize(std::move(raw));
}

ConvexCurve convex_from_pairs(const std::vector<std::pair<double, double>>& segs) {
    std::vector<RateLatency> raw;
    for (auto [r, t] : segs) raw.push_back({r, t});
    return ConvexCurve::normalize(std::move(raw));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Per-flow backlog bounds at an aggregate FIFO server";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_ArithmeticError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<ConcaveCurve>(m, "ConcaveCurve")
        .def(py::init(&concave_from_pairs), py::arg("segments"), "Normalize a list of (rate, burst) pairs")
        .def_static("token_bucket", &ConcaveCurve::token_bucket, py::arg("rate"), py::arg("burst"))
        .def_static("zero", &ConcaveCurve::zero)
        .def_property_readonly("segments", &concave_pairs)
        .def_property_readonly("breakpoints", [](const ConcaveCurve& c) {
            return std::vector<Time>(c.breakpoints().begin(), c.breakpoints().end());
        })
        .def_property_readonly("long_term_rate", &ConcaveCurve::long_term_rate)
        .def_property_readonly("burst", &ConcaveCurve::burst)
        .def("__call__", &ConcaveCurve::eval_at, py::arg("t"))
        .def("eval_right", &ConcaveCurve::eval_right, py::arg("t"))
        .def("pseudo_inverse", &ConcaveCurve::pseudo_inverse, py::arg("x"))
        .def("__add__", &add_concave)
        .def(py::self == py::self)
        .def("__repr__", [](const ConcaveCurve& c) { return "ConcaveCurve(" + to_json(c)["segments"].dump() + ")"; });

    py::class_<ConvexCurve>(m, "ConvexCurve")
        .def(py::init(&convex_from_pairs), py::arg("segments"), "Normalize a list of (rate, latency) pairs")
        .def_static("rate_latency", &ConvexCurve::rate_latency, py::arg("rate"), py::arg("latency"))
        .def_property_readonly("segments", &convex_pairs)
        .def_property_readonly("top_rate", &ConvexCurve::top_rate)
        .def_property_readonly("first_latency", &ConvexCurve::first_latency)
        .def("__call__", &ConvexCurve::eval, py::arg("t"))
        .def("pseudo_inverse", &ConvexCurve::pseudo_inverse, py::arg("x"))
        .def(py::self == py::self)
        .def("__repr__", [](const ConvexCurve& c) { return "ConvexCurve(" + to_json(c)["segments"].dump() + ")"; });

    m.def("horizontal_deviation", py::overload_cast<const ConcaveCurve&, const ConvexCurve&>(&horizontal_deviation));
    m.def("vertical_deviation", py::overload_cast<const ConcaveCurve&, const ConvexCurve&>(&vertical_deviation));

    py::class_<ResidualInput>(m, "ResidualInput")
        .def(py::init<ConcaveCurve, ConcaveCurve, ConvexCurve>(), py::arg("foi"), py::arg("cross"), py::arg("beta"))
        .def_static("from_flows", &ResidualInput::from_flows, py::arg("foi"), py::arg("cross_flows"), py::arg("beta"))
        .def_property_readonly("foi", &ResidualInput::foi)
        .def_property_readonly("cross", &ResidualInput::cross)
        .def_property_readonly("beta", &ResidualInput::beta)
        .def_property_readonly("h_lower", &ResidualInput::h_lower);

    m.def("backlog_bound", &backlog_bound, py::arg("input"), py::arg("theta"));

    py::class_<SolveResult>(m, "SolveResult")
        .def_property_readonly("method", [](const SolveResult& r) { return to_string(r.method); })
        .def_readonly("theta", &SolveResult::theta)
        .def_readonly("backlog", &SolveResult::backlog)
        .def_readonly("h_lower", &SolveResult::h_lower)
        .def_readonly("cpu_time_us", &SolveResult::cpu_time_us)
        .def_property_readonly("candidates", [](const SolveResult& r) {
            std::vector<std::pair<Time, Time>> out;
            for (const auto& c : r.candidates) out.emplace_back(c.source, c.theta);
            return out;
        })
        .def("__repr__", [](const SolveResult& r) { return "SolveResult(" + to_json(r).dump() + ")"; });

    m.def("exact_theta_opt", &exact_theta_opt, py::arg("input"));
    m.def(
        "heuristic_theta_opt", [](const ResidualInput& in) { return heuristic_theta_opt(in).first; }, py::arg("input"));
    m.def(
        "heuristic_trace", [](const ResidualInput& in) { return to_json(heuristic_theta_opt(in).second).dump(); },
        py::arg("input"), "Heuristic trace as a JSON string");

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("foi", &Scenario::foi)
        .def_readonly("cross_flows", &Scenario::cross_flows)
        .def_readonly("beta", &Scenario::beta)
        .def_readonly("seed", &Scenario::seed)
        .def_readonly("iteration", &Scenario::iteration)
        .def("input", &Scenario::input)
        .def("to_json", [](const Scenario& sc) { return to_json(sc).dump(); })
        .def_static("from_json", [](const std::string& s) {
            try {
                return scenario_from_json(json::parse(s));
            } catch (const json::parse_error& e) {
                throw ParseError(e.what());
            }
        });

    m.def(
        "generate_scenario",
        [](int n_cross, int foi_segments, std::uint64_t seed, std::uint64_t iteration) {
            ScenarioConfig cfg;
            cfg.n_cross = n_cross;
            cfg.foi_segments = foi_segments;
            cfg.seed = seed;
            cfg.iteration = iteration;
            return generate_scenario(cfg);
        },
        py::arg("n_cross"), py::arg("foi_segments") = 2, py::arg("seed") = 1, py::arg("iteration") = 0);
    m.def("solve_disco", py::overload_cast<const Scenario&>(&solve_disco), py::arg("scenario"));
    m.def("theta_disco", &theta_disco, py::arg("input"), py::arg("cross_first_bursts"));
    m.def("aggregate_backlog", &aggregate_backlog, py::arg("scenario"));
    m.def("segregation_penalty", &segregation_penalty, py::arg("per_flow"), py::arg("q_agg"));
    m.def(
        "oracle_search",
        [](const ResidualInput& in, Time theta_step, double t_horizon_factor, Time t_step) {
            const auto r = oracle_search(in, {theta_step, t_horizon_factor, t_step});
            return std::make_pair(r.best_theta, r.best_backlog);
        },
        py::arg("input"), py::arg("theta_step") = 1e-3, py::arg("t_horizon_factor") = 2.0, py::arg("t_step") = 1e-3);
}
