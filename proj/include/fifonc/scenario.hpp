#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fifonc/exact.hpp"

namespace fifonc {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct ScenarioConfig {
    int n_cross = 2;
    int foi_segments = 2;
    std::uint64_t seed = 1;
    std::uint64_t iteration = 0;
    Range packet_size{0.001, 0.05};
    Range sustained_rate{1.0, 10.0};
    Range first_breakpoint{0.050, 0.500};
    Range foi_spacing{0.100, 0.500};
    double peak_multiplier = 8.0;
    std::array<double, 2> mid_multipliers{6.0, 3.0};
    double utilization = 0.8;

    // Throws ArgumentError on an invalid field.
    void validate() const;
};

struct Scenario {
    ConcaveCurve foi = ConcaveCurve::zero();
    std::vector<ConcaveCurve> cross_flows;
    ConvexCurve beta = ConvexCurve::rate_latency(1.0, 0.0);
    std::uint64_t seed = 0;
    std::uint64_t iteration = 0;

    [[nodiscard]] ResidualInput input() const { return ResidualInput::from_flows(foi, cross_flows, beta); }
};

// Seed of the random stream for one flow of one iteration. Flow 0 is the foi,
// cross flows are numbered from 1, so they are shared across n_cross.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t iteration, std::uint64_t flow);

Scenario generate_scenario(const ScenarioConfig& cfg);

// Pseudo-inverse of beta at the summed first-segment bursts.
Time theta_disco(const ResidualInput& in, const std::vector<Data>& cross_first_bursts);
SolveResult solve_disco(const ResidualInput& in, const std::vector<Data>& cross_first_bursts);
SolveResult solve_disco(const Scenario& sc);

// v(foi + all cross flows, beta).
Data aggregate_backlog(const Scenario& sc);

// Bound of every flow when it is treated as the flow of interest and all
// other flows as cross traffic. Order: foi first, then the cross flows.
std::vector<Data> per_flow_bounds(const Scenario& sc, Method method);

// (sum - q_agg) / q_agg * 100. Throws ArgumentError for q_agg <= 0.
double segregation_penalty(const std::vector<Data>& per_flow, Data q_agg);

}  // namespace fifonc
