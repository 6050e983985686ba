#include "fifonc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fifonc/heuristic.hpp"
#include "fifonc/minplus.hpp"
#include "fifonc/timing.hpp"

namespace fifonc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform draw on [lo, hi] quantized to 1e-6. Built from raw engine output so
// the sequence does not depend on the standard library's distributions.
double draw(std::mt19937_64& rng, Range r) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double x = r.lo + u * (r.hi - r.lo);
    return std::clamp(std::round(x * 1e6) / 1e6, r.lo, r.hi);
}

void check_range(Range r, const char* name) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo < 0.0 || r.lo > r.hi) {
        throw ArgumentError(std::string("ScenarioConfig: invalid range ") + name);
    }
}

struct FlowDraw {
    Data burst;
    Rate sustained;
    Time first_breakpoint;
};

FlowDraw draw_flow(std::mt19937_64& rng, const ScenarioConfig& cfg) {
    FlowDraw f{};
    f.burst = draw(rng, cfg.packet_size);
    f.sustained = draw(rng, cfg.sustained_rate);
    f.first_breakpoint = draw(rng, cfg.first_breakpoint);
    return f;
}

// Token buckets with the given rates, continuous at the given breakpoints.
ConcaveCurve chained(Data first_burst, const std::vector<Rate>& rates, const std::vector<Time>& bps) {
    std::vector<TokenBucket> segs{{rates[0], first_burst}};
    for (std::size_t i = 1; i < rates.size(); ++i) {
        const Data b = segs.back().burst - (rates[i] - rates[i - 1]) * bps[i - 1];
        segs.push_back({rates[i], b});
    }
    return ConcaveCurve::normalize(std::move(segs));
}

}  // namespace

void ScenarioConfig::validate() const {
    if (n_cross < 0) throw ArgumentError("ScenarioConfig: n_cross must be >= 0");
    if (foi_segments != 2 && foi_segments != 4) throw ArgumentError("ScenarioConfig: foi_segments must be 2 or 4");
    check_range(packet_size, "packet_size");
    check_range(sustained_rate, "sustained_rate");
    check_range(first_breakpoint, "first_breakpoint");
    check_range(foi_spacing, "foi_spacing");
    if (sustained_rate.lo <= 0.0 || first_breakpoint.lo <= 0.0 || foi_spacing.lo <= 0.0) {
        throw ArgumentError("ScenarioConfig: rates and breakpoint distances must be positive");
    }
    if (!(peak_multiplier > mid_multipliers[0] && mid_multipliers[0] > mid_multipliers[1] && mid_multipliers[1] > 1.0)) {
        throw ArgumentError("ScenarioConfig: multipliers must satisfy peak > mid1 > mid2 > 1");
    }
    if (!(utilization > 0.0 && utilization < 1.0)) throw ArgumentError("ScenarioConfig: utilization must be in (0, 1)");
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t iteration, std::uint64_t flow) {
    return splitmix64(splitmix64(splitmix64(master) ^ iteration) ^ flow);
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario sc;
    sc.seed = cfg.seed;
    sc.iteration = cfg.iteration;

    std::mt19937_64 foi_rng(stream_seed(cfg.seed, cfg.iteration, 0));
    const FlowDraw f = draw_flow(foi_rng, cfg);
    Rate total = f.sustained;
    if (cfg.foi_segments == 2) {
        sc.foi = chained(f.burst, {cfg.peak_multiplier * f.sustained, f.sustained}, {f.first_breakpoint});
    } else {
        const Time spacing = draw(foi_rng, cfg.foi_spacing);
        const Rate r = f.sustained;
        sc.foi = chained(f.burst,
                         {cfg.peak_multiplier * r, cfg.mid_multipliers[0] * r, cfg.mid_multipliers[1] * r, r},
                         {f.first_breakpoint, f.first_breakpoint + spacing, f.first_breakpoint + 2 * spacing});
    }

    for (int k = 1; k <= cfg.n_cross; ++k) {
        std::mt19937_64 rng(stream_seed(cfg.seed, cfg.iteration, static_cast<std::uint64_t>(k)));
        const FlowDraw c = draw_flow(rng, cfg);
        total += c.sustained;
        sc.cross_flows.push_back(chained(c.burst, {cfg.peak_multiplier * c.sustained, c.sustained}, {c.first_breakpoint}));
    }

    const Rate R = total / cfg.utilization;
    sc.beta = ConvexCurve::rate_latency(R, 1.0 / R);
    return sc;
}

Time theta_disco(const ResidualInput& in, const std::vector<Data>& cross_first_bursts) {
    for (Data b : cross_first_bursts) {
        if (!(b >= 0.0)) throw ArgumentError("theta_disco: bursts must be >= 0");
    }
    const Data sum = std::accumulate(cross_first_bursts.begin(), cross_first_bursts.end(), 0.0);
    return in.beta().pseudo_inverse(sum);
}

SolveResult solve_disco(const ResidualInput& in, const std::vector<Data>& cross_first_bursts) {
    CpuStopwatch watch;
    SolveResult res;
    res.method = Method::disco;
    res.h_lower = in.h_lower();
    res.theta = theta_disco(in, cross_first_bursts);
    res.backlog = backlog_bound(in, res.theta);
    res.cpu_time_us = watch.elapsed_us();
    return res;
}

SolveResult solve_disco(const Scenario& sc) {
    std::vector<Data> bursts;
    for (const auto& c : sc.cross_flows) bursts.push_back(c.burst());
    return solve_disco(sc.input(), bursts);
}

Data aggregate_backlog(const Scenario& sc) {
    std::vector<ConcaveCurve> all{sc.foi};
    all.insert(all.end(), sc.cross_flows.begin(), sc.cross_flows.end());
    const ConcaveCurve total = sum_concave(all);
    const Data q = vertical_deviation(total, sc.beta);
    if (!std::isfinite(q)) throw InstabilityError("aggregate_backlog: unbounded");
    return q;
}

std::vector<Data> per_flow_bounds(const Scenario& sc, Method method) {
    std::vector<ConcaveCurve> flows{sc.foi};
    flows.insert(flows.end(), sc.cross_flows.begin(), sc.cross_flows.end());
    std::vector<Data> out;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        Scenario view;
        view.foi = flows[i];
        view.beta = sc.beta;
        for (std::size_t j = 0; j < flows.size(); ++j) {
            if (j != i) view.cross_flows.push_back(flows[j]);
        }
        switch (method) {
            case Method::exact: out.push_back(exact_theta_opt(view.input()).backlog); break;
            case Method::heuristic: out.push_back(heuristic_theta_opt(view.input()).first.backlog); break;
            case Method::disco: out.push_back(solve_disco(view).backlog); break;
        }
    }
    return out;
}

double segregation_penalty(const std::vector<Data>& per_flow, Data q_agg) {
    if (!(q_agg > 0.0)) throw ArgumentError("segregation_penalty: q_agg must be > 0");
    const Data sum = std::accumulate(per_flow.begin(), per_flow.end(), 0.0);
    return (sum - q_agg) / q_agg * 100.0;
}

}  // namespace fifonc
