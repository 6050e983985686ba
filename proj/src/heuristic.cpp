#include "fifonc/heuristic.hpp"

#include <algorithm>
#include <cmath>

#include "fifonc/minplus.hpp"
#include "fifonc/timing.hpp"

namespace fifonc {

Time segment_theta(const TokenBucket& segment, const ConcaveCurve& cross, const ConvexCurve& beta) {
    if (cross.long_term_rate() + segment.rate >= beta.top_rate() - kEps) return kInf;
    return horizontal_deviation(cross, segment.rate, beta);
}

AdjustedTheta adjust_theta(Time theta, Time lo, Time hi) {
    if (!(lo < hi)) {
        throw ArgumentError("adjust_theta: empty interval");
    }
    if (theta < lo) return {lo, false};
    if (theta >= hi) return {hi, true};
    return {theta, false};
}

std::pair<SolveResult, HeuristicTrace> heuristic_theta_opt(const ResidualInput& in) {
    CpuStopwatch watch;
    SolveResult res;
    res.method = Method::heuristic;
    res.h_lower = in.h_lower();
    HeuristicTrace trace;

    const auto segs = in.foi().segments();
    const auto bps = in.foi().breakpoints();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Time lo = i == 0 ? 0.0 : bps[i - 1];
        const Time hi = i + 1 == segs.size() ? kInf : bps[i];
        const Time theta = segment_theta(segs[i], in.cross(), in.beta());
        const AdjustedTheta adj = adjust_theta(theta, lo, hi);
        trace.theta_vec.push_back(theta);
        trace.theta_adj.push_back(adj);
        trace.diff.push_back(std::isinf(theta) ? kInf : theta - adj.value);
        if (!adj.open && std::abs(theta - adj.value) <= kEps && !trace.matched_index) {
            trace.matched_index = i;
        }
    }

    if (trace.matched_index) {
        const std::size_t i = *trace.matched_index;
        res.theta = trace.theta_vec[i];
        res.candidates.push_back({trace.theta_adj[i].value, res.theta});
    } else {
        trace.fallback_used = true;
        Time phi = res.h_lower;
        for (Time t : in.foi().breakpoint_set()) {
            if (auto theta = intersect_vt_with_alpha1(in, t)) {
                res.candidates.push_back({t, *theta});
                phi = std::max(phi, *theta);
            }
        }
        res.theta = phi;
    }
    res.backlog = backlog_bound(in, res.theta);
    res.cpu_time_us = watch.elapsed_us();
    return {std::move(res), std::move(trace)};
}

}  // namespace fifonc
