#include "fifonc/exact.hpp"

#include <algorithm>
#include <cmath>

#include "fifonc/timing.hpp"

namespace fifonc {

std::string to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::heuristic: return "heuristic";
        case Method::disco: return "disco";
    }
    return "unknown";
}

Method method_from_string(const std::string& name) {
    if (name == "exact") return Method::exact;
    if (name == "heuristic") return Method::heuristic;
    if (name == "disco") return Method::disco;
    throw ArgumentError("unknown method '" + name + "'");
}

std::optional<Time> intersect_vt_with_alpha1(const ResidualInput& in, Time t_abs) {
    const Time h = in.h_lower();
    if (t_abs <= h + kEps) return std::nullopt;
    const auto& foi = in.foi();
    const auto& cross = in.cross();
    const Data base = foi.eval_right(t_abs) - in.beta().eval(t_abs);

    std::vector<Time> grid{h};
    for (Time a : foi.breakpoints()) {
        if (a > h && a < t_abs) grid.push_back(a);
    }
    for (Time a : cross.breakpoints()) {
        const Time x = t_abs - a;
        if (x > h && x < t_abs) grid.push_back(x);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // foi(θ) - v_t(θ): non-decreasing, linear between grid points.
    auto diff = [&](Time th) { return foi.eval_right(th) - base - cross.eval_right(t_abs - th); };

    Data prev = diff(h);
    if (prev > kEps) return std::nullopt;
    if (prev >= -kEps) return h;
    for (std::size_t k = 1; k <= grid.size(); ++k) {
        const bool end = k == grid.size();
        const Time x = end ? t_abs : grid[k];
        // At θ -> t from the left the cross term tends to its burst.
        const Data cur = end ? foi.eval_right(t_abs) - base - cross.burst() : diff(x);
        if (cur >= 0.0) {
            const Time x0 = grid[k - 1];
            return cur == prev ? x : x0 + (0.0 - prev) * (x - x0) / (cur - prev);
        }
        prev = cur;
    }
    // v_t stays above foi on the whole of [h, t); it drops to foi at t.
    return t_abs;
}

SolveResult exact_theta_opt(const ResidualInput& in) {
    CpuStopwatch watch;
    SolveResult res;
    res.method = Method::exact;
    res.h_lower = in.h_lower();

    const TimeSets ts = build_time_sets(in);
    for (std::size_t i = 0; i < ts.T_rel.size(); ++i) {
        res.candidates.push_back({ts.T_rel[i], ts.theta_rel[i]});
    }
    for (Time t : ts.T) {
        if (auto theta = intersect_vt_with_alpha1(in, t)) res.candidates.push_back({t, *theta});
    }

    Time phi = res.h_lower;
    for (const auto& c : res.candidates) phi = std::max(phi, c.theta);
    res.theta = phi;
    res.backlog = backlog_bound(in, phi);
    res.cpu_time_us = watch.elapsed_us();
    return res;
}

}  // namespace fifonc
