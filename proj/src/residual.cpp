#include "fifonc/residual.hpp"

#include <algorithm>
#include <cmath>

#include "fifonc/minplus.hpp"

namespace fifonc {

namespace {

void sort_unique(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) <= kEps; }),
             xs.end());
}

// Appends a piece, replacing the previous one when the start does not advance.
void push_piece(std::vector<PiecewiseCurve::Piece>& out, PiecewiseCurve::Piece p) {
    if (!out.empty() && !(p.start > out.back().start)) {
        out.back() = p;
        return;
    }
    out.push_back(p);
}

// Smallest x in [grid.front(), inf) with g(x) >= target, for a non-decreasing
// g that is linear between consecutive grid points and beyond the last one.
template <class G, class Slope>
Time first_reach(const std::vector<Time>& grid, Data target, G&& g, Slope&& tail_slope) {
    Data prev = g(grid.front());
    if (prev >= target) return grid.front();
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const Data cur = g(grid[k]);
        if (cur >= target) {
            return grid[k - 1] + (target - prev) * (grid[k] - grid[k - 1]) / (cur - prev);
        }
        prev = cur;
    }
    const Rate slope = tail_slope(grid.back() + 1.0);
    if (slope <= 0.0) return kInf;
    return grid.back() + (target - prev) / slope;
}

}  // namespace

ResidualInput::ResidualInput(ConcaveCurve foi, ConcaveCurve cross, ConvexCurve beta)
    : foi_(std::move(foi)), cross_(std::move(cross)), beta_(std::move(beta)) {
    const Rate arrival = foi_.long_term_rate() + cross_.long_term_rate();
    if (arrival >= beta_.top_rate() - kEps) {
        throw InstabilityError("unstable server: long-term arrival rate " + std::to_string(arrival) +
                               " >= service rate " + std::to_string(beta_.top_rate()));
    }
    h_lower_ = horizontal_deviation(cross_, beta_);
}

ResidualInput ResidualInput::from_flows(ConcaveCurve foi, const std::vector<ConcaveCurve>& cross_flows,
                                        ConvexCurve beta) {
    return ResidualInput(std::move(foi), sum_concave(cross_flows), std::move(beta));
}

PiecewiseCurve residual_curve(const ResidualInput& in, Time theta) {
    if (!(theta >= 0.0) || std::isinf(theta)) {
        throw ArgumentError("residual_curve: theta must be finite and >= 0");
    }
    const auto& beta = in.beta();
    const auto& cross = in.cross();

    std::vector<Time> grid{theta};
    for (Time s : beta.breakpoint_set()) {
        if (s > theta) grid.push_back(s);
    }
    for (Time a : cross.breakpoints()) grid.push_back(theta + a);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<PiecewiseCurve::Piece> pieces;
    if (theta > 0.0) pieces.push_back({0.0, 0.0, 0.0});
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Time x = grid[k];
        const Time next = k + 1 < grid.size() ? grid[k + 1] : kInf;
        // Rates are looked up mid-cell: x - theta can round below a breakpoint.
        const Time mid = std::isinf(next) ? x + 1.0 : 0.5 * (x + next);
        const Data v = beta.eval(x) - cross.eval_right(x - theta);
        const Rate slope = beta.rate_right(mid) - cross.rate_right(mid - theta);
        const Data v_next = !std::isinf(next) ? v + slope * (next - x) : slope > 0.0 ? kInf : slope < 0.0 ? -kInf : v;
        if (v >= 0.0) {
            push_piece(pieces, {x, v, slope});
            if (v_next < 0.0 && x + v / -slope < next) push_piece(pieces, {x + v / -slope, 0.0, 0.0});
        } else {
            push_piece(pieces, {x, 0.0, 0.0});
            if (v_next > 0.0 && x - v / slope < next) push_piece(pieces, {x - v / slope, 0.0, slope});
        }
    }
    return PiecewiseCurve(std::move(pieces), 0.0).simplified();
}

Data backlog_bound(const ResidualInput& in, Time theta) {
    if (!(theta >= 0.0)) {
        throw ArgumentError("backlog_bound: theta must be >= 0");
    }
    const auto closure = lower_nondecreasing_closure(residual_curve(in, theta));
    const Data q = vertical_deviation(in.foi(), closure);
    if (!std::isfinite(q)) {
        throw InstabilityError("backlog_bound: unbounded vertical deviation");
    }
    return q;
}

Time theta_for_relative_time(const ResidualInput& in, Time t) {
    if (!(t >= 0.0) || std::isinf(t)) {
        throw DomainError("theta_for_relative_time: t must be finite and >= 0");
    }
    const auto& foi = in.foi();
    const auto& beta = in.beta();
    const Data target = in.cross().eval_right(t);

    std::vector<Time> grid{0.0};
    for (Time a : foi.breakpoints()) {
        grid.push_back(a);
        if (a > t) grid.push_back(a - t);
    }
    for (Time s : beta.breakpoint_set()) {
        if (s > t) grid.push_back(s - t);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto balance = [&](Time th) { return beta.eval(t + th) - foi.eval_right(t + th) + foi.eval_right(th); };
    auto tail = [&](Time th) { return beta.rate_right(t + th) - foi.rate_right(t + th) + foi.rate_right(th); };
    return first_reach(grid, target, balance, tail);
}

TimeSets build_time_sets(const ResidualInput& in) {
    TimeSets ts;
    ts.A1 = in.foi().breakpoint_set();
    ts.A2 = in.cross().breakpoint_set();
    ts.B = in.beta().breakpoint_set();
    ts.T_rel = ts.A2;
    ts.T_rel.insert(ts.T_rel.end(), ts.B.begin(), ts.B.end());
    sort_unique(ts.T_rel);

    const Time h = in.h_lower();
    for (Time t : ts.T_rel) {
        Time theta = theta_for_relative_time(in, t);
        if (!std::isfinite(theta)) {
            throw InstabilityError("build_time_sets: no balance point for t = " + std::to_string(t));
        }
        const bool clamped = theta < h;
        theta = std::max(theta, h);
        ts.theta_rel.push_back(theta);
        ts.clamped.push_back(clamped);
        ts.beyond_t.push_back(theta >= t);
        ts.T_abs.push_back(t + theta);
    }
    ts.T = ts.A1;
    ts.T.insert(ts.T.end(), ts.B.begin(), ts.B.end());
    ts.T.insert(ts.T.end(), ts.T_abs.begin(), ts.T_abs.end());
    sort_unique(ts.T);
    ts.t_max = ts.T.back();
    return ts;
}

Data vt_eval(const ResidualInput& in, Time t_abs, Time theta) {
    if (theta < in.h_lower() - kEps) {
        throw DomainError("vt_eval: theta below h(cross, beta)");
    }
    if (theta < t_abs) {
        return in.foi().eval_right(t_abs) - in.beta().eval(t_abs) + in.cross().eval_right(t_abs - theta);
    }
    return in.foi().eval_right(theta);
}

VtCurve build_vt_curve(const ResidualInput& in, Time t_abs, Time t_max) {
    const auto& foi = in.foi();
    const auto& cross = in.cross();
    const Time h = in.h_lower();
    std::vector<PiecewiseCurve::Piece> pieces;

    if (t_abs > h) {
        const Data base = foi.eval_right(t_abs) - in.beta().eval(t_abs);
        std::vector<Time> grid{h};
        for (Time a : cross.breakpoints()) {
            if (t_abs - a > h) grid.push_back(t_abs - a);
        }
        std::sort(grid.begin(), grid.end());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const Time x = grid[k];
            const Time mid = 0.5 * (x + (k + 1 < grid.size() ? grid[k + 1] : t_abs));
            push_piece(pieces, {x, base + cross.eval_right(t_abs - x), -cross.rate_right(t_abs - mid)});
        }
    }
    const Time from = std::max(t_abs, h);
    push_piece(pieces, {from, foi.eval_right(from), foi.rate_right(from)});
    for (Time a : foi.breakpoints()) {
        if (a > from) push_piece(pieces, {a, foi.eval_right(a), foi.rate_right(a)});
    }
    return VtCurve{t_abs, std::max(t_max, h), PiecewiseCurve(std::move(pieces))};
}

}  // namespace fifonc
