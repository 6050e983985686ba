#include "fifonc/minplus.hpp"

#include <algorithm>
#include <cmath>

namespace fifonc {

namespace {

void sort_unique(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) <= kEps; }),
             xs.end());
}

// I_A of the a* definition, sorted.
std::vector<Time> mapped_breakpoints(const ConcaveCurve& f, const ConvexCurve& g) {
    std::vector<Time> out = f.breakpoint_set();
    for (Time s : g.breakpoint_set()) {
        const Time t = f.pseudo_inverse(g.eval(s));
        if (std::isfinite(t)) out.push_back(t);
    }
    sort_unique(out);
    return out;
}

}  // namespace

ConcaveCurve add_concave(const ConcaveCurve& f, const ConcaveCurve& g) { return sum_concave({f, g}); }

ConcaveCurve sum_concave(const std::vector<ConcaveCurve>& curves) {
    if (curves.empty()) return ConcaveCurve::zero();
    // Sweep over all breakpoints. Each curve is continuous for t > 0, so a
    // rate change at a shifts the burst by -delta * a.
    struct Event {
        Time at;
        Rate delta;
    };
    std::vector<Event> events;
    Rate rate = 0.0;
    Data burst = 0.0;
    for (const auto& c : curves) {
        const auto segs = c.segments();
        const auto bps = c.breakpoints();
        rate += segs.front().rate;
        burst += segs.front().burst;
        for (std::size_t i = 0; i < bps.size(); ++i) events.push_back({bps[i], segs[i + 1].rate - segs[i].rate});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });

    std::vector<TokenBucket> segs{{rate, burst}};
    for (std::size_t k = 0; k < events.size();) {
        const Time group = events[k].at;
        for (; k < events.size() && events[k].at - group <= kEps; ++k) {
            rate += events[k].delta;
            burst -= events[k].delta * events[k].at;
        }
        segs.push_back({std::max(0.0, rate), std::max(0.0, burst)});
    }
    return ConcaveCurve::normalize(std::move(segs));
}

Time pseudo_inverse(const ConvexCurve& f, Data x) { return f.pseudo_inverse(x); }

Time pseudo_inverse(const PiecewiseCurve& f, Data x) {
    if (!f.is_non_decreasing()) {
        throw ContractError("pseudo_inverse: curve is not non-decreasing");
    }
    if (f.eval_at(f.domain_start()) >= x) return f.domain_start();
    const auto pieces = f.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (p.value >= x) return p.start;
        if (p.slope <= 0.0) continue;
        const Time t = p.start + (x - p.value) / p.slope;
        if (i + 1 == pieces.size() || t < pieces[i + 1].start) return t;
    }
    return kInf;
}

Time horizontal_deviation(const ConcaveCurve& f, const ConvexCurve& g) { return horizontal_deviation(f, 0.0, g); }

Time horizontal_deviation(const ConcaveCurve& f, Rate extra_rate, const ConvexCurve& g) {
    if (f.long_term_rate() + extra_rate > g.top_rate() + kEps) return kInf;
    const auto segs = f.segments();
    const auto bps = f.breakpoints();
    auto value = [&](Time t) { return f.eval_right(t) + extra_rate * t; };
    auto deviation = [&](Time t) { return g.pseudo_inverse(value(t)) - t; };

    Time best = std::max(0.0, deviation(0.0));
    for (Time a : bps) best = std::max(best, deviation(a));
    // Points where f + extra reaches the value of g at one of its breakpoints.
    for (Time s : g.breakpoint_set()) {
        const Data y = g.eval(s);
        if (y <= segs.front().burst) continue;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const Rate r = segs[i].rate + extra_rate;
            const bool last = i + 1 == segs.size();
            if (!last && value(bps[i]) < y) continue;
            if (r > 0.0) best = std::max(best, deviation((y - segs[i].burst) / r));
            break;
        }
    }
    return best;
}

Data vertical_deviation(const ConcaveCurve& f, const PiecewiseCurve& g) {
    if (g.domain_start() > 0.0) {
        throw DomainError("vertical_deviation: g must be defined from t = 0");
    }
    if (f.long_term_rate() - g.tail_slope() > kEps) return kInf;
    std::vector<Time> ts = f.breakpoint_set();
    const auto gb = g.breakpoints();
    ts.insert(ts.end(), gb.begin(), gb.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    Data best = -kInf;
    for (Time t : ts) {
        best = std::max(best, f.eval_at(t) - g.eval_at(t));
        best = std::max(best, f.eval_right(t) - g.eval_right(t));
        if (t > 0.0) best = std::max(best, f.eval_left(t) - g.eval_left(t));
    }
    return best;
}

Data vertical_deviation(const ConcaveCurve& f, const ConvexCurve& g) {
    return vertical_deviation(f, g.to_piecewise());
}

PiecewiseCurve lower_nondecreasing_closure(const PiecewiseCurve& g) {
    const auto pieces = g.pieces();
    if (pieces.back().slope < -kEps) {
        throw ContractError("lower_nondecreasing_closure: curve decreases forever");
    }
    using Piece = PiecewiseCurve::Piece;
    std::vector<Piece> rev;
    Data floor = kInf;  // inf of g over [end of current piece, inf)
    for (std::size_t k = pieces.size(); k-- > 0;) {
        const auto& p = pieces[k];
        const bool last = k + 1 == pieces.size();
        const Time end = last ? kInf : pieces[k + 1].start;
        const Data v_end = last ? kInf : p.value + p.slope * (end - p.start);
        if (p.slope >= 0.0) {
            // min(g(t), floor): follow g until it reaches the floor, then flat.
            if (p.value >= floor) {
                rev.push_back({p.start, floor, 0.0});
            } else if (v_end <= floor || p.start + (floor - p.value) / p.slope >= end) {
                rev.push_back({p.start, p.value, std::max(0.0, p.slope)});
            } else {
                const Time cross = p.start + (floor - p.value) / p.slope;
                rev.push_back({cross, floor, 0.0});
                rev.push_back({p.start, p.value, p.slope});
            }
            floor = std::min(floor, p.value);
        } else {
            floor = std::min(floor, v_end);
            rev.push_back({p.start, floor, 0.0});
        }
    }
    std::reverse(rev.begin(), rev.end());
    // The value at the domain start is the inf over everything, i.e. the
    // right limit there unless the origin itself is lower.
    const Data origin = std::min(g.eval_at(g.domain_start()), rev.front().value);
    return PiecewiseCurve(std::move(rev), origin).simplified();
}

PiecewiseCurve shift_by_impulse(const ConcaveCurve& f, Time shift) {
    if (!(shift >= 0.0) || std::isinf(shift)) {
        throw DomainError("shift_by_impulse: shift must be finite and >= 0");
    }
    const auto base = f.to_piecewise();
    std::vector<PiecewiseCurve::Piece> pieces;
    if (shift > 0.0) pieces.push_back({0.0, 0.0, 0.0});
    for (const auto& p : base.pieces()) pieces.push_back({p.start + shift, p.value, p.slope});
    return PiecewiseCurve(std::move(pieces), 0.0);
}

Time a_star(const ConcaveCurve& f, const ConvexCurve& g) {
    for (Time t : mapped_breakpoints(f, g)) {
        const Time x = g.pseudo_inverse(f.eval_right(t));
        if (!std::isfinite(x)) continue;
        if (f.rate_right(t) <= g.rate_right(x) + kEps) return t;
    }
    return kInf;
}

}  // namespace fifonc
