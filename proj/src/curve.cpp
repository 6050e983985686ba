#include "fifonc/curve.hpp"

#include <algorithm>
#include <cmath>

namespace fifonc {

namespace {

void check_time(Time t, const char* where) {
    if (!(t >= 0.0) || std::isinf(t)) {
        throw DomainError(std::string(where) + ": time must be finite and >= 0, got " + std::to_string(t));
    }
}

void check_field(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) {
        throw ArgumentError(std::string("segment ") + name + " must be finite and >= 0, got " + std::to_string(v));
    }
}

struct Line {
    double slope;
    double intercept;
    bool sentinel = false;
};

double intersect(const Line& a, const Line& b) { return (b.intercept - a.intercept) / (a.slope - b.slope); }

}  // namespace

// ---------------------------------------------------------------- concave

ConcaveCurve ConcaveCurve::token_bucket(Rate rate, Data burst) { return normalize({{rate, burst}}); }

ConcaveCurve ConcaveCurve::normalize(std::vector<TokenBucket> raw) {
    if (raw.empty()) {
        throw ArgumentError("normalize_concave: empty segment list");
    }
    for (const auto& s : raw) {
        check_field(s.rate, "rate");
        check_field(s.burst, "burst");
    }
    std::sort(raw.begin(), raw.end(), [](const TokenBucket& a, const TokenBucket& b) {
        return a.rate != b.rate ? a.rate > b.rate : a.burst < b.burst;
    });

    // Collapse equal rates onto the smallest burst.
    std::vector<TokenBucket> distinct;
    for (const auto& s : raw) {
        if (!distinct.empty() && distinct.back().rate - s.rate <= kEps) {
            distinct.back().burst = std::min(distinct.back().burst, s.burst);
            continue;
        }
        distinct.push_back(s);
    }

    // Lower envelope over t > 0, slopes decreasing.
    std::vector<TokenBucket> hull;
    std::vector<Time> xs;
    for (const auto& s : distinct) {
        const Line line{s.rate, s.burst};
        while (!hull.empty()) {
            const Line top{hull.back().rate, hull.back().burst};
            const double lo = xs.empty() ? 0.0 : xs.back();
            if (intersect(top, line) <= lo + kEps) {
                hull.pop_back();
                if (!xs.empty()) xs.pop_back();
            } else {
                break;
            }
        }
        if (!hull.empty()) {
            xs.push_back(intersect(Line{hull.back().rate, hull.back().burst}, line));
        }
        hull.push_back(s);
    }
    return ConcaveCurve(std::move(hull), std::move(xs));
}

std::vector<Time> ConcaveCurve::breakpoint_set() const {
    std::vector<Time> out{0.0};
    out.insert(out.end(), breakpoints_.begin(), breakpoints_.end());
    return out;
}

std::size_t ConcaveCurve::segment_index_right(Time t) const {
    return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
}

Rate ConcaveCurve::rate_left(Time t) const {
    if (t <= 0.0) return segments_.front().rate;
    auto idx = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin();
    return segments_[static_cast<std::size_t>(idx)].rate;
}

Data ConcaveCurve::eval_right(Time t) const {
    check_time(t, "eval_right");
    return segment_right(t).eval_right(t);
}

Data ConcaveCurve::eval_at(Time t) const {
    check_time(t, "eval_at");
    return t == 0.0 ? 0.0 : segment_right(t).eval_right(t);
}

Data ConcaveCurve::eval_left(Time t) const { return eval_at(t); }

Time ConcaveCurve::pseudo_inverse(Data x) const {
    if (x <= segments_.front().burst) return 0.0;
    // Curve values at the breakpoints are increasing; find the segment covering x.
    std::size_t i = 0;
    while (i < breakpoints_.size() && segments_[i].eval_right(breakpoints_[i]) < x) ++i;
    const auto& s = segments_[i];
    if (i + 1 == segments_.size() && s.rate <= 0.0) return kInf;
    return (x - s.burst) / s.rate;
}

PiecewiseCurve ConcaveCurve::to_piecewise() const {
    std::vector<PiecewiseCurve::Piece> pieces;
    pieces.push_back({0.0, segments_.front().burst, segments_.front().rate});
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        const Time a = breakpoints_[i];
        pieces.push_back({a, segments_[i + 1].eval_right(a), segments_[i + 1].rate});
    }
    return PiecewiseCurve(std::move(pieces), 0.0);
}

// ----------------------------------------------------------------- convex

ConvexCurve ConvexCurve::rate_latency(Rate rate, Time latency) { return normalize({{rate, latency}}); }

ConvexCurve ConvexCurve::normalize(std::vector<RateLatency> raw) {
    if (raw.empty()) {
        throw ArgumentError("normalize_convex: empty segment list");
    }
    for (const auto& s : raw) {
        check_field(s.rate, "rate");
        check_field(s.latency, "latency");
    }
    std::erase_if(raw, [](const RateLatency& s) { return s.rate <= kEps; });
    if (raw.empty()) {
        throw ArgumentError("normalize_convex: all segments have zero rate, curve normalizes to empty");
    }
    std::sort(raw.begin(), raw.end(), [](const RateLatency& a, const RateLatency& b) {
        return a.rate != b.rate ? a.rate < b.rate : a.latency < b.latency;
    });

    std::vector<RateLatency> distinct;
    for (const auto& s : raw) {
        if (!distinct.empty() && s.rate - distinct.back().rate <= kEps) {
            distinct.back().latency = std::min(distinct.back().latency, s.latency);
            continue;
        }
        distinct.push_back(s);
    }

    // Upper envelope over t > 0 of the lines R t - R T together with the
    // constant 0 (sentinel), slopes increasing.
    std::vector<Line> hull{Line{0.0, 0.0, true}};
    std::vector<RateLatency> hull_segs{RateLatency{}};
    std::vector<Time> xs;
    for (const auto& s : distinct) {
        const Line line{s.rate, -s.rate * s.latency};
        while (!hull.empty()) {
            const double lo = xs.empty() ? 0.0 : xs.back();
            if (intersect(hull.back(), line) <= lo + kEps) {
                hull.pop_back();
                hull_segs.pop_back();
                if (!xs.empty()) xs.pop_back();
            } else {
                break;
            }
        }
        if (!hull.empty()) xs.push_back(intersect(hull.back(), line));
        hull.push_back(line);
        hull_segs.push_back(s);
    }
    if (hull.front().sentinel) {
        hull_segs.erase(hull_segs.begin());
        xs.erase(xs.begin());
    }
    return ConvexCurve(std::move(hull_segs), std::move(xs));
}

std::vector<Time> ConvexCurve::breakpoint_set() const {
    std::vector<Time> out{first_latency()};
    out.insert(out.end(), breakpoints_.begin(), breakpoints_.end());
    return out;
}

Data ConvexCurve::eval(Time t) const {
    check_time(t, "eval");
    if (t <= first_latency()) return 0.0;
    auto idx = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin();
    return segments_[static_cast<std::size_t>(idx)].eval(t);
}

Rate ConvexCurve::rate_right(Time t) const {
    if (t < first_latency()) return 0.0;
    auto idx = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin();
    return segments_[static_cast<std::size_t>(idx)].rate;
}

Time ConvexCurve::pseudo_inverse(Data x) const {
    if (x <= 0.0) return 0.0;
    std::size_t i = 0;
    while (i < breakpoints_.size() && segments_[i].eval(breakpoints_[i]) < x) ++i;
    const auto& s = segments_[i];
    return s.latency + x / s.rate;
}

PiecewiseCurve ConvexCurve::to_piecewise() const {
    std::vector<PiecewiseCurve::Piece> pieces;
    const Time t1 = first_latency();
    if (t1 > 0.0) pieces.push_back({0.0, 0.0, 0.0});
    pieces.push_back({t1, 0.0, segments_.front().rate});
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        const Time s = breakpoints_[i];
        pieces.push_back({s, segments_[i + 1].eval(s), segments_[i + 1].rate});
    }
    return PiecewiseCurve(std::move(pieces));
}

// -------------------------------------------------------------- piecewise

PiecewiseCurve::PiecewiseCurve(std::vector<Piece> pieces, std::optional<Data> origin)
    : pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        throw ArgumentError("PiecewiseCurve: no pieces");
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!std::isfinite(p.start) || !std::isfinite(p.value) || !std::isfinite(p.slope)) {
            throw ArgumentError("PiecewiseCurve: non-finite piece");
        }
        if (i > 0 && !(p.start > pieces_[i - 1].start)) {
            throw ArgumentError("PiecewiseCurve: piece starts must be strictly increasing");
        }
    }
    origin_ = origin.value_or(pieces_.front().value);
}

void PiecewiseCurve::check_domain(Time t) const {
    if (!(t >= domain_start()) || std::isinf(t)) {
        throw DomainError("PiecewiseCurve: time " + std::to_string(t) + " outside domain");
    }
}

std::size_t PiecewiseCurve::piece_right(Time t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](Time x, const Piece& p) { return x < p.start; });
    return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

std::vector<Time> PiecewiseCurve::breakpoints() const {
    std::vector<Time> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) out.push_back(p.start);
    return out;
}

Data PiecewiseCurve::eval_right(Time t) const {
    check_domain(t);
    const auto& p = pieces_[piece_right(t)];
    return p.value + p.slope * (t - p.start);
}

Data PiecewiseCurve::eval_left(Time t) const {
    check_domain(t);
    if (t == domain_start()) return origin_;
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const Piece& p, Time x) { return p.start < x; });
    const auto& p = *(it - 1);
    return p.value + p.slope * (t - p.start);
}

Data PiecewiseCurve::eval_at(Time t) const {
    check_domain(t);
    if (t == domain_start()) return origin_;
    return std::min(eval_left(t), eval_right(t));
}

Rate PiecewiseCurve::slope_right(Time t) const {
    check_domain(t);
    return pieces_[piece_right(t)].slope;
}

bool PiecewiseCurve::is_non_decreasing() const {
    if (origin_ > pieces_.front().value + kEps) return false;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].slope < -kEps) return false;
        if (i + 1 < pieces_.size()) {
            const auto& p = pieces_[i];
            const Data end = p.value + p.slope * (pieces_[i + 1].start - p.start);
            if (end > pieces_[i + 1].value + kEps) return false;
        }
    }
    return true;
}

PiecewiseCurve PiecewiseCurve::simplified() const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        if (!out.empty()) {
            const auto& q = out.back();
            const Data end = q.value + q.slope * (p.start - q.start);
            if (std::abs(end - p.value) <= kEps && std::abs(q.slope - p.slope) <= kEps) continue;
        }
        out.push_back(p);
    }
    return PiecewiseCurve(std::move(out), origin_);
}

}  // namespace fifonc
