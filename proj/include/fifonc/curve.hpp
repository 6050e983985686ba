#pragma once

// Piecewise-linear curves used throughout the library.
//
// Units: time in seconds, data in Mbit, rates in Mbit/s. All values are
// doubles; ordering/equality tests use the absolute tolerance kEps.

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fifonc {

inline constexpr double kEps = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Time = double;
using Data = double;
using Rate = double;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A curve handed to an operation violates that operation's precondition
// (e.g. pseudo-inverse of a decreasing function).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file. The message starts with the offending field or line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gamma_{r,b}(t) = b + r t for t > 0, 0 at t = 0.
struct TokenBucket {
    Rate rate = 0.0;
    Data burst = 0.0;

    [[nodiscard]] Data eval_right(Time t) const { return burst + rate * t; }
    friend bool operator==(const TokenBucket&, const TokenBucket&) = default;
};

// beta_{R,T}(t) = R [t - T]^+.
struct RateLatency {
    Rate rate = 0.0;
    Time latency = 0.0;

    [[nodiscard]] Data eval(Time t) const { return t > latency ? rate * (t - latency) : 0.0; }
    friend bool operator==(const RateLatency&, const RateLatency&) = default;
};

class PiecewiseCurve;

// Minimum of token buckets in normal form: rates strictly decreasing,
// bursts strictly increasing, every segment the unique minimum somewhere.
class ConcaveCurve {
public:
    // Throws ArgumentError on an empty list or a negative/non-finite field.
    static ConcaveCurve normalize(std::vector<TokenBucket> raw);
    static ConcaveCurve token_bucket(Rate rate, Data burst);
    static ConcaveCurve zero() { return token_bucket(0.0, 0.0); }

    [[nodiscard]] std::span<const TokenBucket> segments() const { return segments_; }
    // Intersections a_1..a_{n-1} of adjacent segments.
    [[nodiscard]] std::span<const Time> breakpoints() const { return breakpoints_; }
    // Breakpoint set used by the scan algorithms: {0} ∪ {a_i}.
    [[nodiscard]] std::vector<Time> breakpoint_set() const;

    [[nodiscard]] Data eval_at(Time t) const;
    [[nodiscard]] Data eval_right(Time t) const;
    // Only differs from eval_right at t = 0, where the left limit is 0.
    [[nodiscard]] Data eval_left(Time t) const;

    // Index of the segment active on [t, t + dt) for small dt.
    [[nodiscard]] std::size_t segment_index_right(Time t) const;
    [[nodiscard]] const TokenBucket& segment_right(Time t) const {
        return segments_[segment_index_right(t)];
    }
    [[nodiscard]] Rate rate_right(Time t) const { return segment_right(t).rate; }
    // Rate on (t - dt, t]; t must be > 0.
    [[nodiscard]] Rate rate_left(Time t) const;

    [[nodiscard]] Rate long_term_rate() const { return segments_.back().rate; }
    [[nodiscard]] Data burst() const { return segments_.front().burst; }

    // inf{t >= 0 | f(t) >= x}; kInf when the curve never reaches x.
    [[nodiscard]] Time pseudo_inverse(Data x) const;

    // Exact representation as a general piecewise curve (value 0 at t = 0).
    [[nodiscard]] PiecewiseCurve to_piecewise() const;

    friend bool operator==(const ConcaveCurve&, const ConcaveCurve&) = default;

private:
    ConcaveCurve(std::vector<TokenBucket> segs, std::vector<Time> bps)
        : segments_(std::move(segs)), breakpoints_(std::move(bps)) {}

    std::vector<TokenBucket> segments_;
    std::vector<Time> breakpoints_;
};

// Maximum of rate-latency curves in normal form: rates strictly increasing,
// every segment the unique maximum somewhere. Before the first latency the
// curve is 0, which is treated as an implicit zero-rate leading segment.
class ConvexCurve {
public:
    // Throws ArgumentError on an empty list, invalid fields, or a list whose
    // envelope is identically zero.
    static ConvexCurve normalize(std::vector<RateLatency> raw);
    static ConvexCurve rate_latency(Rate rate, Time latency);

    [[nodiscard]] std::span<const RateLatency> segments() const { return segments_; }
    // Intersections s_1..s_{m-1} of adjacent segments.
    [[nodiscard]] std::span<const Time> breakpoints() const { return breakpoints_; }
    // {T_1} ∪ {s_i}: the first latency always counts as a breakpoint.
    [[nodiscard]] std::vector<Time> breakpoint_set() const;

    [[nodiscard]] Data eval(Time t) const;
    [[nodiscard]] Data eval_at(Time t) const { return eval(t); }
    [[nodiscard]] Data eval_right(Time t) const { return eval(t); }

    // Rate on [t, t + dt); 0 before the first latency.
    [[nodiscard]] Rate rate_right(Time t) const;
    [[nodiscard]] Rate top_rate() const { return segments_.back().rate; }
    [[nodiscard]] Time first_latency() const { return segments_.front().latency; }

    [[nodiscard]] Time pseudo_inverse(Data x) const;

    [[nodiscard]] PiecewiseCurve to_piecewise() const;

    friend bool operator==(const ConvexCurve&, const ConvexCurve&) = default;

private:
    ConvexCurve(std::vector<RateLatency> segs, std::vector<Time> bps)
        : segments_(std::move(segs)), breakpoints_(std::move(bps)) {}

    std::vector<RateLatency> segments_;
    std::vector<Time> breakpoints_;
};

// General finite piecewise-linear function on [domain_start, inf). It may
// jump at piece boundaries; at a jump it takes the smaller one-sided limit.
class PiecewiseCurve {
public:
    struct Piece {
        Time start = 0.0;
        Data value = 0.0;  // right limit at start
        Rate slope = 0.0;
        friend bool operator==(const Piece&, const Piece&) = default;
    };

    // Pieces must be non-empty with strictly increasing starts. `origin`
    // overrides the value at the first start (defaults to the right limit).
    explicit PiecewiseCurve(std::vector<Piece> pieces, std::optional<Data> origin = std::nullopt);

    [[nodiscard]] std::span<const Piece> pieces() const { return pieces_; }
    [[nodiscard]] Time domain_start() const { return pieces_.front().start; }
    [[nodiscard]] std::vector<Time> breakpoints() const;

    [[nodiscard]] Data eval_right(Time t) const;
    [[nodiscard]] Data eval_left(Time t) const;
    [[nodiscard]] Data eval_at(Time t) const;
    [[nodiscard]] Rate slope_right(Time t) const;
    [[nodiscard]] Rate tail_slope() const { return pieces_.back().slope; }

    [[nodiscard]] bool is_non_decreasing() const;

    // Merges zero-length and collinear continuous neighbours.
    [[nodiscard]] PiecewiseCurve simplified() const;

private:
    [[nodiscard]] std::size_t piece_right(Time t) const;
    void check_domain(Time t) const;

    std::vector<Piece> pieces_;
    Data origin_;
};

}  // namespace fifonc
