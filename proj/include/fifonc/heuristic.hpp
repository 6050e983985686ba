#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fifonc/exact.hpp"

namespace fifonc {

// A theta moved into a segment interval. `open` marks the excluded right end
// of [lo, hi): the value stands for hi approached from the left.
struct AdjustedTheta {
    Time value = 0.0;
    bool open = false;
    friend bool operator==(const AdjustedTheta&, const AdjustedTheta&) = default;
};

struct HeuristicTrace {
    std::vector<Time> theta_vec;
    std::vector<AdjustedTheta> theta_adj;
    std::vector<Time> diff;
    std::optional<std::size_t> matched_index;
    bool fallback_used = false;
};

// h(cross + gamma_{rate,0}, beta); kInf when that sum outgrows beta.
Time segment_theta(const TokenBucket& segment, const ConcaveCurve& cross, const ConvexCurve& beta);

// Clamps theta into [lo, hi). Throws ArgumentError unless lo < hi.
AdjustedTheta adjust_theta(Time theta, Time lo, Time hi);

std::pair<SolveResult, HeuristicTrace> heuristic_theta_opt(const ResidualInput& in);

}  // namespace fifonc
