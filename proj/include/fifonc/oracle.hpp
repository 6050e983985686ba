#pragma once

// Brute-force reference for the solvers. It evaluates the residual curve
// directly from the raw segment formulas and shares no code with them.

#include <utility>
#include <vector>

#include "fifonc/residual.hpp"

namespace fifonc {

struct OracleOptions {
    Time theta_step = 1e-3;
    double t_horizon_factor = 2.0;
    Time t_step = 1e-3;
};

struct OracleResult {
    Time best_theta = 0.0;
    Data best_backlog = kInf;
    Time theta_lo = 0.0;
    Time theta_hi = 0.0;
    std::vector<std::pair<Time, Data>> profile;
};

// sup_t foi(t) - beta^1_theta(t) over dense samples up to `horizon`, every
// breakpoint, and the points where the residual leaves zero.
Data oracle_backlog(const ResidualInput& in, Time theta, Time horizon, Time t_step);

// Scans theta over [h_lower, t_max] with the given step. A step wider than
// the range yields a single sample at h_lower.
OracleResult oracle_search(const ResidualInput& in, const OracleOptions& opt = {});

}  // namespace fifonc
