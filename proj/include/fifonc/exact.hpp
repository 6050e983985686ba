#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fifonc/residual.hpp"

namespace fifonc {

enum class Method { exact, heuristic, disco };

std::string to_string(Method m);
// Throws ArgumentError for an unknown name.
Method method_from_string(const std::string& name);

struct Candidate {
    Time source = 0.0;  // t the candidate was derived from
    Time theta = 0.0;
};

struct SolveResult {
    Method method = Method::exact;
    Time theta = 0.0;
    Data backlog = 0.0;
    Time h_lower = 0.0;
    std::vector<Candidate> candidates;
    double cpu_time_us = 0.0;
};

// Root of foi(θ) = v_t(θ) on [h_lower, t). Empty when t <= h_lower or when
// foi(h_lower) already lies above v_t(h_lower).
std::optional<Time> intersect_vt_with_alpha1(const ResidualInput& in, Time t_abs);

// First intersection of max_t v_t with foi, i.e. the backlog-minimizing theta.
SolveResult exact_theta_opt(const ResidualInput& in);

}  // namespace fifonc
