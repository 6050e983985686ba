#pragma once

// FIFO residual service: the curve family beta^1_theta, the distance curves
// v_t(theta), the balance shift theta_t and the breakpoint time sets.

#include <optional>
#include <vector>

#include "fifonc/curve.hpp"

namespace fifonc {

// Flow of interest, aggregated cross traffic and the aggregate service curve.
// Construction fails with InstabilityError unless the long-term arrival rate
// of foi + cross is strictly below the top service rate.
class ResidualInput {
public:
    ResidualInput(ConcaveCurve foi, ConcaveCurve cross, ConvexCurve beta);

    // Aggregates a list of cross-flow curves; an empty list means no cross traffic.
    static ResidualInput from_flows(ConcaveCurve foi, const std::vector<ConcaveCurve>& cross_flows,
                                    ConvexCurve beta);

    [[nodiscard]] const ConcaveCurve& foi() const { return foi_; }
    [[nodiscard]] const ConcaveCurve& cross() const { return cross_; }
    [[nodiscard]] const ConvexCurve& beta() const { return beta_; }
    // h(cross, beta): lower edge of the useful theta range.
    [[nodiscard]] Time h_lower() const { return h_lower_; }

private:
    ConcaveCurve foi_;
    ConcaveCurve cross_;
    ConvexCurve beta_;
    Time h_lower_;
};

struct TimeSets {
    std::vector<Time> A1;
    std::vector<Time> A2;
    std::vector<Time> B;
    std::vector<Time> T_rel;
    // theta_t for each member of T_rel, clamped to h_lower.
    std::vector<Time> theta_rel;
    // true where the balance root fell below h_lower and was clamped.
    std::vector<bool> clamped;
    // true where theta_t >= t (outside the range the balance derivation covers).
    std::vector<bool> beyond_t;
    std::vector<Time> T_abs;
    // A1 ∪ B ∪ T_abs, sorted, deduplicated with kEps.
    std::vector<Time> T;
    Time t_max = 0.0;
};

// v_t(theta) over theta in [h_lower, t_max] for one absolute breakpoint t.
struct VtCurve {
    Time t = 0.0;
    Time theta_max = 0.0;
    // Defined from h_lower onwards; equals foi(theta) from t on.
    PiecewiseCurve pieces;
};

// beta^1_theta(t) = [beta(t) - cross(t - theta)]^+ ∧ δ_theta(t), cross taken
// as its right limit (burst active immediately after theta).
PiecewiseCurve residual_curve(const ResidualInput& in, Time theta);

// v(foi, beta^1_theta), evaluated on the lower non-decreasing closure.
Data backlog_bound(const ResidualInput& in, Time theta);

// Smallest theta >= 0 with beta(t+θ) - foi(t+θ) + foi(θ) >= cross(t),
// right limits throughout. Returns 0 when the balance point lies below 0.
Time theta_for_relative_time(const ResidualInput& in, Time t);

TimeSets build_time_sets(const ResidualInput& in);

// foi(t) - beta(t) + cross(t - θ) for θ < t, foi(θ) otherwise. Throws
// DomainError for θ < h_lower.
Data vt_eval(const ResidualInput& in, Time t_abs, Time theta);

VtCurve build_vt_curve(const ResidualInput& in, Time t_abs, Time t_max);

}  // namespace fifonc
