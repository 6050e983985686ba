#pragma once

#include <random>
#include <vector>

#include "fifonc/residual.hpp"
#include "fifonc/scenario.hpp"

namespace fifonc::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool coin() { return integer(0, 1) == 1; }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline std::vector<TokenBucket> random_raw_concave(Rng& rng, int max_segments = 5) {
    std::vector<TokenBucket> raw;
    const int n = rng.integer(1, max_segments);
    for (int i = 0; i < n; ++i) raw.push_back({rng.uni(0.0, 10.0), rng.uni(0.0, 5.0)});
    return raw;
}

inline std::vector<RateLatency> random_raw_convex(Rng& rng, int max_segments = 4) {
    std::vector<RateLatency> raw;
    const int n = rng.integer(1, max_segments);
    for (int i = 0; i < n; ++i) raw.push_back({rng.uni(0.1, 20.0), rng.uni(0.0, 2.0)});
    return raw;
}

// Stable inputs: half generated scenarios, half arbitrary curves including
// multi-segment service curves.
inline ResidualInput random_input(Rng& rng) {
    if (rng.coin()) {
        ScenarioConfig cfg;
        cfg.n_cross = rng.integer(1, 10);
        cfg.foi_segments = rng.coin() ? 2 : 4;
        cfg.seed = rng.engine()();
        return generate_scenario(cfg).input();
    }
    for (;;) {
        auto foi = ConcaveCurve::normalize(random_raw_concave(rng, 4));
        auto cross = ConcaveCurve::normalize(random_raw_concave(rng, 4));
        const Rate load = foi.long_term_rate() + cross.long_term_rate();
        auto raw = random_raw_convex(rng, 3);
        raw.push_back({(load + 0.5) * rng.uni(1.1, 3.0), rng.uni(0.0, 1.0)});
        auto beta = ConvexCurve::normalize(std::move(raw));
        if (load < beta.top_rate() - 1e-6) return ResidualInput(foi, cross, beta);
    }
}

}  // namespace fifonc::testing
