#include "fifonc/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace fifonc {

namespace {

struct Raw {
    std::vector<TokenBucket> foi;
    std::vector<TokenBucket> cross;
    std::vector<RateLatency> beta;
};

Data alpha(const std::vector<TokenBucket>& segs, Time t, bool right) {
    if (t == 0.0 && !right) return 0.0;
    Data v = kInf;
    for (const auto& s : segs) v = std::min(v, s.burst + s.rate * t);
    return v;
}

Data service(const std::vector<RateLatency>& segs, Time t) {
    Data v = 0.0;
    for (const auto& s : segs) v = std::max(v, s.rate * std::max(0.0, t - s.latency));
    return v;
}

Data residual(const Raw& raw, Time theta, Time t, bool right) {
    if (right ? t < theta : t <= theta) return 0.0;
    return std::max(0.0, service(raw.beta, t) - alpha(raw.cross, t - theta, true));
}

Data gap(const Raw& raw, Time theta, Time t, bool right) {
    return alpha(raw.foi, t, right) - residual(raw, theta, t, right);
}

void pairwise(const std::vector<TokenBucket>& segs, Time shift, std::vector<Time>& out) {
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            if (segs[i].rate == segs[j].rate) continue;
            const Time x = (segs[j].burst - segs[i].burst) / (segs[i].rate - segs[j].rate);
            if (x > 0.0) out.push_back(x + shift);
        }
    }
}

}  // namespace

Data oracle_backlog(const ResidualInput& in, Time theta, Time horizon, Time t_step) {
    Raw raw;
    raw.foi.assign(in.foi().segments().begin(), in.foi().segments().end());
    raw.cross.assign(in.cross().segments().begin(), in.cross().segments().end());
    raw.beta.assign(in.beta().segments().begin(), in.beta().segments().end());

    std::vector<Time> kinks{0.0, theta};
    pairwise(raw.foi, 0.0, kinks);
    pairwise(raw.cross, theta, kinks);
    for (std::size_t i = 0; i < raw.beta.size(); ++i) {
        kinks.push_back(raw.beta[i].latency);
        for (std::size_t j = i + 1; j < raw.beta.size(); ++j) {
            const auto& a = raw.beta[i];
            const auto& b = raw.beta[j];
            if (a.rate == b.rate) continue;
            kinks.push_back((a.rate * a.latency - b.rate * b.latency) / (a.rate - b.rate));
        }
    }
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

    Data best = -kInf;
    auto visit = [&](Time t) {
        if (t < 0.0) return;
        best = std::max(best, gap(raw, theta, t, false));
        best = std::max(best, gap(raw, theta, t, true));
    };
    for (std::size_t k = 0; k < kinks.size(); ++k) {
        visit(kinks[k]);
        // Between kinks service minus shifted cross is linear: add its root.
        if (k + 1 < kinks.size() && kinks[k] >= theta) {
            const Time x0 = kinks[k];
            const Time x1 = kinks[k + 1];
            const Data y0 = service(raw.beta, x0) - alpha(raw.cross, x0 - theta, true);
            const Data y1 = service(raw.beta, x1) - alpha(raw.cross, x1 - theta, true);
            if ((y0 < 0.0) != (y1 < 0.0)) visit(x0 + (x1 - x0) * y0 / (y0 - y1));
        }
    }
    const auto samples = static_cast<long>(std::floor(horizon / t_step));
    for (long k = 0; k <= samples; ++k) best = std::max(best, gap(raw, theta, static_cast<double>(k) * t_step, false));
    return best;
}

OracleResult oracle_search(const ResidualInput& in, const OracleOptions& opt) {
    if (!(opt.theta_step > 0.0) || !(opt.t_step > 0.0) || !(opt.t_horizon_factor > 0.0)) {
        throw ArgumentError("oracle: steps and horizon factor must be positive");
    }
    OracleResult res;
    res.theta_lo = in.h_lower();
    res.theta_hi = std::max(build_time_sets(in).t_max, res.theta_lo);
    const Time horizon = opt.t_horizon_factor * std::max(res.theta_hi, opt.t_step);

    const auto n = static_cast<long>(std::floor((res.theta_hi - res.theta_lo) / opt.theta_step));
    for (long k = 0; k <= n; ++k) {
        const Time theta = res.theta_lo + static_cast<double>(k) * opt.theta_step;
        const Data q = oracle_backlog(in, theta, horizon, opt.t_step);
        res.profile.emplace_back(theta, q);
        if (q < res.best_backlog) {
            res.best_backlog = q;
            res.best_theta = theta;
        }
    }
    return res;
}

}  // namespace fifonc
