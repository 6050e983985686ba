#include <cmath>

#include "doctest.h"
#include "fifonc/heuristic.hpp"
#include "fifonc/minplus.hpp"

using namespace fifonc;

namespace {

ConcaveCurve tb(double r, double b) { return ConcaveCurve::token_bucket(r, b); }
ConvexCurve rl(double r, double t) { return ConvexCurve::rate_latency(r, t); }

ResidualInput e1() { return ResidualInput(tb(1, 1), tb(1, 1), rl(3, 0)); }
ResidualInput e2() { return ResidualInput(ConcaveCurve::normalize({{4, 1}, {1, 4}}), tb(1, 1), rl(3, 0)); }

}  // namespace

TEST_CASE("stability is checked on construction") {
    CHECK_THROWS_AS(ResidualInput(tb(2, 1), tb(1, 1), rl(3, 0)), InstabilityError);
    CHECK_NOTHROW(ResidualInput(tb(1, 1), tb(1.5, 1), rl(3, 0)));
}

TEST_CASE("residual_curve") {
    auto r1 = residual_curve(e1(), 1.0 / 3);
    for (double t = 0; t < 4; t += 0.01) {
        const double expect = t <= 1.0 / 3 ? 0.0 : std::max(0.0, 2 * t - 2.0 / 3);
        REQUIRE(r1.eval_right(t) == doctest::Approx(expect));
    }
    auto r2 = residual_curve(e2(), 0.6);
    for (double t = 0; t < 4; t += 0.01) {
        const double expect = t <= 0.6 ? 0.0 : std::max(0.0, 2 * t - 0.4);
        REQUIRE(r2.eval_at(t) == doctest::Approx(expect));
    }
    ResidualInput alone(tb(1, 1), ConcaveCurve::zero(), rl(3, 0));
    auto r0 = residual_curve(alone, 0);
    for (double t = 0; t < 4; t += 0.01) REQUIRE(r0.eval_at(t) == doctest::Approx(3 * t));
    CHECK_THROWS_AS(residual_curve(e1(), -0.1), ArgumentError);
}

TEST_CASE("backlog_bound") {
    CHECK(backlog_bound(e1(), 1.0 / 3) == doctest::Approx(4.0 / 3));
    CHECK(backlog_bound(e2(), 0.6) == doctest::Approx(3.4));
    CHECK(backlog_bound(e2(), 4.0 / 3) == doctest::Approx(16.0 / 3));
    CHECK_THROWS_AS(backlog_bound(e2(), -1), ArgumentError);
}

TEST_CASE("theta_for_relative_time") {
    CHECK(theta_for_relative_time(e2(), 0) == doctest::Approx(1.0 / 3));
    CHECK(theta_for_relative_time(e1(), 0) == doctest::Approx(1.0 / 3));
    ResidualInput alone(tb(1, 1), ConcaveCurve::zero(), rl(3, 0));
    CHECK(theta_for_relative_time(alone, 1) == 0);
    CHECK_THROWS_AS(theta_for_relative_time(e1(), -1), DomainError);
}

TEST_CASE("build_time_sets") {
    auto ts = build_time_sets(e2());
    CHECK(ts.A1 == std::vector<Time>{0, 1});
    CHECK(ts.A2 == std::vector<Time>{0});
    CHECK(ts.B == std::vector<Time>{0});
    CHECK(ts.T_rel == std::vector<Time>{0});
    REQUIRE(ts.theta_rel.size() == 1);
    CHECK(ts.theta_rel[0] == doctest::Approx(1.0 / 3));
    REQUIRE(ts.T.size() == 3);
    CHECK(ts.T[1] == doctest::Approx(1.0 / 3));
    CHECK(ts.t_max == doctest::Approx(1));

    auto ts1 = build_time_sets(e1());
    REQUIRE(ts1.T.size() == 2);
    CHECK(ts1.t_max == doctest::Approx(1.0 / 3));

    ResidualInput two(tb(0.5, 1), ConcaveCurve::normalize({{2, 0.5}, {1, 1}}), rl(3, 1));
    auto ts2 = build_time_sets(two);
    REQUIRE(ts2.T_rel.size() == 3);
    CHECK(ts2.T_rel[0] == 0);
    CHECK(ts2.T_rel[1] == doctest::Approx(0.5));
    CHECK(ts2.T_rel[2] == doctest::Approx(1));
}

TEST_CASE("vt_eval") {
    CHECK(vt_eval(e2(), 1, 0.5) == doctest::Approx(3.5));
    CHECK(vt_eval(e2(), 1, 1.2) == doctest::Approx(5.2));
    CHECK(vt_eval(e2(), 1, 1) == doctest::Approx(5));
    CHECK_THROWS_AS(vt_eval(e2(), 1, 0.1), DomainError);

    auto in = e2();
    auto vt = build_vt_curve(in, 1, 1);
    for (double th = in.h_lower(); th < 1.5; th += 0.01) {
        REQUIRE(vt.pieces.eval_right(th) == doctest::Approx(vt_eval(in, 1, th)));
    }
}

TEST_CASE("intersect_vt_with_alpha1") {
    auto r = intersect_vt_with_alpha1(e2(), 1);
    REQUIRE(r);
    CHECK(*r == doctest::Approx(0.6));
    CHECK_FALSE(intersect_vt_with_alpha1(e2(), 1.0 / 3));
    CHECK_FALSE(intersect_vt_with_alpha1(e2(), 0));
}

TEST_CASE("exact_theta_opt worked examples") {
    auto r1 = exact_theta_opt(e1());
    CHECK(r1.method == Method::exact);
    CHECK(r1.theta == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(r1.backlog == doctest::Approx(4.0 / 3).epsilon(1e-12));

    auto r2 = exact_theta_opt(e2());
    CHECK(r2.theta == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r2.backlog == doctest::Approx(3.4).epsilon(1e-12));
    CHECK(r2.h_lower == doctest::Approx(1.0 / 3));
}

TEST_CASE("exact_theta_opt without cross traffic") {
    ResidualInput alone(tb(1, 1), ConcaveCurve::zero(), rl(3, 0));
    auto r = exact_theta_opt(alone);
    CHECK(r.theta == 0);
    CHECK(r.backlog == doctest::Approx(vertical_deviation(tb(1, 1), rl(3, 0))));
}

TEST_CASE("segment_theta and adjust_theta") {
    CHECK(segment_theta({1, 4}, tb(1, 1), rl(3, 0)) == doctest::Approx(1.0 / 3));
    CHECK(std::isinf(segment_theta({4, 1}, tb(1, 1), rl(3, 0))));
    CHECK(segment_theta({1, 1}, tb(1, 1), rl(3, 0)) == doctest::Approx(exact_theta_opt(e1()).theta));

    CHECK(adjust_theta(1.0 / 3, 1, kInf) == AdjustedTheta{1, false});
    CHECK(adjust_theta(kInf, 0, 1) == AdjustedTheta{1, true});
    CHECK(adjust_theta(0.5, 0, 1) == AdjustedTheta{0.5, false});
    CHECK_THROWS_AS(adjust_theta(0.5, 1, 1), ArgumentError);
}

TEST_CASE("heuristic_theta_opt worked examples") {
    auto [r2, tr2] = heuristic_theta_opt(e2());
    REQUIRE(tr2.theta_vec.size() == 2);
    CHECK(std::isinf(tr2.theta_vec[0]));
    CHECK(tr2.theta_vec[1] == doctest::Approx(1.0 / 3));
    CHECK(tr2.theta_adj[0] == AdjustedTheta{1, true});
    CHECK(tr2.theta_adj[1] == AdjustedTheta{1, false});
    CHECK_FALSE(tr2.matched_index);
    CHECK(tr2.fallback_used);
    CHECK(r2.theta == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r2.backlog == doctest::Approx(3.4).epsilon(1e-12));

    auto [r1, tr1] = heuristic_theta_opt(e1());
    REQUIRE(tr1.diff.size() == 1);
    CHECK(tr1.diff[0] == 0);
    CHECK(tr1.matched_index == std::optional<std::size_t>{0});
    CHECK(r1.theta == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(r1.backlog == doctest::Approx(4.0 / 3).epsilon(1e-12));
}
