#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fifonc/experiment.hpp"

using namespace fifonc;

namespace {

ExperimentRow row(int it, int n, Method m, double q, double us = 1.0) {
    ExperimentRow r;
    r.iteration = it;
    r.n_cross = n;
    r.foi_segments = 2;
    r.method = m;
    r.theta = 0.5;
    r.backlog = q;
    r.cpu_time_us = us;
    return r;
}

// Welford mean and variance, kept separate from the library code.
struct Running {
    double n = 0, mean = 0, m2 = 0;
    void add(double x) {
        n += 1;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double ci() const { return n < 2 ? 0.0 : 1.96 * std::sqrt(m2 / (n - 1)) / std::sqrt(n); }
};

}  // namespace

TEST_CASE("rows header matches the golden file") {
    std::ifstream in(FIFONC_GOLDEN_DIR "/rows_header.csv");
    std::string golden;
    std::getline(in, golden);
    CHECK(golden == kRowsHeader);
    std::ostringstream os;
    write_rows_csv(os, {});
    CHECK(os.str() == golden + "\n");
}

TEST_CASE("experiment row count and determinism") {
    ExperimentConfig cfg;
    cfg.iterations = 5;
    cfg.seed = 1;
    const auto a = run_experiment(cfg);
    CHECK(a.rows.size() == 135);
    cfg.workers = 3;
    const auto b = run_experiment(cfg);
    REQUIRE(b.rows.size() == a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].iteration == b.rows[i].iteration);
        CHECK(a.rows[i].n_cross == b.rows[i].n_cross);
        CHECK(a.rows[i].method == b.rows[i].method);
        CHECK(a.rows[i].theta == b.rows[i].theta);
        CHECK(a.rows[i].backlog == b.rows[i].backlog);
    }
}

TEST_CASE("csv round trip") {
    ExperimentConfig cfg;
    cfg.iterations = 3;
    cfg.cross_max = 4;
    cfg.segregation = true;
    const auto out = run_experiment(cfg);
    CHECK(out.segregation.size() == 9);

    std::stringstream rows, seg;
    write_rows_csv(rows, out.rows);
    write_segregation_csv(seg, out.segregation);
    const auto back = read_rows_csv(rows);
    REQUIRE(back.size() == out.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].backlog == out.rows[i].backlog);
        CHECK(back[i].theta == out.rows[i].theta);
        CHECK(back[i].method == out.rows[i].method);
    }
    const auto sback = read_segregation_csv(seg);
    REQUIRE(sback.size() == out.segregation.size());
    for (std::size_t i = 0; i < sback.size(); ++i) CHECK(sback[i].penalty_disco == out.segregation[i].penalty_disco);
}

TEST_CASE("malformed csv names the line") {
    std::istringstream bad_header("iteration,n_cross\n");
    CHECK_THROWS_AS(read_rows_csv(bad_header), ParseError);
    std::istringstream bad_row(std::string(kRowsHeader) + "\n0,2,2,exact,0.1,1.0,3\n0,2,2,magic,0.1,1.0,3\n");
    try {
        read_rows_csv(bad_row);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream empty("");
    CHECK_THROWS_AS(read_rows_csv(empty), ParseError);
}

TEST_CASE("report on identical heuristic") {
    std::vector<ExperimentRow> rows;
    for (int it = 0; it < 10; ++it) {
        rows.push_back(row(it, 2, Method::exact, 5.0 + it));
        rows.push_back(row(it, 2, Method::heuristic, 5.0 + it));
    }
    const auto s = summarize(rows);
    REQUIRE(s.size() == 1);
    CHECK(s[0].accuracy_pct == 100.0);
    CHECK(s[0].increase_pct == 0.0);
}

TEST_CASE("report on half inflated heuristic") {
    std::vector<ExperimentRow> rows;
    for (int it = 0; it < 10; ++it) {
        rows.push_back(row(it, 3, Method::exact, 10.0, 4.0));
        rows.push_back(row(it, 3, Method::heuristic, it % 2 == 0 ? 11.0 : 10.0, 1.0));
    }
    const auto s = summarize(rows);
    REQUIRE(s.size() == 1);
    CHECK(s[0].accuracy_pct == doctest::Approx(50.0));
    CHECK(s[0].increase_pct == doctest::Approx(10.0));
    CHECK(s[0].ci95_increase == doctest::Approx(0.0));
    CHECK(s[0].ci95_exact == 0.0);
    CHECK(s[0].t_exact_ms == doctest::Approx(0.04));
    CHECK(s[0].speedup == doctest::Approx(4.0));
}

TEST_CASE("report arithmetic matches an independent recomputation") {
    ExperimentConfig cfg;
    cfg.iterations = 20;
    cfg.foi_segments = 4;
    cfg.segregation = true;
    const auto out = run_experiment(cfg);
    const auto summary = summarize(out.rows, out.segregation);
    REQUIRE(summary.size() == 9);

    for (const auto& s : summary) {
        Running ex, he, di, inc, pe, pd;
        double same = 0, paired = 0, t_ex = 0, t_he = 0;
        for (const auto& e : out.rows) {
            if (e.n_cross != s.n_cross) continue;
            if (e.method == Method::disco) di.add(e.backlog);
            if (e.method == Method::heuristic) {
                he.add(e.backlog);
                t_he += e.cpu_time_us;
            }
            if (e.method != Method::exact) continue;
            ex.add(e.backlog);
            t_ex += e.cpu_time_us;
            for (const auto& h : out.rows) {
                if (h.n_cross != e.n_cross || h.iteration != e.iteration || h.method != Method::heuristic) continue;
                paired += 1;
                if (std::abs(h.backlog - e.backlog) <= 1e-9 * std::max(1.0, e.backlog)) {
                    same += 1;
                } else {
                    inc.add(100.0 * (h.backlog / e.backlog - 1.0));
                }
            }
        }
        for (const auto& g : out.segregation) {
            if (g.n_cross != s.n_cross) continue;
            pe.add(g.penalty_exact);
            pd.add(g.penalty_disco);
        }
        CHECK(s.samples == 20);
        CHECK(std::abs(s.mean_exact - ex.mean) <= 1e-9);
        CHECK(std::abs(s.ci95_exact - ex.ci()) <= 1e-9);
        CHECK(std::abs(s.mean_heur - he.mean) <= 1e-9);
        CHECK(std::abs(s.ci95_heur - he.ci()) <= 1e-9);
        CHECK(std::abs(s.mean_disco - di.mean) <= 1e-9);
        CHECK(std::abs(s.accuracy_pct - 100.0 * same / paired) <= 1e-9);
        CHECK(std::abs(s.increase_pct - (inc.n > 0 ? inc.mean : 0.0)) <= 1e-9);
        CHECK(std::abs(s.ci95_increase - inc.ci()) <= 1e-9);
        CHECK(std::abs(s.t_exact_ms - t_ex / 1000.0) <= 1e-9);
        CHECK(std::abs(s.t_heur_ms - t_he / 1000.0) <= 1e-9);
        CHECK(std::abs(s.speedup - t_ex / t_he) <= 1e-9);
        CHECK(std::abs(s.disco_ratio - di.mean / ex.mean) <= 1e-9);
        CHECK(std::abs(s.penalty_exact - pe.mean) <= 1e-9);
        CHECK(std::abs(s.ci95_penalty_disco - pd.ci()) <= 1e-9);
    }
}

TEST_CASE("summary writers") {
    std::vector<ExperimentRow> rows{row(0, 2, Method::exact, 1.0), row(0, 2, Method::heuristic, 1.0)};
    const auto s = summarize(rows);
    std::ostringstream csv, text;
    write_summary_csv(csv, s);
    write_summary_text(text, s);
    CHECK(csv.str().rfind("n_cross,", 0) == 0);
    CHECK(text.str().find("100") != std::string::npos);
}
