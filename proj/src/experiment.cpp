#include "fifonc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "fifonc/heuristic.hpp"
#include "fifonc/scenario.hpp"
#include "fifonc/timing.hpp"

namespace fifonc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

int parse_int(const std::string& s, std::size_t line) {
    const double v = parse_double(s, line);
    if (v != std::floor(v)) throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

std::vector<std::pair<std::size_t, std::vector<std::string>>> read_table(std::istream& is, const char* header) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("line 1: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw ParseError("line 1: expected header '" + std::string(header) + "'");
    const std::size_t cols = split(header).size();
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::size_t n = 1;
    while (std::getline(is, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != cols) {
            throw ParseError("line " + std::to_string(n) + ": expected " + std::to_string(cols) + " columns");
        }
        out.emplace_back(n, std::move(cells));
    }
    return out;
}

struct IterationResult {
    std::vector<ExperimentRow> rows;
    std::vector<SegregationRow> segregation;
};

IterationResult run_iteration(const ExperimentConfig& cfg, int iteration) {
    IterationResult out;
    for (int n = cfg.cross_min; n <= cfg.cross_max; ++n) {
        ScenarioConfig sc_cfg;
        sc_cfg.n_cross = n;
        sc_cfg.foi_segments = cfg.foi_segments;
        sc_cfg.seed = cfg.seed;
        sc_cfg.iteration = static_cast<std::uint64_t>(iteration);
        const Scenario sc = generate_scenario(sc_cfg);

        // Mean CPU time over timing_repeats identical calls.
        auto timed = [&](auto&& solve) {
            CpuStopwatch w;
            SolveResult r = solve();
            for (int k = 1; k < cfg.timing_repeats; ++k) r = solve();
            out.rows.push_back({iteration, n, cfg.foi_segments, r.method, r.theta, r.backlog,
                                w.elapsed_us() / cfg.timing_repeats});
        };
        timed([&] { return exact_theta_opt(sc.input()); });
        timed([&] { return heuristic_theta_opt(sc.input()).first; });
        timed([&] { return solve_disco(sc); });
        if (cfg.segregation) {
            SegregationRow s;
            s.iteration = iteration;
            s.n_cross = n;
            s.q_agg = aggregate_backlog(sc);
            const auto ex = per_flow_bounds(sc, Method::exact);
            const auto di = per_flow_bounds(sc, Method::disco);
            for (Data q : ex) s.sum_exact += q;
            for (Data q : di) s.sum_disco += q;
            s.penalty_exact = segregation_penalty(ex, s.q_agg);
            s.penalty_disco = segregation_penalty(di, s.q_agg);
            out.segregation.push_back(s);
        }
    }
    return out;
}

}  // namespace

int workers_from_env() {
    const char* v = std::getenv("FIFONC_WORKERS");
    if (v == nullptr) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1) return 1;
    return static_cast<int>(std::min<long>(n, 256));
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    if (cfg.iterations < 0 || cfg.cross_min < 0 || cfg.cross_min > cfg.cross_max) {
        throw ArgumentError("run_experiment: invalid iteration count or cross-flow range");
    }
    if (cfg.foi_segments != 2 && cfg.foi_segments != 4) {
        throw ArgumentError("run_experiment: foi_segments must be 2 or 4");
    }
    if (cfg.timing_repeats < 1) throw ArgumentError("run_experiment: timing_repeats must be >= 1");
    std::vector<IterationResult> results(static_cast<std::size_t>(cfg.iterations));
    const int workers = std::max(1, std::min(cfg.workers, cfg.iterations));
    if (workers <= 1) {
        for (int i = 0; i < cfg.iterations; ++i) results[static_cast<std::size_t>(i)] = run_iteration(cfg, i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < cfg.iterations; i = next++) {
                    try {
                        results[static_cast<std::size_t>(i)] = run_iteration(cfg, i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    ExperimentOutput out;
    for (auto& r : results) {
        out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
        out.segregation.insert(out.segregation.end(), r.segregation.begin(), r.segregation.end());
    }
    return out;
}

std::pair<double, double> mean_ci95(const std::vector<double>& xs) {
    if (xs.empty()) return {kNaN, kNaN};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return {mean, 1.96 * sd / std::sqrt(static_cast<double>(xs.size()))};
}

bool same_bound(Data heuristic, Data exact) { return std::abs(heuristic - exact) <= 1e-9 * std::max(1.0, exact); }

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows, const std::vector<SegregationRow>& segregation) {
    struct Cell {
        std::map<int, double> exact, heur, disco;
        double t_exact = 0.0, t_heur = 0.0;
        std::vector<double> pen_exact, pen_disco;
    };
    std::map<int, Cell> cells;
    for (const auto& r : rows) {
        auto& c = cells[r.n_cross];
        switch (r.method) {
            case Method::exact:
                c.exact[r.iteration] = r.backlog;
                c.t_exact += r.cpu_time_us;
                break;
            case Method::heuristic:
                c.heur[r.iteration] = r.backlog;
                c.t_heur += r.cpu_time_us;
                break;
            case Method::disco: c.disco[r.iteration] = r.backlog; break;
        }
    }
    for (const auto& s : segregation) {
        auto& c = cells[s.n_cross];
        c.pen_exact.push_back(s.penalty_exact);
        c.pen_disco.push_back(s.penalty_disco);
    }

    std::vector<SummaryRow> out;
    for (const auto& [n, c] : cells) {
        SummaryRow s;
        s.n_cross = n;
        std::vector<double> ex, he, di, inc;
        int same = 0, paired = 0;
        for (const auto& [it, q] : c.exact) {
            ex.push_back(q);
            auto h = c.heur.find(it);
            if (h == c.heur.end()) continue;
            ++paired;
            if (same_bound(h->second, q)) {
                ++same;
            } else {
                inc.push_back((h->second - q) / q * 100.0);
            }
        }
        for (const auto& [it, q] : c.heur) he.push_back(q);
        for (const auto& [it, q] : c.disco) di.push_back(q);
        s.samples = static_cast<int>(ex.size());
        std::tie(s.mean_exact, s.ci95_exact) = mean_ci95(ex);
        std::tie(s.mean_heur, s.ci95_heur) = mean_ci95(he);
        std::tie(s.mean_disco, s.ci95_disco) = mean_ci95(di);
        s.accuracy_pct = paired > 0 ? 100.0 * same / paired : kNaN;
        if (inc.empty()) {
            s.increase_pct = 0.0;
            s.ci95_increase = 0.0;
        } else {
            std::tie(s.increase_pct, s.ci95_increase) = mean_ci95(inc);
        }
        s.t_exact_ms = c.t_exact / 1e3;
        s.t_heur_ms = c.t_heur / 1e3;
        s.t_exact_mean_us = c.exact.empty() ? kNaN : c.t_exact / static_cast<double>(c.exact.size());
        s.t_heur_mean_us = c.heur.empty() ? kNaN : c.t_heur / static_cast<double>(c.heur.size());
        s.speedup = c.t_heur > 0.0 ? c.t_exact / c.t_heur : kNaN;
        s.disco_ratio = s.mean_disco / s.mean_exact;
        std::tie(s.penalty_exact, s.ci95_penalty_exact) = mean_ci95(c.pen_exact);
        std::tie(s.penalty_disco, s.ci95_penalty_disco) = mean_ci95(c.pen_disco);
        out.push_back(s);
    }
    return out;
}

void write_rows_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
    os << kRowsHeader << '\n' << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.iteration << ',' << r.n_cross << ',' << r.foi_segments << ',' << to_string(r.method) << ','
           << r.theta << ',' << r.backlog << ',' << std::setprecision(6) << r.cpu_time_us << std::setprecision(17)
           << '\n';
    }
}

void write_segregation_csv(std::ostream& os, const std::vector<SegregationRow>& rows) {
    os << kSegregationHeader << '\n' << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.iteration << ',' << r.n_cross << ',' << r.q_agg << ',' << r.sum_exact << ',' << r.sum_disco << ','
           << r.penalty_exact << ',' << r.penalty_disco << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "n_cross,samples,mean_exact,ci95_exact,mean_heur,ci95_heur,mean_disco,ci95_disco,accuracy_pct,"
          "increase_pct,ci95_increase,t_exact_ms,t_heur_ms,t_exact_mean_us,t_heur_mean_us,speedup,disco_ratio,"
          "penalty_exact,ci95_penalty_exact,penalty_disco,ci95_penalty_disco\n"
       << std::setprecision(10);
    for (const auto& s : rows) {
        os << s.n_cross << ',' << s.samples << ',' << s.mean_exact << ',' << s.ci95_exact << ',' << s.mean_heur << ','
           << s.ci95_heur << ',' << s.mean_disco << ',' << s.ci95_disco << ',' << s.accuracy_pct << ','
           << s.increase_pct << ',' << s.ci95_increase << ',' << s.t_exact_ms << ',' << s.t_heur_ms << ','
           << s.t_exact_mean_us << ',' << s.t_heur_mean_us << ',' << s.speedup << ',' << s.disco_ratio << ','
           << s.penalty_exact << ',' << s.ci95_penalty_exact << ',' << s.penalty_disco << ','
           << s.ci95_penalty_disco << '\n';
    }
}

void write_summary_text(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << std::fixed;
    os << std::setw(3) << "n" << std::setw(17) << "exact" << std::setw(17) << "heuristic" << std::setw(8) << "acc%"
       << std::setw(15) << "inc%" << std::setw(11) << "t_ex[ms]" << std::setw(11) << "t_heu[ms]" << std::setw(9)
       << "speedup" << std::setw(17) << "disco" << std::setw(7) << "ratio" << std::setw(10) << "seg_ex%"
       << std::setw(10) << "seg_dis%" << '\n';
    for (const auto& s : rows) {
        std::ostringstream ex, he, inc, di;
        ex << std::fixed << std::setprecision(3) << s.mean_exact << "±" << s.ci95_exact;
        he << std::fixed << std::setprecision(3) << s.mean_heur << "±" << s.ci95_heur;
        inc << std::fixed << std::setprecision(2) << s.increase_pct << "±" << s.ci95_increase;
        di << std::fixed << std::setprecision(3) << s.mean_disco << "±" << s.ci95_disco;
        os << std::setw(3) << s.n_cross << std::setw(18) << ex.str() << std::setw(18) << he.str()
           << std::setw(8) << std::setprecision(1) << s.accuracy_pct << std::setw(16) << inc.str() << std::setw(11)
           << std::setprecision(2) << s.t_exact_ms << std::setw(11) << s.t_heur_ms << std::setw(9)
           << std::setprecision(1) << s.speedup << std::setw(18) << di.str() << std::setw(7) << std::setprecision(2)
           << s.disco_ratio << std::setw(10) << std::setprecision(1) << s.penalty_exact << std::setw(10)
           << s.penalty_disco << '\n';
    }
    os.unsetf(std::ios::floatfield);
}

std::vector<ExperimentRow> read_rows_csv(std::istream& is) {
    std::vector<ExperimentRow> out;
    for (const auto& [line, c] : read_table(is, kRowsHeader)) {
        ExperimentRow r;
        r.iteration = parse_int(c[0], line);
        r.n_cross = parse_int(c[1], line);
        r.foi_segments = parse_int(c[2], line);
        try {
            r.method = method_from_string(c[3]);
        } catch (const ArgumentError&) {
            throw ParseError("line " + std::to_string(line) + ": unknown method '" + c[3] + "'");
        }
        r.theta = parse_double(c[4], line);
        r.backlog = parse_double(c[5], line);
        r.cpu_time_us = parse_double(c[6], line);
        out.push_back(r);
    }
    if (out.empty()) throw ParseError("no data rows");
    return out;
}

std::vector<SegregationRow> read_segregation_csv(std::istream& is) {
    std::vector<SegregationRow> out;
    for (const auto& [line, c] : read_table(is, kSegregationHeader)) {
        out.push_back({parse_int(c[0], line), parse_int(c[1], line), parse_double(c[2], line),
                       parse_double(c[3], line), parse_double(c[4], line), parse_double(c[5], line),
                       parse_double(c[6], line)});
    }
    return out;
}

}  // namespace fifonc
