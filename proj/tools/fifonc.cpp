#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fifonc/experiment.hpp"
#include "fifonc/heuristic.hpp"
#include "fifonc/io.hpp"
#include "fifonc/oracle.hpp"
#include "fifonc/scenario.hpp"

using namespace fifonc;

namespace {

enum Exit { kOk = 0, kFailure = 1, kBadInput = 2, kUnstable = 3 };

json solve_one(const Scenario& sc, Method m) {
    switch (m) {
        case Method::exact: return to_json(exact_theta_opt(sc.input()));
        case Method::heuristic: {
            auto [res, trace] = heuristic_theta_opt(sc.input());
            json j = to_json(res);
            j["trace"] = to_json(trace);
            return j;
        }
        case Method::disco: return to_json(solve_disco(sc));
    }
    return {};
}

int cmd_solve(const std::string& file, const std::string& method) {
    const Scenario sc = load_scenario(file);
    if (method == "all") {
        json out = json::array();
        for (Method m : {Method::exact, Method::heuristic, Method::disco}) out.push_back(solve_one(sc, m));
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << solve_one(sc, method_from_string(method)).dump(2) << '\n';
    }
    return kOk;
}

int cmd_experiment(ExperimentConfig cfg, const std::string& out_csv, const std::string& seg_csv) {
    cfg.workers = workers_from_env();
    cfg.segregation = !seg_csv.empty();
    std::ofstream out(out_csv);
    if (!out) {
        std::cerr << "error: cannot write " << out_csv << '\n';
        return kFailure;
    }
    const auto res = run_experiment(cfg);
    write_rows_csv(out, res.rows);
    if (cfg.segregation) {
        std::ofstream seg(seg_csv);
        if (!seg) {
            std::cerr << "error: cannot write " << seg_csv << '\n';
            return kFailure;
        }
        write_segregation_csv(seg, res.segregation);
    }
    std::cerr << "wrote " << res.rows.size() << " rows to " << out_csv << '\n';
    return kOk;
}

int cmd_report(const std::string& in_csv, const std::string& seg_csv, const std::string& out_csv) {
    std::ifstream in(in_csv);
    if (!in) throw ParseError(in_csv + ": cannot open");
    const auto rows = read_rows_csv(in);
    std::vector<SegregationRow> seg;
    if (!seg_csv.empty()) {
        std::ifstream s(seg_csv);
        if (!s) throw ParseError(seg_csv + ": cannot open");
        seg = read_segregation_csv(s);
    }
    const auto summary = summarize(rows, seg);
    write_summary_text(std::cout, summary);
    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out) {
            std::cerr << "error: cannot write " << out_csv << '\n';
            return kFailure;
        }
        write_summary_csv(out, summary);
    }
    return kOk;
}

int cmd_oracle(const std::string& file, const OracleOptions& opt, bool profile) {
    const Scenario sc = load_scenario(file);
    const auto res = oracle_search(sc.input(), opt);
    json j{{"best_theta", res.best_theta},
           {"best_backlog", res.best_backlog},
           {"theta_lo", res.theta_lo},
           {"theta_hi", res.theta_hi},
           {"samples", res.profile.size()}};
    if (profile) {
        json p = json::array();
        for (const auto& [th, q] : res.profile) p.push_back({th, q});
        j["profile"] = p;
    }
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_gen(const ScenarioConfig& cfg, const std::string& out) {
    const Scenario sc = generate_scenario(cfg);
    if (out.empty()) {
        std::cout << to_json(sc).dump(2) << '\n';
    } else {
        save_scenario(sc, out);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-flow backlog bounds at an aggregate FIFO server"};
    app.require_subcommand(1);

    std::string file, method = "all";
    auto* solve = app.add_subcommand("solve", "Solve one scenario file");
    solve->add_option("scenario", file, "Scenario JSON")->required();
    solve->add_option("-m,--method", method, "exact | heuristic | disco | all")
        ->check(CLI::IsMember({"exact", "heuristic", "disco", "all"}));

    ExperimentConfig ecfg;
    std::string out_csv, seg_csv;
    auto* exp = app.add_subcommand("experiment", "Run the randomized sweep and write per-call rows");
    exp->add_option("--iterations", ecfg.iterations)->capture_default_str();
    exp->add_option("--cross-min", ecfg.cross_min)->capture_default_str();
    exp->add_option("--cross-max", ecfg.cross_max)->capture_default_str();
    exp->add_option("--foi-segments", ecfg.foi_segments)->check(CLI::IsMember({2, 4}))->capture_default_str();
    exp->add_option("--seed", ecfg.seed)->capture_default_str();
    exp->add_option("--timing-repeats", ecfg.timing_repeats, "Solver calls averaged per timing row")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exp->add_option("-o,--out", out_csv, "Rows CSV")->required();
    exp->add_option("--segregation-out", seg_csv, "Also compute per-flow bounds and write penalties here");

    std::string in_csv, seg_in, summary_csv;
    auto* report = app.add_subcommand("report", "Summarize an experiment CSV");
    report->add_option("rows", in_csv, "Rows CSV from experiment")->required();
    report->add_option("--segregation", seg_in, "Segregation CSV from experiment");
    report->add_option("-o,--out", summary_csv, "Summary CSV");

    OracleOptions oopt;
    bool profile = false;
    auto* oracle = app.add_subcommand("oracle", "Brute-force grid search over theta");
    oracle->add_option("scenario", file, "Scenario JSON")->required();
    oracle->add_option("--theta-step", oopt.theta_step)->capture_default_str();
    oracle->add_option("--t-horizon-factor", oopt.t_horizon_factor)->capture_default_str();
    oracle->add_option("--t-step", oopt.t_step)->capture_default_str();
    oracle->add_flag("--profile", profile, "Include the full (theta, backlog) profile");

    ScenarioConfig gcfg;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Emit a generated scenario");
    gen->add_option("--n-cross", gcfg.n_cross)->capture_default_str();
    gen->add_option("--foi-segments", gcfg.foi_segments)->check(CLI::IsMember({2, 4}))->capture_default_str();
    gen->add_option("--seed", gcfg.seed)->capture_default_str();
    gen->add_option("--iteration", gcfg.iteration)->capture_default_str();
    gen->add_option("-o,--out", gen_out, "Output file (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(file, method);
        if (*exp) return cmd_experiment(ecfg, out_csv, seg_csv);
        if (*report) return cmd_report(in_csv, seg_in, summary_csv);
        if (*oracle) return cmd_oracle(file, oopt, profile);
        if (*gen) return cmd_gen(gcfg, gen_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const InstabilityError& e) {
        std::cerr << "error: unstable: " << e.what() << '\n';
        return kUnstable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
