#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fifonc/experiment.hpp"
#include "fifonc/io.hpp"
#include "fifonc/scenario.hpp"

using namespace fifonc;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(FIFONC_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string golden(const char* name) { return std::string(FIFONC_GOLDEN_DIR) + "/" + name; }

std::string temp(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("solve all on the first worked example") {
    const auto r = run("solve " + golden("e1.json") + " -m all");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    REQUIRE(j.size() == 3);
    for (const auto& res : j) {
        CHECK(res["theta"].get<double>() == doctest::Approx(1.0 / 3));
        CHECK(res["backlog"].get<double>() == doctest::Approx(4.0 / 3));
    }
    CHECK(j[0]["method"] == "exact");
    CHECK(j[1]["method"] == "heuristic");
    CHECK(j[1].contains("trace"));
    CHECK(j[2]["method"] == "disco");
}

TEST_CASE("solve exact on the second worked example") {
    const auto r = run("solve " + golden("e2.json") + " -m exact");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["theta"].get<double>() == doctest::Approx(0.6));
    CHECK(j["backlog"].get<double>() == doctest::Approx(3.4));
    CHECK(j["h_lower"].get<double>() == doctest::Approx(1.0 / 3));
}

TEST_CASE("solve output equals the library bound") {
    const auto sc = load_scenario(golden("gen_n3_f4_seed7_it3.json"));
    for (const char* m : {"exact", "heuristic", "disco"}) {
        const auto r = run("solve " + golden("gen_n3_f4_seed7_it3.json") + " -m " + m);
        REQUIRE(r.code == 0);
        const auto j = json::parse(r.out);
        CHECK(j["backlog"].get<double>() == backlog_bound(sc.input(), j["theta"].get<double>()));
    }
}

TEST_CASE("solve error exits") {
    auto r = run("solve " + golden("malformed.json"));
    CHECK(r.code == 2);
    CHECK(r.out.find("foi.segments[0].rate") != std::string::npos);
    r = run("solve " + golden("unstable.json"));
    CHECK(r.code == 3);
    r = run("solve /nonexistent.json");
    CHECK(r.code == 2);
    r = run("solve " + golden("e1.json") + " -m fastest");
    CHECK(r.code != 0);
}

TEST_CASE("gen matches the golden scenario") {
    const auto r = run("gen --n-cross 2 --seed 42");
    REQUIRE(r.code == 0);
    std::ifstream in(golden("gen_n2_seed42.json"));
    CHECK(json::parse(r.out) == json::parse(in));
}

TEST_CASE("experiment and report") {
    const auto rows = temp("fifonc_cli_rows.csv");
    const auto seg = temp("fifonc_cli_seg.csv");
    const auto summary = temp("fifonc_cli_summary.csv");
    auto r = run("experiment --iterations 5 --seed 1 -o " + rows + " --segregation-out " + seg);
    REQUIRE(r.code == 0);
    std::ifstream in(rows);
    const auto parsed = read_rows_csv(in);
    CHECK(parsed.size() == 135);

    r = run("report " + rows + " --segregation " + seg + " -o " + summary);
    CHECK(r.code == 0);
    CHECK(std::filesystem::file_size(summary) > 0);

    std::ofstream(rows) << "not,a,csv\n";
    r = run("report " + rows);
    CHECK(r.code == 2);
    std::remove(rows.c_str());
    std::remove(seg.c_str());
    std::remove(summary.c_str());
}

TEST_CASE("oracle on the second worked example") {
    auto r = run("oracle " + golden("e2.json"));
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["best_backlog"].get<double>() == doctest::Approx(3.4).epsilon(1e-2));
    CHECK(j["best_theta"].get<double>() == doctest::Approx(0.6).epsilon(1e-2));

    r = run("oracle " + golden("e1.json") + " --theta-step 100");
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["samples"] == 1);
    CHECK(j["best_theta"].get<double>() == doctest::Approx(1.0 / 3));
}
