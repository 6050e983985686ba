#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fifonc/exact.hpp"

namespace fifonc {

struct ExperimentConfig {
    int iterations = 500;
    int cross_min = 2;
    int cross_max = 10;
    int foi_segments = 2;
    std::uint64_t seed = 1;
    bool segregation = false;
    int workers = 1;
    int timing_repeats = 10;
};

struct ExperimentRow {
    int iteration = 0;
    int n_cross = 0;
    int foi_segments = 0;
    Method method = Method::exact;
    Time theta = 0.0;
    Data backlog = 0.0;
    double cpu_time_us = 0.0;
};

struct SegregationRow {
    int iteration = 0;
    int n_cross = 0;
    Data q_agg = 0.0;
    Data sum_exact = 0.0;
    Data sum_disco = 0.0;
    double penalty_exact = 0.0;
    double penalty_disco = 0.0;
};

struct ExperimentOutput {
    std::vector<ExperimentRow> rows;
    std::vector<SegregationRow> segregation;
};

struct SummaryRow {
    int n_cross = 0;
    int samples = 0;
    double mean_exact = 0.0;
    double ci95_exact = 0.0;
    double mean_heur = 0.0;
    double ci95_heur = 0.0;
    double mean_disco = 0.0;
    double ci95_disco = 0.0;
    double accuracy_pct = 0.0;
    double increase_pct = 0.0;
    double ci95_increase = 0.0;
    double t_exact_ms = 0.0;  // summed over iterations
    double t_heur_ms = 0.0;
    double t_exact_mean_us = 0.0;
    double t_heur_mean_us = 0.0;
    double speedup = 0.0;
    double disco_ratio = 0.0;
    double penalty_exact = 0.0;  // NaN without segregation data
    double penalty_disco = 0.0;
    double ci95_penalty_exact = 0.0;
    double ci95_penalty_disco = 0.0;
};

inline constexpr const char* kRowsHeader = "iteration,n_cross,foi_segments,method,theta,backlog,cpu_time_us";
inline constexpr const char* kSegregationHeader =
    "iteration,n_cross,q_agg,sum_exact,sum_disco,penalty_exact,penalty_disco";

// Worker count from FIFONC_WORKERS, 1 when unset or invalid.
int workers_from_env();

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Mean and 1.96 sigma / sqrt(N) half width.
std::pair<double, double> mean_ci95(const std::vector<double>& xs);
bool same_bound(Data heuristic, Data exact);

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows,
                                  const std::vector<SegregationRow>& segregation = {});

void write_rows_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);
void write_segregation_csv(std::ostream& os, const std::vector<SegregationRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
void write_summary_text(std::ostream& os, const std::vector<SummaryRow>& rows);

// Throw ParseError naming the line on malformed input.
std::vector<ExperimentRow> read_rows_csv(std::istream& is);
std::vector<SegregationRow> read_segregation_csv(std::istream& is);

}  // namespace fifonc
