#pragma once

/// \file
/// \brief Replicated simulation harness: error-table reproduction,
/// convergence-rate fits, CSV/JSON reports with raw per-run values.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conehull/eraser.hpp"
#include "conehull/metrics.hpp"
#include "conehull/shapes.hpp"

namespace conehull {

inline constexpr const char* kVersionText = "conehull 1.0.0";
inline constexpr int kReportSchema = 1;

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares of ys on xs.
OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// Runs fn(0..count-1) across a worker pool; results must be written to
/// per-index slots so the outcome is independent of scheduling.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn);

/// Resolves a named test set. The Brownian hypograph derives its path from
/// the seed, so one experiment sees one fixed target.
Shape shape_by_name(const std::string& name, std::uint64_t seed);

struct CellSpec {
    std::string shape = "s1";
    std::string estimator = "cone";   // "cone" | "ball"
    int n = 200;
    double rho = 0.0;                 // cone parameters (0 when ball)
    double h = 0.0;
    double r = 0.0;                   // ball radius (0 when cone)
    std::uint32_t target_erasures = 200;
};

struct CellResult {
    CellSpec spec;
    int runs = 0;
    double mean_error = 0.0;
    double sd_error = 0.0;
    double mean_runtime_ms = 0.0;
    int early_stops = 0;
    std::string failure;               // empty when all replications completed
    std::vector<double> errors;        // raw per-run values
    std::vector<double> runtimes_ms;
};

struct ExperimentReport {
    int schema = kReportSchema;
    std::string version = kVersionText;
    std::uint64_t seed = 0;
    std::int64_t mc_budget = 0;
    std::vector<CellResult> cells;
};

struct Table1Config {
    int runs = 100;
    std::vector<int> n_list = {200, 400, 600, 800, 1000, 1200};
    std::int64_t mc_budget = 4000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::uint32_t target_erasures = 200;
    std::uint64_t max_attempts_per_erasure = 100000;
    EraseMode mode = EraseMode::Extended;
    Frame frame = Frame{0.0, 1.0, 0.0, 1.0};
};

/// The four estimator columns of the error table on the s1 target:
/// cones (rho0, h=1/3) and (pi/5, h=1/2), balls r=1/4 and r=1/6.
ExperimentReport run_table_one(const Table1Config& config);

enum class RateMetric { Measure, Hausdorff, Boundary };
enum class ErasurePolicy { Fixed, ProportionalToN };

struct RatesConfig {
    RateMetric metric = RateMetric::Measure;
    std::string shape = "s1";
    double rho = kPi / 5;
    double h = 0.5;
    std::vector<int> n_list = {200, 400, 800, 1600, 3200};
    int runs = 50;
    ErasurePolicy policy = ErasurePolicy::ProportionalToN;
    std::uint32_t fixed_erasures = 200;
    double erasures_per_point = 0.5;
    std::int64_t mc_budget = 100000;
    int grid_resolution = 512;
    std::uint64_t seed = 1;
    int threads = 1;
    EraseMode mode = EraseMode::Extended;
};

struct RateFit {
    std::vector<int> sample_sizes;
    std::vector<double> mean_errors;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct RatesOutput {
    RateFit fit;
    ExperimentReport report;
};

/// Per-n mean errors plus an OLS fit of log(mean error): against log n for
/// the measure metric, against log(log n / n) for the Hausdorff metrics.
RatesOutput run_rates(const RatesConfig& config);

/// Fixed column order:
/// shape,estimator,n,rho,h,r,N,runs,mean_error,sd_error,mean_runtime_ms,early_stops
std::string report_to_csv(const ExperimentReport& report);

/// Raw per-run values, one row per replication.
std::string report_raw_csv(const ExperimentReport& report);

std::string report_to_json(const ExperimentReport& report);

/// Parses a report document, rejecting unknown fields and schema mismatches.
ExperimentReport report_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace conehull
