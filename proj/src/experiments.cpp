#include "conehull/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace conehull {

namespace {

using OrderedJson = nlohmann::ordered_json;

struct RunOutcome {
    double error = 0.0;
    double runtime_ms = 0.0;
    bool early_stop = false;
};

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

/// One replication: fresh sample, one estimator run (timed), one metric.
RunOutcome run_cell_once(const CellSpec& spec, const Shape& target, const Frame& frame,
                         std::int64_t mc_budget, EraseMode mode,
                         std::uint64_t max_attempts, RateMetric metric, int grid_resolution,
                         std::uint64_t run_seed) {
    RandomStream sample_rng(RandomStream::derive(run_seed, 1));
    const Sample sample = sample_uniform(target, spec.n, sample_rng);

    const auto t0 = std::chrono::steady_clock::now();
    ErasedRegion region = [&] {
        if (spec.estimator == "ball") {
            return run_ball_eraser(sample, frame, spec.r, spec.target_erasures, max_attempts,
                                   RandomStream::derive(run_seed, 2));
        }
        EraserConfig cfg;
        cfg.rho = spec.rho;
        cfg.h = spec.h;
        cfg.target_erasures = spec.target_erasures;
        cfg.max_attempts_per_erasure = max_attempts;
        cfg.mode = mode;
        cfg.seed = RandomStream::derive(run_seed, 2);
        return run_eraser(sample, frame, cfg);
    }();
    const auto t1 = std::chrono::steady_clock::now();

    RunOutcome out;
    out.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.early_stop = region.early_stop();

    const MembershipFn target_fn = target.membership;
    const MembershipFn region_fn = [&region](Point p) { return region.contains(p); };
    switch (metric) {
        case RateMetric::Measure: {
            RandomStream mc_rng(RandomStream::derive(run_seed, 3));
            out.error = measure_diff_mc(target_fn, region_fn, frame, mc_budget, mc_rng).value;
            break;
        }
        case RateMetric::Hausdorff:
            out.error = hausdorff_grid(target_fn, region_fn, GridSpec{frame, grid_resolution}).value;
            break;
        case RateMetric::Boundary:
            out.error =
                boundary_hausdorff_grid(target_fn, region_fn, GridSpec{frame, grid_resolution}).value;
            break;
    }
    return out;
}

CellResult run_cell(const CellSpec& spec, const Shape& target, const Frame& frame, int runs,
                    std::int64_t mc_budget, EraseMode mode, std::uint64_t max_attempts,
                    RateMetric metric, int grid_resolution, std::uint64_t master_seed,
                    std::uint64_t cell_index, int threads) {
    CellResult result;
    result.spec = spec;
    result.runs = runs;
    result.errors.resize(static_cast<std::size_t>(runs));
    result.runtimes_ms.resize(static_cast<std::size_t>(runs));
    std::vector<char> early(static_cast<std::size_t>(runs), 0);
    std::vector<std::string> failures(static_cast<std::size_t>(runs));

    parallel_for(runs, threads, [&](std::int64_t run) {
        const std::uint64_t run_seed = RandomStream::derive(master_seed, cell_index,
                                                            static_cast<std::uint64_t>(run));
        try {
            const RunOutcome outcome =
                run_cell_once(spec, target, frame, mc_budget, mode, max_attempts, metric,
                              grid_resolution, run_seed);
            result.errors[static_cast<std::size_t>(run)] = outcome.error;
            result.runtimes_ms[static_cast<std::size_t>(run)] = outcome.runtime_ms;
            early[static_cast<std::size_t>(run)] = outcome.early_stop ? 1 : 0;
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(run)] = e.what();
        }
    });

    std::vector<double> ok_errors, ok_runtimes;
    for (std::size_t run = 0; run < failures.size(); ++run) {
        if (!failures[run].empty()) {
            if (result.failure.empty()) result.failure = failures[run];
            continue;
        }
        ok_errors.push_back(result.errors[run]);
        ok_runtimes.push_back(result.runtimes_ms[run]);
    }
    if (!result.failure.empty()) {
        result.errors = ok_errors;
        result.runtimes_ms = ok_runtimes;
    }
    if (!ok_errors.empty()) {
        result.mean_error = mean_of(ok_errors);
        result.sd_error = sd_of(ok_errors, result.mean_error);
        result.mean_runtime_ms = mean_of(ok_runtimes);
    }
    for (char e : early) result.early_stops += e;
    return result;
}

void append_csv_row(std::string& out, const CellResult& cell) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.17g,%.17g,%.17g,%u,%d,%.17g,%.17g,%.17g,%d\n",
                  cell.spec.shape.c_str(), cell.spec.estimator.c_str(), cell.spec.n, cell.spec.rho,
                  cell.spec.h, cell.spec.r, cell.spec.target_erasures, cell.runs, cell.mean_error,
                  cell.sd_error, cell.mean_runtime_ms, cell.early_stops);
    out += buf;
}

void require_keys(const OrderedJson& obj, std::initializer_list<const char*> known,
                  const char* where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (item.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::runtime_error(std::string("report JSON: unknown field \"") + item.key() +
                                     "\" in " + where);
        }
    }
}

}  // namespace

OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("ols_fit: need two equally sized lists of length >= 2");
    }
    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate regressor");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    threads = std::max(1, threads);
    if (static_cast<std::int64_t>(threads) > count) threads = static_cast<int>(count);
    if (threads <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

Shape shape_by_name(const std::string& name, std::uint64_t seed) {
    if (name == "s1" || name == "table1") return table_one_set();
    if (name == "triangle-notch") return triangle_notch_set();
    if (name == "star" || name == "eight-triangle-star") return eight_triangle_star();
    if (name == "brownian") {
        RandomStream rng(RandomStream::derive(seed, 0xB0));
        return brownian_hypograph(1000, rng);
    }
    throw std::invalid_argument("unknown shape: " + name +
                                " (expected s1, triangle-notch, star or brownian)");
}

ExperimentReport run_table_one(const Table1Config& config) {
    if (config.runs < 1) throw std::invalid_argument("table1: runs must be >= 1");
    const Shape target = table_one_set();
    const double rho0 = table_one_rho0();

    ExperimentReport report;
    report.seed = config.seed;
    report.mc_budget = config.mc_budget;

    std::uint64_t cell_index = 0;
    for (int n : config.n_list) {
        std::vector<CellSpec> specs(4);
        specs[0] = CellSpec{"s1", "cone", n, rho0, 1.0 / 3.0, 0.0, config.target_erasures};
        specs[1] = CellSpec{"s1", "ball", n, 0.0, 0.0, 0.25, config.target_erasures};
        specs[2] = CellSpec{"s1", "cone", n, kPi / 5, 0.5, 0.0, config.target_erasures};
        specs[3] = CellSpec{"s1", "ball", n, 0.0, 0.0, 1.0 / 6.0, config.target_erasures};
        for (const CellSpec& spec : specs) {
            report.cells.push_back(run_cell(spec, target, config.frame, config.runs,
                                            config.mc_budget, config.mode,
                                            config.max_attempts_per_erasure, RateMetric::Measure,
                                            512, config.seed, cell_index, config.threads));
            ++cell_index;
        }
    }
    return report;
}

RatesOutput run_rates(const RatesConfig& config) {
    if (config.runs < 1) throw std::invalid_argument("rates: runs must be >= 1");
    if (config.n_list.size() < 3) throw std::invalid_argument("rates: need >= 3 sample sizes");
    const Shape target = shape_by_name(config.shape, config.seed);
    const Frame frame = target.bounding_box;

    RatesOutput out;
    out.report.seed = config.seed;
    out.report.mc_budget = config.mc_budget;

    std::uint64_t cell_index = 0;
    for (int n : config.n_list) {
        CellSpec spec;
        spec.shape = config.shape;
        spec.estimator = "cone";
        spec.n = n;
        spec.rho = config.rho;
        spec.h = config.h;
        spec.target_erasures =
            config.policy == ErasurePolicy::Fixed
                ? config.fixed_erasures
                : std::max<std::uint32_t>(
                      1, static_cast<std::uint32_t>(std::lround(config.erasures_per_point * n)));
        out.report.cells.push_back(run_cell(spec, target, frame, config.runs, config.mc_budget,
                                            config.mode, 100000, config.metric,
                                            config.grid_resolution, config.seed, cell_index,
                                            config.threads));
        out.fit.sample_sizes.push_back(n);
        out.fit.mean_errors.push_back(out.report.cells.back().mean_error);
        ++cell_index;
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < out.fit.sample_sizes.size(); ++i) {
        const double n = static_cast<double>(out.fit.sample_sizes[i]);
        xs.push_back(config.metric == RateMetric::Measure ? std::log(n) : std::log(std::log(n) / n));
        ys.push_back(std::log(out.fit.mean_errors[i]));
    }
    const OlsFit fit = ols_fit(xs, ys);
    out.fit.slope = fit.slope;
    out.fit.intercept = fit.intercept;
    out.fit.r2 = fit.r2;
    return out;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out = "shape,estimator,n,rho,h,r,N,runs,mean_error,sd_error,mean_runtime_ms,early_stops\n";
    for (const CellResult& cell : report.cells) append_csv_row(out, cell);
    return out;
}

std::string report_raw_csv(const ExperimentReport& report) {
    std::string out = "shape,estimator,n,rho,h,r,N,run,error,runtime_ms\n";
    char buf[224];
    for (const CellResult& cell : report.cells) {
        for (std::size_t run = 0; run < cell.errors.size(); ++run) {
            std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.17g,%.17g,%.17g,%u,%zu,%.17g,%.17g\n",
                          cell.spec.shape.c_str(), cell.spec.estimator.c_str(), cell.spec.n,
                          cell.spec.rho, cell.spec.h, cell.spec.r, cell.spec.target_erasures, run,
                          cell.errors[run], cell.runtimes_ms[run]);
            out += buf;
        }
    }
    return out;
}

std::string report_to_json(const ExperimentReport& report) {
    OrderedJson doc;
    doc["schema"] = report.schema;
    doc["version"] = report.version;
    doc["seed"] = report.seed;
    doc["mcBudget"] = report.mc_budget;
    doc["cells"] = OrderedJson::array();
    for (const CellResult& cell : report.cells) {
        OrderedJson jc;
        jc["shape"] = cell.spec.shape;
        jc["estimator"] = cell.spec.estimator;
        jc["n"] = cell.spec.n;
        jc["rho"] = cell.spec.rho;
        jc["h"] = cell.spec.h;
        jc["r"] = cell.spec.r;
        jc["N"] = cell.spec.target_erasures;
        jc["runs"] = cell.runs;
        jc["meanError"] = cell.mean_error;
        jc["sdError"] = cell.sd_error;
        jc["meanRuntimeMs"] = cell.mean_runtime_ms;
        jc["earlyStops"] = cell.early_stops;
        jc["failure"] = cell.failure;
        jc["errors"] = cell.errors;
        jc["runtimesMs"] = cell.runtimes_ms;
        doc["cells"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
    const OrderedJson doc = OrderedJson::parse(text);
    require_keys(doc, {"schema", "version", "seed", "mcBudget", "cells"}, "report");
    ExperimentReport report;
    report.schema = doc.at("schema").get<int>();
    if (report.schema != kReportSchema) {
        throw std::runtime_error("report JSON: unsupported schema version");
    }
    report.version = doc.at("version").get<std::string>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    report.mc_budget = doc.at("mcBudget").get<std::int64_t>();
    for (const auto& jc : doc.at("cells")) {
        require_keys(jc,
                     {"shape", "estimator", "n", "rho", "h", "r", "N", "runs", "meanError",
                      "sdError", "meanRuntimeMs", "earlyStops", "failure", "errors", "runtimesMs"},
                     "cell");
        CellResult cell;
        cell.spec.shape = jc.at("shape").get<std::string>();
        cell.spec.estimator = jc.at("estimator").get<std::string>();
        cell.spec.n = jc.at("n").get<int>();
        cell.spec.rho = jc.at("rho").get<double>();
        cell.spec.h = jc.at("h").get<double>();
        cell.spec.r = jc.at("r").get<double>();
        cell.spec.target_erasures = jc.at("N").get<std::uint32_t>();
        cell.runs = jc.at("runs").get<int>();
        cell.mean_error = jc.at("meanError").get<double>();
        cell.sd_error = jc.at("sdError").get<double>();
        cell.mean_runtime_ms = jc.at("meanRuntimeMs").get<double>();
        cell.early_stops = jc.at("earlyStops").get<int>();
        cell.failure = jc.at("failure").get<std::string>();
        cell.errors = jc.at("errors").get<std::vector<double>>();
        cell.runtimes_ms = jc.at("runtimesMs").get<std::vector<double>>();
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace conehull
