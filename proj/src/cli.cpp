#include "conehull/cli.hpp"

#include <atomic>
#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "conehull/eraser.hpp"
#include "conehull/experiments.hpp"
#include "conehull/oracle.hpp"
#include "conehull/svg.hpp"

namespace conehull {

namespace {

double parse_plain_number(const std::string& text) {
    if (text == "inf" || text == "unbounded") return kUnboundedHeight;
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad number: " + text);
    return v;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

Frame parse_frame(const std::string& text) {
    double v[4];
    int n = 0;
    std::size_t pos = 0;
    while (pos <= text.size() && n < 4) {
        const std::size_t comma = text.find(',', pos);
        v[n++] = parse_plain_number(
            text.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (n != 4) throw std::invalid_argument("frame needs xmin,xmax,ymin,ymax");
    return Frame{v[0], v[1], v[2], v[3]};
}

Frame frame_of_points(const Sample& sample) {
    Frame f{sample.points[0].x, sample.points[0].x, sample.points[0].y, sample.points[0].y};
    for (const Point& p : sample.points) {
        f.xmin = std::min(f.xmin, p.x);
        f.xmax = std::max(f.xmax, p.x);
        f.ymin = std::min(f.ymin, p.y);
        f.ymax = std::max(f.ymax, p.y);
    }
    // Guard against degenerate extents so the frame stays a rectangle.
    const double pad_x = f.width() > 0 ? 0.0 : 0.5;
    const double pad_y = f.height() > 0 ? 0.0 : 0.5;
    f.xmin -= pad_x;
    f.xmax += pad_x;
    f.ymin -= pad_y;
    f.ymax += pad_y;
    return f;
}

EraseMode parse_mode(const std::string& text) {
    if (text == "paper") return EraseMode::PaperLiteral;
    if (text == "extended") return EraseMode::Extended;
    throw CLI::ValidationError("--mode", "expected 'paper' or 'extended'");
}

int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

struct CommonFlags {
    std::uint64_t seed = 1;
    int threads = default_threads();
    std::string out = "out";
};

int cmd_estimate(const CommonFlags& common, const std::string& input, const std::string& shape_name,
                 int n, const std::string& rho_text, const std::string& h_text, double r,
                 std::uint32_t target, const std::string& mode_text, const std::string& axis_min,
                 const std::string& axis_max, const std::string& frame_text, bool rescale,
                 std::uint64_t max_attempts) {
    Sample sample;
    Frame frame;
    if (!input.empty()) {
        sample = load_points(input, rescale);
        frame = frame_text.empty() ? frame_of_points(sample) : parse_frame(frame_text);
    } else {
        const Shape shape = shape_by_name(shape_name, common.seed);
        frame = frame_text.empty() ? shape.bounding_box : parse_frame(frame_text);
        RandomStream rng(RandomStream::derive(common.seed, 0x5A));
        sample = sample_uniform(shape, n, rng);
    }

    ErasedRegion region = [&] {
        if (r > 0.0) {
            return run_ball_eraser(sample, frame, r, target, max_attempts, common.seed);
        }
        EraserConfig cfg;
        cfg.rho = parse_angle(rho_text);
        cfg.h = parse_plain_number(h_text);
        cfg.target_erasures = target;
        cfg.max_attempts_per_erasure = max_attempts;
        cfg.mode = parse_mode(mode_text);
        if (!axis_min.empty() || !axis_max.empty()) {
            if (axis_min.empty() || axis_max.empty()) {
                throw CLI::ValidationError("--axis-min/--axis-max", "both endpoints required");
            }
            cfg.axis_min = parse_angle(axis_min);
            cfg.axis_max = parse_angle(axis_max);
        }
        cfg.seed = common.seed;
        return run_eraser(sample, frame, cfg);
    }();

    write_region_json(region, common.out + ".region.json");
    write_svg(region, sample, common.out + ".svg");
    if (region.early_stop()) {
        std::cerr << "early stop: only " << region.erasures() << " erasures after "
                  << region.attempts() << " attempts; outputs written\n";
        return 2;
    }
    std::cout << common.out << ".region.json " << common.out << ".svg (" << region.erasures()
              << " erasures, " << region.attempts() << " attempts)\n";
    return 0;
}

int cmd_table1(const CommonFlags& common, int runs, const std::string& n_list,
               std::int64_t mc_budget, std::uint32_t target, const std::string& mode_text,
               const std::string& frame_text) {
    Table1Config cfg;
    cfg.runs = runs;
    cfg.n_list = parse_int_list(n_list);
    cfg.mc_budget = mc_budget;
    cfg.seed = common.seed;
    cfg.threads = common.threads;
    cfg.target_erasures = target;
    cfg.mode = parse_mode(mode_text);
    if (!frame_text.empty()) cfg.frame = parse_frame(frame_text);
    const ExperimentReport report = run_table_one(cfg);
    write_text_file(common.out + ".csv", report_to_csv(report));
    write_text_file(common.out + ".raw.csv", report_raw_csv(report));
    write_text_file(common.out + ".json", report_to_json(report));
    std::cout << report_to_csv(report);
    for (const CellResult& cell : report.cells) {
        if (!cell.failure.empty()) {
            std::cerr << "cell (" << cell.spec.estimator << ", n=" << cell.spec.n
                      << ") had failures: " << cell.failure << "\n";
        }
    }
    return 0;
}

int cmd_rates(const CommonFlags& common, const std::string& metric_text, const std::string& shape,
              const std::string& rho_text, const std::string& h_text, const std::string& n_list,
              int runs, std::uint32_t fixed_n, double n_factor, std::int64_t mc_budget, int grid,
              const std::string& mode_text) {
    RatesConfig cfg;
    if (metric_text == "measure") cfg.metric = RateMetric::Measure;
    else if (metric_text == "hausdorff") cfg.metric = RateMetric::Hausdorff;
    else if (metric_text == "boundary") cfg.metric = RateMetric::Boundary;
    else throw CLI::ValidationError("--metric", "expected measure, hausdorff or boundary");
    cfg.shape = shape;
    cfg.rho = parse_angle(rho_text);
    cfg.h = parse_plain_number(h_text);
    cfg.n_list = parse_int_list(n_list);
    cfg.runs = runs;
    if (n_factor > 0.0) {
        cfg.policy = ErasurePolicy::ProportionalToN;
        cfg.erasures_per_point = n_factor;
    } else {
        cfg.policy = ErasurePolicy::Fixed;
        cfg.fixed_erasures = fixed_n;
    }
    cfg.mc_budget = mc_budget;
    cfg.grid_resolution = grid;
    cfg.seed = common.seed;
    cfg.threads = common.threads;
    cfg.mode = parse_mode(mode_text);

    const RatesOutput out = run_rates(cfg);
    write_text_file(common.out + ".csv", report_to_csv(out.report));
    write_text_file(common.out + ".raw.csv", report_raw_csv(out.report));
    write_text_file(common.out + ".json", report_to_json(out.report));

    nlohmann::ordered_json fit;
    fit["metric"] = metric_text;
    fit["regressor"] = cfg.metric == RateMetric::Measure ? "log(n)" : "log(log(n)/n)";
    fit["sampleSizes"] = out.fit.sample_sizes;
    fit["meanErrors"] = out.fit.mean_errors;
    fit["slope"] = out.fit.slope;
    fit["intercept"] = out.fit.intercept;
    fit["r2"] = out.fit.r2;
    write_text_file(common.out + ".fit.json", fit.dump(2) + "\n");
    char line[160];
    std::snprintf(line, sizeof(line), "%s fit: slope %.4f intercept %.4f r2 %.4f\n",
                  metric_text.c_str(), out.fit.slope, out.fit.intercept, out.fit.r2);
    std::cout << line;
    return 0;
}

int cmd_oracle_check(const CommonFlags& common, const std::string& rho_text,
                     const std::string& h_text, std::int64_t trials) {
    const double rho = parse_angle(rho_text);
    const double h = parse_plain_number(h_text);
    require_cone_params(rho, h);

    bool all_pass = true;

    const UnavoidableFamily family = build_unavoidable_family(Point{0.0, 0.0}, rho, h);
    const double fraction =
        check_unavoidability(family, rho, h, trials, common.seed, common.threads);
    const bool unavoidable_ok = fraction >= 1.0 - 1e-4;
    std::printf("unavoidability: fraction %.6f over %lld trials (k=%zu) %s\n", fraction,
                static_cast<long long>(trials), family.cardinality(),
                unavoidable_ok ? "PASS" : "FAIL");
    all_pass = all_pass && unavoidable_ok;

    // Certificate coverage on a seeded eraser run over the s1 target.
    const Shape target = table_one_set();
    RandomStream sample_rng(RandomStream::derive(common.seed, 0xC0));
    const Sample sample = sample_uniform(target, 1200, sample_rng);
    EraserConfig cfg;
    cfg.rho = rho;
    cfg.h = h;
    cfg.target_erasures = 200;
    cfg.seed = RandomStream::derive(common.seed, 0xC1);
    const ErasedRegion region = run_eraser(sample, target.bounding_box, cfg);

    const std::int64_t points = std::max<std::int64_t>(1, std::min<std::int64_t>(trials / 10, 1000));
    RandomStream probe_rng(RandomStream::derive(common.seed, 0xC2));
    std::vector<Point> probes;
    while (static_cast<std::int64_t>(probes.size()) < points) {
        const Point p = probe_rng.point_in(region.frame());
        if (!region.contains(p)) probes.push_back(p);
    }
    std::atomic<std::int64_t> covered{0};
    parallel_for(points, common.threads, [&](std::int64_t i) {
        const SeparationCertificate cert =
            separation_oracle(sample, probes[static_cast<std::size_t>(i)], rho, h, h / 50, 720);
        if (cert.found()) covered.fetch_add(1);
    });
    const bool cert_ok = covered.load() == points;
    std::printf("certificates: %lld/%lld erased points covered %s\n",
                static_cast<long long>(covered.load()), static_cast<long long>(points),
                cert_ok ? "PASS" : "FAIL");
    all_pass = all_pass && cert_ok;

    return all_pass ? 0 : 3;
}

int cmd_render(const std::string& region_path, const std::string& points_path, bool rescale,
               const std::string& out_path) {
    const ErasedRegion region = read_region_json(region_path);
    Sample sample;
    if (!points_path.empty()) sample = load_points(points_path, rescale);
    write_svg(region, sample, out_path);
    std::cout << out_path << "\n";
    return 0;
}

}  // namespace

double parse_angle(const std::string& text) {
    const std::size_t pi_pos = text.find("pi");
    if (pi_pos == std::string::npos) return parse_plain_number(text);
    const std::string mult = text.substr(0, pi_pos);
    double value = kPi * (mult.empty() ? 1.0 : parse_plain_number(mult));
    const std::string rest = text.substr(pi_pos + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') throw std::invalid_argument("bad angle literal: " + text);
        value /= parse_plain_number(rest.substr(1));
    }
    return value;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"cone-convex hull estimation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    // --h is a domain flag, so help must not grab the short form.
    app.set_help_flag("--help", "print help");

    CommonFlags common;
    app.add_option("--seed", common.seed, "master seed");
    app.add_option("--threads", common.threads, "worker threads for replications");
    app.add_option("--out", common.out, "output path prefix (or file for render)");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "one estimation run with JSON + SVG output");
    estimate->set_help_flag("--help", "print help");
    std::string input, shape_name = "s1", rho_text, h_text, mode_text = "extended";
    std::string axis_min, axis_max, frame_text;
    int n = 500;
    double r = 0.0;
    std::uint32_t target = 200;
    std::uint64_t max_attempts = 100000;
    bool rescale = false;
    estimate->add_option("--input", input, "point CSV to estimate from");
    estimate->add_option("--shape", shape_name, "named target set to sample");
    estimate->add_option("--n", n, "sample size when sampling a shape");
    auto* rho_opt = estimate->add_option("--rho", rho_text, "cone opening (radians, pi/4 style ok)");
    auto* h_opt = estimate->add_option("--h", h_text, "cone height");
    estimate->add_option("--r", r, "ball radius; selects the spherical eraser");
    estimate->add_option("--N", target, "number of successful erasures");
    estimate->add_option("--mode", mode_text, "paper | extended");
    estimate->add_option("--axis-min", axis_min, "axis interval lower endpoint (radians)");
    estimate->add_option("--axis-max", axis_max, "axis interval upper endpoint (radians)");
    estimate->add_option("--frame", frame_text, "xmin,xmax,ymin,ymax");
    estimate->add_option("--max-attempts", max_attempts, "attempt guard per erasure");
    estimate->add_flag("--rescale", rescale, "map input points onto the unit square");

    // table1
    auto* table1 = app.add_subcommand("table1", "replicated error table on the s1 target");
    table1->set_help_flag("--help", "print help");
    int runs = 100;
    std::string n_list = "200,400,600,800,1000,1200";
    std::int64_t mc_budget = 4000;
    std::uint32_t t1_target = 200;
    std::string t1_mode = "extended", t1_frame;
    table1->add_option("--runs", runs, "replications per cell");
    table1->add_option("--n-list", n_list, "comma-separated sample sizes");
    table1->add_option("--mc", mc_budget, "Monte Carlo points per error estimate");
    table1->add_option("--N", t1_target, "erasures per run");
    table1->add_option("--mode", t1_mode, "paper | extended");
    table1->add_option("--frame", t1_frame, "eraser vertex frame, xmin,xmax,ymin,ymax");

    // rates
    auto* rates = app.add_subcommand("rates", "convergence-rate experiment with log-log fit");
    rates->set_help_flag("--help", "print help");
    std::string metric_text = "measure", rates_shape = "s1", rates_rho = "pi/5", rates_h = "0.5";
    std::string rates_n_list = "200,400,800,1600,3200", rates_mode = "extended";
    int rates_runs = 50, grid = 512;
    std::uint32_t rates_fixed_n = 200;
    double rates_n_factor = 0.0;
    std::int64_t rates_mc = 100000;
    rates->add_option("--metric", metric_text, "measure | hausdorff | boundary");
    rates->add_option("--shape", rates_shape, "target set");
    rates->add_option("--rho", rates_rho, "cone opening");
    rates->add_option("--h", rates_h, "cone height");
    rates->add_option("--n-list", rates_n_list, "comma-separated sample sizes");
    rates->add_option("--runs", rates_runs, "replications per sample size");
    rates->add_option("--N", rates_fixed_n, "fixed erasure count");
    rates->add_option("--N-factor", rates_n_factor, "erasures per sample point (overrides --N)");
    rates->add_option("--mc", rates_mc, "Monte Carlo budget for the measure metric");
    rates->add_option("--grid", grid, "grid resolution for Hausdorff metrics");
    rates->add_option("--mode", rates_mode, "paper | extended");

    // oracle-check
    auto* oracle_check = app.add_subcommand("oracle-check", "certificate and unavoidability suites");
    oracle_check->set_help_flag("--help", "print help");
    std::string oc_rho = "pi/5", oc_h = "0.5";
    std::int64_t trials = 10000;
    oracle_check->add_option("--rho", oc_rho, "cone opening");
    oracle_check->add_option("--h", oc_h, "cone height");
    oracle_check->add_option("--trials", trials, "unavoidability trials");

    // render
    auto* render = app.add_subcommand("render", "re-render an SVG from a region JSON");
    render->set_help_flag("--help", "print help");
    std::string region_path, points_path;
    bool render_rescale = false;
    render->add_option("--region", region_path, "region JSON path")->required();
    render->add_option("--points", points_path, "optional point CSV to draw");
    render->add_flag("--rescale", render_rescale, "rescale the drawn points");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (estimate->parsed()) {
            if (input.empty() && shape_name.empty()) {
                std::cerr << "estimate: need --input or --shape\n";
                return 1;
            }
            if (r <= 0.0 && rho_opt->count() == 0) {
                std::cerr << "estimate: --rho is required for the cone eraser\n";
                return 1;
            }
            if (r <= 0.0 && h_opt->count() == 0) {
                std::cerr << "estimate: --h is required for the cone eraser\n";
                return 1;
            }
            return cmd_estimate(common, input, shape_name, n, rho_text, h_text, r, target,
                                mode_text, axis_min, axis_max, frame_text, rescale, max_attempts);
        }
        if (table1->parsed()) {
            return cmd_table1(common, runs, n_list, mc_budget, t1_target, t1_mode, t1_frame);
        }
        if (rates->parsed()) {
            return cmd_rates(common, metric_text, rates_shape, rates_rho, rates_h, rates_n_list,
                             rates_runs, rates_fixed_n, rates_n_factor, rates_mc, grid, rates_mode);
        }
        if (oracle_check->parsed()) {
            return cmd_oracle_check(common, oc_rho, oc_h, trials);
        }
        if (render->parsed()) {
            return cmd_render(region_path, points_path, render_rescale, common.out + ".svg");
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace conehull
