#include "conehull/eraser.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conehull {

namespace {

struct Bounds {
    double xmin, xmax, ymin, ymax;
};

Bounds sector_bounds(const Sector& s) {
    const double a0 = s.start_dir.angle();
    Bounds b{s.vertex.x, s.vertex.x, s.vertex.y, s.vertex.y};
    auto grow = [&b](Point p) {
        b.xmin = std::min(b.xmin, p.x);
        b.xmax = std::max(b.xmax, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.ymax = std::max(b.ymax, p.y);
    };
    grow(s.vertex + s.radius * Point{s.start_dir.x, s.start_dir.y});
    grow(s.vertex + s.radius * Point{s.end_dir.x, s.end_dir.y});
    // Cardinal directions covered by the angular interval are arc extremes;
    // a0 + span reaches 3*pi for reflex sectors anchored near +pi.
    for (int k = -6; k <= 6; ++k) {
        const double cardinal = k * kPi / 2;
        const double offset = cardinal - a0;
        if (offset >= 0.0 && offset <= s.span) {
            grow(s.vertex + s.radius * Point{std::cos(cardinal), std::sin(cardinal)});
        }
    }
    return b;
}

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

ErasedRegion::ErasedRegion(const Frame& frame) : ErasedRegion(frame, RegionProvenance{}) {}

ErasedRegion::ErasedRegion(const Frame& frame, const RegionProvenance& provenance)
    : frame_(frame), provenance_(provenance) {
    index_.resize(static_cast<std::size_t>(kIndexResolution) * kIndexResolution);
    inv_dx_ = kIndexResolution / frame_.width();
    inv_dy_ = kIndexResolution / frame_.height();
}

std::size_t ErasedRegion::cell_of(Point p) const {
    int ix = static_cast<int>((p.x - frame_.xmin) * inv_dx_);
    int iy = static_cast<int>((p.y - frame_.ymin) * inv_dy_);
    ix = std::clamp(ix, 0, kIndexResolution - 1);
    iy = std::clamp(iy, 0, kIndexResolution - 1);
    return static_cast<std::size_t>(iy) * kIndexResolution + static_cast<std::size_t>(ix);
}

bool ErasedRegion::contains(Point p) const {
    if (!frame_.contains(p)) return false;
    for (std::uint32_t idx : index_[cell_of(p)]) {
        if (sector_contains(sectors_[idx], p)) return false;
    }
    return true;
}

void ErasedRegion::append(const Sector& sector) {
    const auto id = static_cast<std::uint32_t>(sectors_.size());
    sectors_.push_back(sector);
    const Bounds b = sector_bounds(sector);
    int ix0 = static_cast<int>((b.xmin - frame_.xmin) * inv_dx_);
    int ix1 = static_cast<int>((b.xmax - frame_.xmin) * inv_dx_);
    int iy0 = static_cast<int>((b.ymin - frame_.ymin) * inv_dy_);
    int iy1 = static_cast<int>((b.ymax - frame_.ymin) * inv_dy_);
    ix0 = std::clamp(ix0, 0, kIndexResolution - 1);
    ix1 = std::clamp(ix1, 0, kIndexResolution - 1);
    iy0 = std::clamp(iy0, 0, kIndexResolution - 1);
    iy1 = std::clamp(iy1, 0, kIndexResolution - 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            index_[static_cast<std::size_t>(iy) * kIndexResolution + static_cast<std::size_t>(ix)]
                .push_back(id);
        }
    }
}

Candidate draw_candidate(const Frame& frame, const EraserConfig& config, RandomStream& rng) {
    Candidate c;
    c.vertex = rng.point_in(frame);
    if (config.axis_min.has_value()) {
        c.axis_angle = rng.uniform(*config.axis_min, *config.axis_max);
    } else {
        c.axis_angle = rng.uniform(0.0, 2 * kPi);
    }
    c.axis = UnitVec::from_angle(c.axis_angle);
    return c;
}

SweepResult max_sweep(const Sample& sample, Point vertex, UnitVec axis, double rho, double h) {
    require_cone_params(rho, h);
    const double half = rho / 2;
    const double cos_half = std::cos(half);
    SweepResult sw;
    for (const Point& p : sample.points) {
        const Point d = p - vertex;
        const double r2 = squared_norm(d);
        if (r2 <= 0.0 || !(r2 < h * h)) continue;
        const double r = std::sqrt(r2);
        const UnitVec u{d.x / r, d.y / r};
        if (dot(axis, u) > cos_half) throw SeedConeNotEmptyError{};
        const double phi = signed_angle(axis, u);
        // Rotating clockwise by theta, the cone covers relative angles
        // (-theta-rho/2, -theta+rho/2); the point blocks theta in (a, b).
        const double a = -phi - half;
        const double b = -phi + half;
        if (a >= 0.0) {
            sw.theta_cw = std::min(sw.theta_cw, a);
        } else if (b <= 0.0) {
            sw.theta_ccw = std::max(sw.theta_ccw, b);
        } else {
            // a < 0 < b yet the dot-product test said "outside": the point
            // sits on the seed cone's boundary up to rounding. It blocks any
            // rotation towards it.
            if (phi <= 0.0) sw.theta_cw = 0.0;
            else sw.theta_ccw = 0.0;
        }
    }
    return sw;
}

Sector build_erase_sector(const Candidate& candidate, const SweepResult& sweep,
                          const EraserConfig& config, double effective_height) {
    SweepResult sw = sweep;
    if (config.axis_min.has_value()) {
        // Keep every swept axis inside the configured interval.
        sw.theta_cw = std::min(sw.theta_cw, candidate.axis_angle - *config.axis_min);
        sw.theta_ccw = std::max(sw.theta_ccw, candidate.axis_angle - *config.axis_max);
    }
    const double flank =
        config.mode == EraseMode::Extended ? config.rho / 2 - kExtendedEdgeShrink : 0.0;
    Sector sector;
    sector.vertex = candidate.vertex;
    sector.start_dir = rotate_cw(candidate.axis, sw.theta_cw + flank);
    sector.end_dir = rotate_cw(candidate.axis, sw.theta_ccw - flank);
    sector.span = sw.theta_cw - sw.theta_ccw + 2 * flank;
    sector.radius = effective_height;
    return sector;
}

bool erase_step(ErasedRegion& region, const Sample& sample, const EraserConfig& config,
                RandomStream& rng) {
    const Candidate cand = draw_candidate(region.frame(), config, rng);
    region.count_attempt();
    const double h_eff =
        std::isinf(config.h) ? region.frame().diagonal() : config.h;
    const FiniteCone seed{cand.vertex, cand.axis, config.rho, h_eff};
    for (const Point& p : sample.points) {
        if (cone_contains(seed, p)) return false;
    }
    const SweepResult sw = max_sweep(sample, cand.vertex, cand.axis, config.rho, h_eff);
    region.append(build_erase_sector(cand, sw, config, h_eff));
    return true;
}

namespace {

void validate_common(const Sample& sample, const Frame& frame, std::uint32_t target_erasures,
                     std::uint64_t max_attempts) {
    if (sample.points.empty()) throw std::invalid_argument("eraser: sample must be nonempty");
    if (target_erasures < 1) throw std::invalid_argument("eraser: N must be >= 1");
    if (max_attempts < 1) throw std::invalid_argument("eraser: attempt guard must be >= 1");
    if (!(frame.xmin < frame.xmax) || !(frame.ymin < frame.ymax)) {
        throw std::invalid_argument("eraser: degenerate frame");
    }
    for (const Point& p : sample.points) {
        if (!frame.contains(p)) {
            throw std::invalid_argument("eraser: sample point outside the frame");
        }
    }
}

}  // namespace

ErasedRegion run_eraser(const Sample& sample, const Frame& frame, const EraserConfig& config) {
    require_cone_params(config.rho, config.h);
    validate_common(sample, frame, config.target_erasures, config.max_attempts_per_erasure);
    if (config.axis_min.has_value() != config.axis_max.has_value()) {
        throw std::invalid_argument("eraser: axis interval needs both endpoints");
    }
    if (config.axis_min.has_value() && !(*config.axis_min <= *config.axis_max &&
                                         *config.axis_max - *config.axis_min <= 2 * kPi)) {
        throw std::invalid_argument("eraser: bad axis interval");
    }

    RegionProvenance prov;
    prov.kind = EstimatorKind::Cone;
    prov.rho = config.rho;
    prov.h = config.h;
    prov.target_erasures = config.target_erasures;
    prov.max_attempts_per_erasure = config.max_attempts_per_erasure;
    prov.mode = config.mode;
    prov.axis_min = config.axis_min;
    prov.axis_max = config.axis_max;
    prov.seed = config.seed;

    ErasedRegion region(frame, prov);
    RandomStream rng(config.seed);
    std::uint64_t consecutive_failures = 0;
    while (region.erasures() < config.target_erasures) {
        if (erase_step(region, sample, config, rng)) {
            consecutive_failures = 0;
        } else if (++consecutive_failures >= config.max_attempts_per_erasure) {
            region.mark_early_stop();
            break;
        }
    }
    return region;
}

ErasedRegion run_ball_eraser(const Sample& sample, const Frame& frame, double r,
                             std::uint32_t target_erasures, std::uint64_t max_attempts_per_erasure,
                             std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("ball eraser: radius must be positive");
    validate_common(sample, frame, target_erasures, max_attempts_per_erasure);

    RegionProvenance prov;
    prov.kind = EstimatorKind::Ball;
    prov.r = r;
    prov.target_erasures = target_erasures;
    prov.max_attempts_per_erasure = max_attempts_per_erasure;
    prov.seed = seed;

    ErasedRegion region(frame, prov);
    RandomStream rng(seed);
    const Frame dilated = frame.dilated(r);
    const double r2 = r * r;
    std::uint64_t consecutive_failures = 0;
    while (region.erasures() < target_erasures) {
        const Point center = rng.point_in(dilated);
        region.count_attempt();
        bool empty = true;
        for (const Point& p : sample.points) {
            if (squared_norm(p - center) < r2) {
                empty = false;
                break;
            }
        }
        if (empty) {
            region.append(Sector{center, UnitVec{1, 0}, UnitVec{1, 0}, 2 * kPi, r});
            consecutive_failures = 0;
        } else if (++consecutive_failures >= max_attempts_per_erasure) {
            region.mark_early_stop();
            break;
        }
    }
    return region;
}

std::string region_to_json(const ErasedRegion& region) {
    const RegionProvenance& prov = region.provenance();
    std::string out;
    out.reserve(128 + region.sectors().size() * 96);
    auto num = [&out](double v) { format_double(out, v); };

    out += "{\n  \"schema\": 1,\n  \"estimator\": \"";
    out += prov.kind == EstimatorKind::Cone ? "cone" : "ball";
    out += "\",\n  \"frame\": {\"xmin\": ";
    num(region.frame().xmin);
    out += ", \"xmax\": ";
    num(region.frame().xmax);
    out += ", \"ymin\": ";
    num(region.frame().ymin);
    out += ", \"ymax\": ";
    num(region.frame().ymax);
    out += "},\n";
    if (prov.kind == EstimatorKind::Cone) {
        out += "  \"rho\": ";
        num(prov.rho);
        out += ",\n  \"h\": ";
        if (std::isinf(prov.h)) out += "\"unbounded\"";
        else num(prov.h);
        out += ",\n  \"mode\": \"";
        out += prov.mode == EraseMode::Extended ? "extended" : "paper-literal";
        out += "\",\n";
        if (prov.axis_min.has_value()) {
            out += "  \"axisMin\": ";
            num(*prov.axis_min);
            out += ",\n  \"axisMax\": ";
            num(*prov.axis_max);
            out += ",\n";
        }
    } else {
        out += "  \"r\": ";
        num(prov.r);
        out += ",\n";
    }
    out += "  \"N\": " + std::to_string(prov.target_erasures) + ",\n";
    out += "  \"maxAttemptsPerErasure\": " + std::to_string(prov.max_attempts_per_erasure) + ",\n";
    out += "  \"seed\": " + std::to_string(prov.seed) + ",\n";
    out += "  \"attempts\": " + std::to_string(region.attempts()) + ",\n";
    out += "  \"erasures\": " + std::to_string(region.erasures()) + ",\n";
    out += std::string("  \"earlyStop\": ") + (region.early_stop() ? "true" : "false") + ",\n";
    out += "  \"sectors\": [";
    bool first = true;
    for (const Sector& s : region.sectors()) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"vertex\": [";
        num(s.vertex.x);
        out += ", ";
        num(s.vertex.y);
        out += "], \"startAngle\": ";
        num(s.start_dir.angle());
        out += ", \"span\": ";
        num(s.span);
        out += ", \"radius\": ";
        num(s.radius);
        out += "}";
    }
    out += first ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

void write_region_json(const ErasedRegion& region, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write region JSON: " + path);
    out << region_to_json(region);
}

ErasedRegion parse_region_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<int>() != 1) {
        throw std::runtime_error("region JSON: unsupported schema version");
    }
    const auto& fr = doc.at("frame");
    const Frame frame{fr.at("xmin").get<double>(), fr.at("xmax").get<double>(),
                      fr.at("ymin").get<double>(), fr.at("ymax").get<double>()};
    RegionProvenance prov;
    const std::string kind = doc.at("estimator").get<std::string>();
    if (kind == "cone") {
        prov.kind = EstimatorKind::Cone;
        prov.rho = doc.at("rho").get<double>();
        prov.h = doc.at("h").is_string() ? kUnboundedHeight : doc.at("h").get<double>();
        prov.mode = doc.at("mode").get<std::string>() == "extended" ? EraseMode::Extended
                                                                    : EraseMode::PaperLiteral;
        if (doc.contains("axisMin")) {
            prov.axis_min = doc.at("axisMin").get<double>();
            prov.axis_max = doc.at("axisMax").get<double>();
        }
    } else if (kind == "ball") {
        prov.kind = EstimatorKind::Ball;
        prov.r = doc.at("r").get<double>();
    } else {
        throw std::runtime_error("region JSON: unknown estimator kind");
    }
    prov.target_erasures = doc.at("N").get<std::uint32_t>();
    prov.max_attempts_per_erasure = doc.at("maxAttemptsPerErasure").get<std::uint64_t>();
    prov.seed = doc.at("seed").get<std::uint64_t>();

    ErasedRegion region(frame, prov);
    for (const auto& js : doc.at("sectors")) {
        Sector s;
        s.vertex = Point{js.at("vertex").at(0).get<double>(), js.at("vertex").at(1).get<double>()};
        const double start = js.at("startAngle").get<double>();
        s.span = js.at("span").get<double>();
        s.start_dir = UnitVec::from_angle(start);
        s.end_dir = rotate_cw(s.start_dir, -s.span);
        s.radius = js.at("radius").get<double>();
        region.append(s);
    }
    region.set_attempts(doc.at("attempts").get<std::uint64_t>());
    if (doc.at("earlyStop").get<bool>()) region.mark_early_stop();
    return region;
}

ErasedRegion read_region_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read region JSON: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_region_json(buf.str());
}

}  // namespace conehull
