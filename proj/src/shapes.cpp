#include "conehull/shapes.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace conehull {

namespace {

struct Triangle {
    Point a, b, c;
};

/// Strictly-inside test via cross-product signs; the triangle is open.
bool in_open_triangle(const Triangle& t, Point p) {
    const double d1 = cross(t.b - t.a, p - t.a);
    const double d2 = cross(t.c - t.b, p - t.b);
    const double d3 = cross(t.a - t.c, p - t.c);
    return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

Point rotate_about_origin(Point p, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {p.x * c - p.y * s, p.x * s + p.y * c};
}

}  // namespace

double PathFunction::operator()(double x) const {
    const std::size_t n = values.size() - 1;
    if (x <= 0.0) return values.front();
    if (x >= 1.0) return values.back();
    const double pos = x * static_cast<double>(n);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 1);
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
}

double PathFunction::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

double PathFunction::area() const {
    const std::size_t n = values.size() - 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i] + values[i + 1];
    return sum / (2.0 * static_cast<double>(n));
}

Shape triangle_notch_set() {
    const double t = std::tan(3 * kPi / 8) / 2;
    const double top = t + 0.5;
    const Triangle notch{{0.0, top}, {1.0, top}, {0.5, 0.5}};
    Shape s;
    s.bounding_box = Frame{0.0, 1.0, 0.0, top};
    s.known_area = top - t / 2;
    s.label = "triangle-notch";
    s.membership = [top, notch](Point p) {
        if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > top) return false;
        return !in_open_triangle(notch, p);
    };
    return s;
}

Shape eight_triangle_star() {
    const double s = (std::sqrt(2.0) - 1.0) / 2.0;
    std::vector<Triangle> tris;
    const Triangle base{{1.0, 0.0}, {1.0 + s, s}, {1.0 + s, -s}};
    for (int k = 0; k < 8; ++k) {
        const double theta = k * kPi / 4;
        tris.push_back(Triangle{rotate_about_origin(base.a, theta),
                                rotate_about_origin(base.b, theta),
                                rotate_about_origin(base.c, theta)});
    }
    Shape out;
    const double reach = std::hypot(1.0 + s, s);
    out.bounding_box = Frame{-reach, reach, -reach, reach};
    out.known_area = 8.0 * s * s;  // each triangle: base 2s, height s
    out.label = "eight-triangle-star";
    out.membership = [tris](Point p) {
        for (const auto& t : tris) {
            if (in_open_triangle(t, p)) return true;
        }
        return false;
    };
    return out;
}

Shape table_one_set() {
    const std::array<Triangle, 4> holes{
        Triangle{{0.0, 1.0}, {0.5, 0.5}, {1.0, 1.0}},
        Triangle{{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}},
        Triangle{{0.0, 1.0 / 3.0}, {0.5, 0.5}, {0.0, 2.0 / 3.0}},
        Triangle{{1.0, 1.0 / 3.0}, {0.5, 0.5}, {1.0, 2.0 / 3.0}},
    };
    Shape out;
    out.bounding_box = Frame{0.0, 1.0, 0.0, 1.0};
    out.known_area = 1.0 / 3.0;
    out.label = "s1";
    out.membership = [holes](Point p) {
        if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) return false;
        for (const auto& t : holes) {
            if (in_open_triangle(t, p)) return false;
        }
        return true;
    };
    return out;
}

double table_one_rho0() { return 2.0 * std::atan(1.0 / 3.0); }

PathFunction brownian_path(int steps, RandomStream& rng, double min_shift) {
    if (steps < 2) throw std::invalid_argument("brownian_path: steps must be >= 2");
    PathFunction f;
    f.values.resize(static_cast<std::size_t>(steps) + 1);
    const double sd = std::sqrt(1.0 / steps);
    double w = 0.0;
    f.values[0] = 0.0;
    for (int i = 1; i <= steps; ++i) {
        w += sd * rng.normal01();
        f.values[static_cast<std::size_t>(i)] = w;
    }
    const double lo = *std::min_element(f.values.begin(), f.values.end());
    for (double& v : f.values) v += min_shift - lo;
    return f;
}

Shape hypograph_shape(PathFunction f) {
    Shape out;
    out.bounding_box = Frame{0.0, 1.0, 0.0, f.max_value()};
    out.known_area = f.area();
    out.label = "hypograph";
    out.membership = [f = std::move(f)](Point p) {
        if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0) return false;
        return p.y <= f(p.x);
    };
    return out;
}

Shape brownian_hypograph(int steps, RandomStream& rng, double min_shift) {
    Shape s = hypograph_shape(brownian_path(steps, rng, min_shift));
    s.label = "brownian-hypograph";
    return s;
}

Sample sample_uniform(const Shape& shape, int n, RandomStream& rng,
                      std::uint64_t max_proposals) {
    if (n < 1) throw std::invalid_argument("sample_uniform: n must be >= 1");
    Sample out;
    out.points.reserve(static_cast<std::size_t>(n));
    std::uint64_t proposals = 0;
    while (out.points.size() < static_cast<std::size_t>(n)) {
        if (++proposals > max_proposals) {
            throw std::runtime_error("sample_uniform: rejection budget exceeded for shape '" +
                                     shape.label + "'");
        }
        const Point p = rng.point_in(shape.bounding_box);
        if (shape.membership(p)) out.points.push_back(p);
    }
    return out;
}

Sample parse_points_csv(const std::string& text, bool rescale) {
    Sample out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "x,y") {
                throw std::runtime_error("point CSV: expected header \"x,y\" at line " +
                                         std::to_string(line_no));
            }
            header_seen = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("point CSV: parse error at line " + std::to_string(line_no));
        }
        char* endx = nullptr;
        char* endy = nullptr;
        const std::string xs = line.substr(0, comma);
        const std::string ys = line.substr(comma + 1);
        const double x = std::strtod(xs.c_str(), &endx);
        const double y = std::strtod(ys.c_str(), &endy);
        if (xs.empty() || ys.empty() || *endx != '\0' || *endy != '\0' ||
            !std::isfinite(x) || !std::isfinite(y)) {
            throw std::runtime_error("point CSV: parse error at line " + std::to_string(line_no));
        }
        out.points.push_back({x, y});
    }
    if (!header_seen) throw std::runtime_error("point CSV: empty file");
    if (out.points.empty()) throw std::runtime_error("point CSV: no data rows");
    if (rescale) {
        double xmin = out.points[0].x, xmax = xmin, ymin = out.points[0].y, ymax = ymin;
        for (const Point& p : out.points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        const double sx = xmax > xmin ? 1.0 / (xmax - xmin) : 1.0;
        const double sy = ymax > ymin ? 1.0 / (ymax - ymin) : 1.0;
        for (Point& p : out.points) {
            p.x = (p.x - xmin) * sx;
            p.y = (p.y - ymin) * sy;
        }
    }
    return out;
}

Sample load_points(const std::string& path, bool rescale) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open point CSV: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_points_csv(buf.str(), rescale);
}

}  // namespace conehull
