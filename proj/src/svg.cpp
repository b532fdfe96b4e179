#include "conehull/svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace conehull {

namespace {

// Nominal raster width of the scene; the dot radius is 1.5 at this scale.
constexpr double kRenderWidth = 800.0;

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

/// One filled pie slice: vertex, arc between the two boundary directions.
/// Spans beyond pi need the large-arc flag; a full disk is split into two
/// half turns because a single 360-degree arc degenerates.
void append_sector_path(std::string& out, const Sector& s, double y0, double y1) {
    auto on_arc = [&s](double offset) {
        const double a = s.start_dir.angle() + offset;
        return Point{s.vertex.x + s.radius * std::cos(a), s.vertex.y + s.radius * std::sin(a)};
    };
    auto flip = [y0, y1](double y) { return y1 - (y - y0); };   // SVG y grows downward
    out += "<path d=\"M ";
    append_num(out, s.vertex.x);
    out += ' ';
    append_num(out, flip(s.vertex.y));
    const Point first = on_arc(0.0);
    out += " L ";
    append_num(out, first.x);
    out += ' ';
    append_num(out, flip(first.y));
    const int pieces = s.span >= 2 * kPi ? 2 : 1;   // a single 360-degree arc degenerates
    const bool large = s.span / pieces > kPi;
    for (int i = 1; i <= pieces; ++i) {
        const Point next = on_arc(s.span * i / pieces);
        out += " A ";
        append_num(out, s.radius);
        out += ' ';
        append_num(out, s.radius);
        // Counterclockwise in frame coordinates is sweep=0 after the y flip.
        out += large ? " 0 1 0 " : " 0 0 0 ";
        append_num(out, next.x);
        out += ' ';
        append_num(out, flip(next.y));
    }
    out += " Z\" fill=\"#b9c8d9\" stroke=\"none\"/>\n";
}

}  // namespace

std::string render_svg(const ErasedRegion& region, const Sample& sample) {
    const Frame& f = region.frame();
    const double scale = kRenderWidth / f.width();
    const double height = f.height() * scale;
    std::string out;
    out.reserve(256 + region.sectors().size() * 180 + sample.points.size() * 64);

    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"";
    append_num(out, kRenderWidth);
    out += "\" height=\"";
    append_num(out, height);
    out += "\" viewBox=\"";
    append_num(out, f.xmin);
    out += ' ';
    append_num(out, f.ymin);
    out += ' ';
    append_num(out, f.width());
    out += ' ';
    append_num(out, f.height());
    out += "\">\n<rect x=\"";
    append_num(out, f.xmin);
    out += "\" y=\"";
    append_num(out, f.ymin);
    out += "\" width=\"";
    append_num(out, f.width());
    out += "\" height=\"";
    append_num(out, f.height());
    out += "\" fill=\"#f4f0e8\" stroke=\"#333333\" stroke-width=\"";
    append_num(out, 1.0 / scale);
    out += "\"/>\n";

    for (const Sector& s : region.sectors()) {
        append_sector_path(out, s, f.ymin, f.ymax);
    }

    const double dot_radius = 1.5 / scale;
    for (const Point& p : sample.points) {
        out += "<circle cx=\"";
        append_num(out, p.x);
        out += "\" cy=\"";
        append_num(out, f.ymax - (p.y - f.ymin));
        out += "\" r=\"";
        append_num(out, dot_radius);
        out += "\" fill=\"#1f3552\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const ErasedRegion& region, const Sample& sample, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write SVG: " + path);
    out << render_svg(region, sample);
}

}  // namespace conehull
