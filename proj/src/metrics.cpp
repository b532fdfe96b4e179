#include "conehull/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace conehull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One-dimensional squared-distance transform (lower envelope of parabolas)
/// over samples at uniform spacing `step`. f holds squared distances; the
/// result is d[q] = min_p (step*(q-p))^2 + f[p].
void edt_1d(const std::vector<double>& f, double step, std::vector<double>& d,
            std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;   // infinite parabolas never win
        const double xq = q * step;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        while (true) {
            const double xv = v[k] * step;
            const double s = ((f[q] + xq * xq) - (f[v[k]] + xv * xv)) / (2 * xq - 2 * xv);
            if (s <= z[k]) {
                --k;
            } else {
                ++k;
                v[k] = q;
                z[k] = s;
                z[k + 1] = kInf;
                break;
            }
        }
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        const double xq = q * step;
        while (z[k + 1] < xq) ++k;
        const double dx = xq - v[k] * step;
        d[q] = dx * dx + f[v[k]];
    }
}

/// Squared Euclidean distance from every cell center to the nearest marked
/// cell center. `occupied` is row-major, resolution x resolution.
std::vector<double> edt_2d(const std::vector<char>& occupied, const GridSpec& grid) {
    const int n = grid.resolution;
    std::vector<double> dist(static_cast<std::size_t>(n) * n, kInf);
    for (std::size_t i = 0; i < occupied.size(); ++i) {
        if (occupied[i]) dist[i] = 0.0;
    }
    std::vector<double> f(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    // Pass along x within each row.
    for (int iy = 0; iy < n; ++iy) {
        bool any = false;
        for (int ix = 0; ix < n; ++ix) {
            f[static_cast<std::size_t>(ix)] = dist[static_cast<std::size_t>(iy) * n + ix];
            if (f[static_cast<std::size_t>(ix)] < kInf) any = true;
        }
        if (!any) continue;
        edt_1d(f, grid.cell_dx(), d, v, z);
        for (int ix = 0; ix < n; ++ix) dist[static_cast<std::size_t>(iy) * n + ix] = d[static_cast<std::size_t>(ix)];
    }
    // Pass along y within each column.
    for (int ix = 0; ix < n; ++ix) {
        bool any = false;
        for (int iy = 0; iy < n; ++iy) {
            f[static_cast<std::size_t>(iy)] = dist[static_cast<std::size_t>(iy) * n + ix];
            if (f[static_cast<std::size_t>(iy)] < kInf) any = true;
        }
        if (!any) continue;
        edt_1d(f, grid.cell_dy(), d, v, z);
        for (int iy = 0; iy < n; ++iy) dist[static_cast<std::size_t>(iy) * n + ix] = d[static_cast<std::size_t>(iy)];
    }
    return dist;
}

std::vector<char> classify(const MembershipFn& pred, const GridSpec& grid) {
    const int n = grid.resolution;
    std::vector<char> inside(static_cast<std::size_t>(n) * n, 0);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            inside[static_cast<std::size_t>(iy) * n + ix] = pred(grid.center(ix, iy)) ? 1 : 0;
        }
    }
    return inside;
}

/// Boundary cells: classification differs from any 4-neighbor, with cells
/// beyond the grid treated as outside.
std::vector<char> boundary_cells(const std::vector<char>& inside, int n) {
    std::vector<char> out(inside.size(), 0);
    auto at = [&inside, n](int ix, int iy) -> char {
        if (ix < 0 || iy < 0 || ix >= n || iy >= n) return 0;
        return inside[static_cast<std::size_t>(iy) * n + ix];
    };
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const char c = inside[static_cast<std::size_t>(iy) * n + ix];
            if (at(ix - 1, iy) != c || at(ix + 1, iy) != c || at(ix, iy - 1) != c ||
                at(ix, iy + 1) != c) {
                out[static_cast<std::size_t>(iy) * n + ix] = 1;
            }
        }
    }
    return out;
}

double grid_hausdorff_between(const std::vector<char>& a, const std::vector<char>& b,
                              const GridSpec& grid) {
    const std::vector<double> dist_to_a = edt_2d(a, grid);
    const std::vector<double> dist_to_b = edt_2d(b, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) worst = std::max(worst, dist_to_b[i]);
        if (b[i]) worst = std::max(worst, dist_to_a[i]);
    }
    return std::sqrt(worst);
}

void check_grid(const GridSpec& grid) {
    if (grid.resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    if (!(grid.frame.xmin < grid.frame.xmax) || !(grid.frame.ymin < grid.frame.ymax)) {
        throw std::invalid_argument("degenerate grid frame");
    }
}

bool any_set(const std::vector<char>& cells) {
    return std::any_of(cells.begin(), cells.end(), [](char c) { return c != 0; });
}

/// Uniform-bucket nearest neighbor over a fixed point set.
class BucketIndex {
public:
    BucketIndex(const std::vector<Point>& points, const Frame& frame)
        : points_(points), frame_(frame) {
        const double target = std::sqrt(frame.area() / std::max<std::size_t>(points.size(), 1));
        nx_ = std::max(1, std::min(512, static_cast<int>(frame.width() / std::max(target, 1e-12))));
        ny_ = std::max(1, std::min(512, static_cast<int>(frame.height() / std::max(target, 1e-12))));
        buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (std::uint32_t i = 0; i < points.size(); ++i) {
            buckets_[bucket_of(points[i])].push_back(i);
        }
    }

    double nearest_distance(Point q) const {
        const int qx = clamp_x(q.x);
        const int qy = clamp_y(q.y);
        double best = kInf;
        const double dx = frame_.width() / nx_;
        const double dy = frame_.height() / ny_;
        for (int ring = 0; ring < std::max(nx_, ny_); ++ring) {
            // Once a hit exists, rings beyond the certified radius cannot win.
            if (best < kInf) {
                const double safe = (ring - 1) * std::min(dx, dy);
                if (ring >= 1 && safe >= 0 && best <= safe * safe) break;
            }
            for (int iy = qy - ring; iy <= qy + ring; ++iy) {
                if (iy < 0 || iy >= ny_) continue;
                for (int ix = qx - ring; ix <= qx + ring; ++ix) {
                    if (ix < 0 || ix >= nx_) continue;
                    if (std::max(std::abs(ix - qx), std::abs(iy - qy)) != ring) continue;
                    for (std::uint32_t id : buckets_[static_cast<std::size_t>(iy) * nx_ + ix]) {
                        best = std::min(best, squared_norm(points_[id] - q));
                    }
                }
            }
        }
        return std::sqrt(best);
    }

private:
    int clamp_x(double x) const {
        return std::clamp(static_cast<int>((x - frame_.xmin) / frame_.width() * nx_), 0, nx_ - 1);
    }
    int clamp_y(double y) const {
        return std::clamp(static_cast<int>((y - frame_.ymin) / frame_.height() * ny_), 0, ny_ - 1);
    }
    std::size_t bucket_of(Point p) const {
        return static_cast<std::size_t>(clamp_y(p.y)) * nx_ + clamp_x(p.x);
    }

    const std::vector<Point>& points_;
    Frame frame_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

}  // namespace

double dist_to_point_set(Point p, const Sample& a) {
    if (a.points.empty()) throw std::invalid_argument("dist_to_point_set: empty point set");
    double best = kInf;
    for (const Point& q : a.points) best = std::min(best, squared_norm(q - p));
    return std::sqrt(best);
}

double hausdorff_point_sets(const Sample& a, const Sample& b) {
    if (a.points.empty() || b.points.empty()) {
        throw std::invalid_argument("hausdorff_point_sets: empty point set");
    }
    double worst = 0.0;
    for (const Point& p : a.points) worst = std::max(worst, dist_to_point_set(p, b));
    for (const Point& q : b.points) worst = std::max(worst, dist_to_point_set(q, a));
    return worst;
}

MetricEstimate hausdorff_grid(const MembershipFn& a, const MembershipFn& b, const GridSpec& grid) {
    check_grid(grid);
    const std::vector<char> in_a = classify(a, grid);
    const std::vector<char> in_b = classify(b, grid);
    if (!any_set(in_a)) throw std::runtime_error("hausdorff_grid: first set empty on the grid");
    if (!any_set(in_b)) throw std::runtime_error("hausdorff_grid: second set empty on the grid");
    MetricEstimate out;
    out.value = grid_hausdorff_between(in_a, in_b, grid);
    out.standard_error = grid.cell_diagonal();
    out.budget = static_cast<std::int64_t>(grid.resolution) * grid.resolution;
    return out;
}

MetricEstimate boundary_hausdorff_grid(const MembershipFn& a, const MembershipFn& b,
                                       const GridSpec& grid) {
    check_grid(grid);
    const std::vector<char> bd_a = boundary_cells(classify(a, grid), grid.resolution);
    const std::vector<char> bd_b = boundary_cells(classify(b, grid), grid.resolution);
    if (!any_set(bd_a)) throw std::runtime_error("boundary_hausdorff_grid: first boundary empty");
    if (!any_set(bd_b)) throw std::runtime_error("boundary_hausdorff_grid: second boundary empty");
    MetricEstimate out;
    out.value = grid_hausdorff_between(bd_a, bd_b, grid);
    out.standard_error = grid.cell_diagonal();
    out.budget = static_cast<std::int64_t>(grid.resolution) * grid.resolution;
    return out;
}

MetricEstimate measure_diff_mc(const MembershipFn& a, const MembershipFn& b, const Frame& frame,
                               std::int64_t n_mc, RandomStream& rng) {
    if (n_mc < 100) throw std::invalid_argument("measure_diff_mc: budget must be >= 100");
    std::int64_t disagreements = 0;
    for (std::int64_t i = 0; i < n_mc; ++i) {
        const Point p = rng.point_in(frame);
        if (a(p) != b(p)) ++disagreements;
    }
    const double p_hat = static_cast<double>(disagreements) / static_cast<double>(n_mc);
    MetricEstimate out;
    out.value = frame.area() * p_hat;
    out.standard_error = frame.area() * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_mc));
    out.budget = n_mc;
    return out;
}

MetricEstimate hausdorff_sample_to_grid(const Sample& sample, const MembershipFn& region,
                                        const GridSpec& grid) {
    check_grid(grid);
    if (sample.points.empty()) throw std::invalid_argument("hausdorff_sample_to_grid: empty sample");
    std::vector<Point> cells;
    for (int iy = 0; iy < grid.resolution; ++iy) {
        for (int ix = 0; ix < grid.resolution; ++ix) {
            const Point c = grid.center(ix, iy);
            if (region(c)) cells.push_back(c);
        }
    }
    if (cells.empty()) throw std::runtime_error("hausdorff_sample_to_grid: region empty on grid");

    Frame hull = grid.frame;
    for (const Point& p : sample.points) {
        hull.xmin = std::min(hull.xmin, p.x);
        hull.xmax = std::max(hull.xmax, p.x);
        hull.ymin = std::min(hull.ymin, p.y);
        hull.ymax = std::max(hull.ymax, p.y);
    }
    const BucketIndex sample_index(sample.points, hull);
    const BucketIndex cell_index(cells, hull);
    double worst = 0.0;
    for (const Point& c : cells) worst = std::max(worst, sample_index.nearest_distance(c));
    for (const Point& p : sample.points) worst = std::max(worst, cell_index.nearest_distance(p));
    MetricEstimate out;
    out.value = worst;
    out.standard_error = grid.cell_diagonal();
    out.budget = static_cast<std::int64_t>(cells.size());
    return out;
}

}  // namespace conehull
