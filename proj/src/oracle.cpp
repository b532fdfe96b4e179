#include "conehull/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "conehull/rng.hpp"

namespace conehull {

namespace {

bool cone_empty_of_sample(const FiniteCone& cone, const Sample& sample) {
    for (const Point& p : sample.points) {
        if (cone_contains(cone, p)) return false;
    }
    return true;
}

/// 1000 Halton points of the open member cone, precomputed in local polar
/// coordinates (radius fraction, angle offset from the axis).
struct MemberProbe {
    std::vector<double> radius_frac;
    std::vector<double> angle_offset;

    MemberProbe(double opening, int count) {
        radius_frac.reserve(static_cast<std::size_t>(count));
        angle_offset.reserve(static_cast<std::size_t>(count));
        for (int i = 1; i <= count; ++i) {
            // sqrt for uniform area density; both coordinates stay strictly
            // inside (0,1), so probes are strictly interior to the cone.
            radius_frac.push_back(std::sqrt(halton(static_cast<std::uint32_t>(i), 2)));
            angle_offset.push_back((halton(static_cast<std::uint32_t>(i), 3) - 0.5) * opening);
        }
    }
};

/// True when every probe point of `member` lies inside `cone`.
bool member_inside(const FiniteCone& member, const MemberProbe& probe, const FiniteCone& cone) {
    const double base = member.axis.angle();
    for (std::size_t i = 0; i < probe.radius_frac.size(); ++i) {
        const double r = probe.radius_frac[i] * member.height;
        if (r <= 0.0) continue;
        const double a = base + probe.angle_offset[i];
        const Point p = member.vertex + r * Point{std::cos(a), std::sin(a)};
        if (!cone_contains(cone, p)) return false;
    }
    return true;
}

}  // namespace

SeparationCertificate separation_oracle(const Sample& sample, Point query, double rho, double h,
                                        double vertex_grid_step, int axis_count) {
    require_cone_params(rho, h);
    if (!(vertex_grid_step > 0.0)) throw std::invalid_argument("separation_oracle: bad grid step");
    if (axis_count < 8) throw std::invalid_argument("separation_oracle: need >= 8 axes");

    SeparationCertificate cert;
    cert.vertex_grid_step = vertex_grid_step;
    cert.axis_count = axis_count;
    if (sample.points.empty()) return cert;

    // Candidate vertices: query-centered grid over the disk of radius h,
    // ordered nearest-first (ties by lexicographic offset) so refinement by
    // an integer factor only ever adds candidates.
    const int span = static_cast<int>(std::floor(h / vertex_grid_step));
    struct Offset {
        double d2;
        int i, j;
    };
    std::vector<Offset> offsets;
    offsets.reserve(static_cast<std::size_t>(2 * span + 1) * (2 * span + 1));
    for (int i = -span; i <= span; ++i) {
        for (int j = -span; j <= span; ++j) {
            if (i == 0 && j == 0) continue;   // a cone at the query cannot contain it
            const double dx = i * vertex_grid_step;
            const double dy = j * vertex_grid_step;
            const double d2 = dx * dx + dy * dy;
            if (d2 >= h * h) continue;
            offsets.push_back({d2, i, j});
        }
    }
    std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    const double cos_half = std::cos(rho / 2);
    const double two_pi_over_axes = 2 * kPi / axis_count;
    std::vector<char> forbidden(static_cast<std::size_t>(axis_count));

    for (const Offset& off : offsets) {
        const Point vertex{query.x + off.i * vertex_grid_step, query.y + off.j * vertex_grid_step};
        const Point dq = query - vertex;
        const double rq = norm(dq);
        const double query_angle = std::atan2(dq.y, dq.x);

        // Mark axis indices whose cone would swallow a sample point. The
        // margin of one axis step keeps the marking conservative; survivors
        // are re-verified exactly below.
        std::fill(forbidden.begin(), forbidden.end(), 0);
        bool all_forbidden = false;
        for (const Point& s : sample.points) {
            const Point d = s - vertex;
            const double r2 = squared_norm(d);
            if (r2 <= 0.0 || !(r2 < h * h)) continue;
            const double ang = std::atan2(d.y, d.x);
            const double lo = ang - rho / 2 - two_pi_over_axes;
            const double hi = ang + rho / 2 + two_pi_over_axes;
            const int j0 = static_cast<int>(std::floor(lo / two_pi_over_axes));
            const int j1 = static_cast<int>(std::ceil(hi / two_pi_over_axes));
            if (j1 - j0 >= axis_count) {
                all_forbidden = true;
                break;
            }
            for (int j = j0; j <= j1; ++j) {
                int idx = j % axis_count;
                if (idx < 0) idx += axis_count;
                forbidden[static_cast<std::size_t>(idx)] = 1;
            }
        }
        if (all_forbidden) continue;

        for (int j = 0; j < axis_count; ++j) {
            if (forbidden[static_cast<std::size_t>(j)]) continue;
            const double axis_angle = j * two_pi_over_axes;
            // Quick reject: the cone must contain the query.
            if (std::cos(axis_angle - query_angle) <= cos_half || !(rq < h)) continue;
            const FiniteCone cone{vertex, UnitVec::from_angle(axis_angle), rho, h};
            if (!cone_contains(cone, query)) continue;
            if (!cone_empty_of_sample(cone, sample)) continue;
            cert.cone = cone;
            return cert;
        }
    }
    return cert;
}

UnavoidableFamily build_unavoidable_family(Point x, double rho, double h) {
    const DerivedParams dp = derived_params(rho, h);
    UnavoidableFamily family;
    family.center = x;
    family.gamma = dp.gamma > 0.0 ? dp.gamma : kPi / 4;
    family.h_one = dp.h_one;
    const int k = static_cast<int>(std::ceil(4 * kPi / family.gamma));
    family.axes.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        family.axes.push_back(UnitVec::from_angle(2 * kPi * j / k));
    }
    return family;
}

double check_unavoidability(const UnavoidableFamily& family, double rho, double h,
                            std::int64_t trials, std::uint64_t seed, int threads) {
    require_cone_params(rho, h);
    if (trials < 1) throw std::invalid_argument("check_unavoidability: trials must be >= 1");
    threads = std::max(1, threads);

    const MemberProbe probe(family.gamma / 2, 1000);
    const Point x = family.center;
    std::atomic<std::int64_t> hits{0};
    std::atomic<std::int64_t> next{0};

    auto worker = [&]() {
        std::vector<std::size_t> order(family.cardinality());
        for (std::int64_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
            RandomStream rng(RandomStream::derive(seed, static_cast<std::uint64_t>(t)));
            // Draw a cone containing x: vertex uniform on the punctured disk
            // of radius h about x, axis within rho/2 of the direction to x.
            FiniteCone cone;
            do {
                const double r = h * std::sqrt(rng.uniform01_open_low());
                const double a = rng.uniform(0.0, 2 * kPi);
                cone.vertex = x + r * Point{std::cos(a), std::sin(a)};
                cone.axis = rotate_cw(UnitVec::towards(cone.vertex, x),
                                      rng.uniform(-rho / 2, rho / 2));
                cone.opening = rho;
                cone.height = h;
            } while (!cone_contains(cone, x));

            // Try members nearest in angle to the deepest inward direction.
            const Point target = cone.vertex + (h / 2) * Point{cone.axis.x, cone.axis.y};
            const UnitVec ideal = distance(target, x) > 1e-12 ? UnitVec::towards(x, target)
                                                              : rotate_cw(cone.axis, kPi);
            for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(signed_angle(family.axes[a], ideal)) <
                       std::abs(signed_angle(family.axes[b], ideal));
            });
            for (std::size_t j : order) {
                if (member_inside(family.member(j), probe, cone)) {
                    hits.fetch_add(1);
                    break;
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return static_cast<double>(hits.load()) / static_cast<double>(trials);
}

}  // namespace conehull
