#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "conehull/metrics.hpp"
#include "conehull/shapes.hpp"

using namespace conehull;

namespace {

Sample random_sample(RandomStream& rng, int n, const Frame& f) {
    Sample s;
    for (int i = 0; i < n; ++i) s.points.push_back(rng.point_in(f));
    return s;
}

/// Brute-force Hausdorff distance between two finite point lists.
double brute_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
    double worst = 0.0;
    for (const Point& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : b) best = std::min(best, distance(p, q));
        worst = std::max(worst, best);
    }
    for (const Point& q : b) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& p : a) best = std::min(best, distance(p, q));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

TEST_CASE("hausdorff_point_sets basics") {
    Sample a, b;
    a.points = {{0, 0}, {1, 0}};
    CHECK(hausdorff_point_sets(a, a) == 0.0);

    b.points = {{3, 4}};
    Sample single;
    single.points = {{0, 0}};
    CHECK(hausdorff_point_sets(single, b) == doctest::Approx(5.0).epsilon(1e-15));

    Sample origin;
    origin.points = {{0, 0}};
    CHECK(hausdorff_point_sets(a, origin) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(hausdorff_point_sets(Sample{}, a), std::invalid_argument);
}

TEST_CASE("hausdorff_point_sets metric axioms on random triples") {
    RandomStream rng(41);
    const Frame f{-1, 1, -1, 1};
    for (int i = 0; i < 500; ++i) {
        const Sample a = random_sample(rng, 8, f);
        const Sample b = random_sample(rng, 6, f);
        const Sample c = random_sample(rng, 7, f);
        const double ab = hausdorff_point_sets(a, b);
        const double ba = hausdorff_point_sets(b, a);
        CHECK(ab == ba);   // symmetry, exact
        const double ac = hausdorff_point_sets(a, c);
        const double cb = hausdorff_point_sets(c, b);
        CHECK(ab <= ac + cb + 1e-12);
        CHECK(brute_hausdorff(a.points, b.points) == ab);
    }
}

TEST_CASE("dist_to_point_set") {
    Sample a;
    a.points = {{3, 4}, {6, 8}};
    CHECK(dist_to_point_set({0, 0}, a) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(dist_to_point_set({3, 4}, a) == 0.0);

    RandomStream rng(43);
    const Frame f{0, 1, 0, 1};
    const Sample big = random_sample(rng, 10000, f);
    for (int i = 0; i < 50; ++i) {
        const Point p = rng.point_in(f);
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : big.points) best = std::min(best, distance(p, q));
        CHECK(dist_to_point_set(p, big) == best);
    }
}

TEST_CASE("hausdorff_grid on identical predicates") {
    const GridSpec grid{{0, 1, 0, 1}, 64};
    auto disk = [](Point p) { return squared_norm(p - Point{0.5, 0.5}) < 0.16; };
    const MetricEstimate est = hausdorff_grid(disk, disk, grid);
    CHECK(est.value == 0.0);
    CHECK(*est.standard_error == doctest::Approx(grid.cell_diagonal()));
}

TEST_CASE("hausdorff_grid on shifted unit squares") {
    auto square_a = [](Point p) { return p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1; };
    auto square_b = [](Point p) { return p.x >= 0.5 && p.x <= 1.5 && p.y >= 0 && p.y <= 1; };
    const GridSpec grid{{-0.5, 2.0, -0.5, 1.5}, 512};
    const MetricEstimate est = hausdorff_grid(square_a, square_b, grid);
    CHECK(std::abs(est.value - 0.5) <= grid.cell_diagonal());
}

TEST_CASE("hausdorff_grid on concentric disks") {
    auto disk_big = [](Point p) { return squared_norm(p - Point{0.5, 0.5}) < 0.16; };
    auto disk_small = [](Point p) { return squared_norm(p - Point{0.5, 0.5}) < 0.09; };
    const GridSpec grid{{0, 1, 0, 1}, 512};
    const MetricEstimate est = hausdorff_grid(disk_big, disk_small, grid);
    CHECK(std::abs(est.value - 0.1) <= grid.cell_diagonal());
}

TEST_CASE("hausdorff_grid error bound shrinks with refinement") {
    auto square_a = [](Point p) { return p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1; };
    auto square_b = [](Point p) { return p.x >= 0.5 && p.x <= 1.5 && p.y >= 0 && p.y <= 1; };
    const GridSpec coarse{{-0.5, 2.0, -0.5, 1.5}, 256};
    const GridSpec fine{{-0.5, 2.0, -0.5, 1.5}, 512};
    const MetricEstimate low = hausdorff_grid(square_a, square_b, coarse);
    const MetricEstimate high = hausdorff_grid(square_a, square_b, fine);
    CHECK(*high.standard_error < *low.standard_error);
    CHECK(std::abs(high.value - low.value) <= coarse.cell_diagonal());
}

TEST_CASE("hausdorff_grid matches a brute-force oracle on random blobs") {
    RandomStream rng(47);
    const GridSpec grid{{0, 1, 0, 1}, 32};
    for (int trial = 0; trial < 20; ++trial) {
        const Point ca = rng.point_in(grid.frame), cb = rng.point_in(grid.frame);
        const double ra = rng.uniform(0.05, 0.4), rb = rng.uniform(0.05, 0.4);
        auto blob_a = [ca, ra](Point p) { return distance(p, ca) < ra; };
        auto blob_b = [cb, rb](Point p) { return distance(p, cb) < rb; };

        std::vector<Point> cells_a, cells_b;
        for (int iy = 0; iy < 32; ++iy) {
            for (int ix = 0; ix < 32; ++ix) {
                const Point c = grid.center(ix, iy);
                if (blob_a(c)) cells_a.push_back(c);
                if (blob_b(c)) cells_b.push_back(c);
            }
        }
        if (cells_a.empty() || cells_b.empty()) continue;
        const double expected = brute_hausdorff(cells_a, cells_b);
        const MetricEstimate est = hausdorff_grid(blob_a, blob_b, grid);
        CHECK(est.value == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("hausdorff_grid reports the empty side") {
    auto full = [](Point) { return true; };
    auto empty = [](Point) { return false; };
    const GridSpec grid{{0, 1, 0, 1}, 16};
    CHECK_THROWS_WITH_AS(hausdorff_grid(empty, full, grid), doctest::Contains("first"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(hausdorff_grid(full, empty, grid), doctest::Contains("second"),
                         std::runtime_error);
}

TEST_CASE("boundary_hausdorff_grid examples") {
    const GridSpec grid{{-0.5, 2.0, -0.5, 1.5}, 512};
    auto square_a = [](Point p) { return p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1; };
    SUBCASE("identical predicates") {
        CHECK(boundary_hausdorff_grid(square_a, square_a, grid).value == 0.0);
    }
    SUBCASE("widened square") {
        auto square_b = [](Point p) { return p.x >= 0 && p.x <= 1.2 && p.y >= 0 && p.y <= 1; };
        const MetricEstimate est = boundary_hausdorff_grid(square_a, square_b, grid);
        CHECK(std::abs(est.value - 0.2) <= grid.cell_diagonal());
    }
    SUBCASE("disk against annulus") {
        const GridSpec unit{{0, 1, 0, 1}, 512};
        auto disk = [](Point p) { return distance(p, {0.5, 0.5}) < 0.4; };
        auto annulus = [](Point p) {
            const double r = distance(p, {0.5, 0.5});
            return r < 0.4 && r > 0.2;
        };
        const MetricEstimate est = boundary_hausdorff_grid(disk, annulus, unit);
        CHECK(std::abs(est.value - 0.2) <= unit.cell_diagonal());
    }
}

TEST_CASE("measure_diff_mc") {
    const Frame unit{0, 1, 0, 1};
    auto square = [](Point) { return true; };
    auto empty = [](Point) { return false; };

    SUBCASE("identical predicates give exactly zero") {
        RandomStream rng(53);
        const Shape s1 = table_one_set();
        const MetricEstimate est = measure_diff_mc(s1.membership, s1.membership, unit, 4000, rng);
        CHECK(est.value == 0.0);
        CHECK(*est.standard_error == 0.0);
    }
    SUBCASE("square vs empty is exactly one") {
        RandomStream rng(59);
        const MetricEstimate est = measure_diff_mc(square, empty, unit, 4000, rng);
        CHECK(est.value == 1.0);
    }
    SUBCASE("table-one set vs unit square") {
        RandomStream rng(61);
        const Shape s1 = table_one_set();
        const MetricEstimate est = measure_diff_mc(s1.membership, square, unit, 1000000, rng);
        CHECK(std::abs(est.value - 2.0 / 3.0) < 3 * *est.standard_error);
    }
    SUBCASE("symmetric in the arguments for a fixed stream") {
        const Shape s1 = table_one_set();
        auto disk = [](Point p) { return distance(p, {0.5, 0.5}) < 0.3; };
        RandomStream rng_a(67), rng_b(67);
        const double ab = measure_diff_mc(s1.membership, disk, unit, 20000, rng_a).value;
        const double ba = measure_diff_mc(disk, s1.membership, unit, 20000, rng_b).value;
        CHECK(ab == ba);
    }
    SUBCASE("budget validation") {
        RandomStream rng(71);
        CHECK_THROWS_AS(measure_diff_mc(square, empty, unit, 50, rng), std::invalid_argument);
    }
}

TEST_CASE("hausdorff_sample_to_grid matches brute force") {
    RandomStream rng(73);
    const GridSpec grid{{0, 1, 0, 1}, 48};
    auto disk = [](Point p) { return distance(p, {0.5, 0.5}) < 0.35; };
    const Sample sample = random_sample(rng, 200, grid.frame);

    std::vector<Point> cells;
    for (int iy = 0; iy < grid.resolution; ++iy) {
        for (int ix = 0; ix < grid.resolution; ++ix) {
            const Point c = grid.center(ix, iy);
            if (disk(c)) cells.push_back(c);
        }
    }
    const double expected = brute_hausdorff(sample.points, cells);
    const MetricEstimate est = hausdorff_sample_to_grid(sample, disk, grid);
    CHECK(est.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("grid Hausdorff agrees with point-set Hausdorff on disk unions") {
    RandomStream rng(79);
    const GridSpec grid{{0, 1, 0, 1}, 256};
    const double disk_radius = 3 * grid.cell_diagonal();
    for (int trial = 0; trial < 5; ++trial) {
        Sample a = random_sample(rng, 12, {0.2, 0.8, 0.2, 0.8});
        Sample b = random_sample(rng, 9, {0.2, 0.8, 0.2, 0.8});
        auto as_region = [disk_radius](const Sample& s) {
            return [&s, disk_radius](Point p) {
                for (const Point& q : s.points) {
                    if (distance(p, q) < disk_radius) return true;
                }
                return false;
            };
        };
        const double exact = hausdorff_point_sets(a, b);
        const MetricEstimate grid_est = hausdorff_grid(as_region(a), as_region(b), grid);
        CHECK(std::abs(grid_est.value - exact) <= grid.cell_diagonal() + disk_radius);
    }
}
