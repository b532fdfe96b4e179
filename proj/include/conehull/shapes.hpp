#pragma once

/// \file
/// \brief Ground-truth planar sets with exact membership oracles, uniform
/// rejection samplers, Brownian hypographs and CSV point ingestion.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conehull/geometry.hpp"
#include "conehull/rng.hpp"

namespace conehull {

/// Ordered point sample drawn from (or attached to) a target set.
struct Sample {
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
};

struct Shape {
    std::function<bool(Point)> membership;
    Frame bounding_box;
    std::optional<double> known_area;
    std::string label;

    bool contains(Point p) const { return membership(p); }
};

/// Piecewise-linear positive function on [0,1], evaluated by interpolation
/// between equally spaced grid values.
struct PathFunction {
    std::vector<double> values;   // at abscissae i/(values.size()-1)

    double operator()(double x) const;
    double max_value() const;
    /// Exact area under the interpolant (trapezoid sum).
    double area() const;
};

/// Rectangle [0,1] x [0, t+1/2] minus the open isosceles notch triangle with
/// apex (1/2, 1/2), where t = tan(3*pi/8)/2.
Shape triangle_notch_set();

/// Union of eight congruent open triangles obtained by rotating the triangle
/// (1,0), (1+s,s), (1+s,-s), s = (sqrt(2)-1)/2, by multiples of pi/4 about the
/// origin.
Shape eight_triangle_star();

/// The simulation target: unit square minus four open triangles meeting at
/// (1/2, 1/2). Area is exactly 1/3.
Shape table_one_set();

/// Largest opening for which table_one_set() stays cone-convex at its
/// reentrant corners: 2*arctan(1/3).
double table_one_rho0();

/// Standard Brownian path on [0,1] from Gaussian increments of variance
/// 1/steps, shifted so its minimum equals `min_shift`.
PathFunction brownian_path(int steps, RandomStream& rng, double min_shift = 0.05);

/// Hypograph {(x,y): 0 <= y <= f(x)} of a positive path function.
Shape hypograph_shape(PathFunction f);

Shape brownian_hypograph(int steps, RandomStream& rng, double min_shift = 0.05);

/// n i.i.d. points uniform on the shape, by rejection from its bounding box.
/// Throws std::runtime_error when the proposal budget is exhausted.
Sample sample_uniform(const Shape& shape, int n, RandomStream& rng,
                      std::uint64_t max_proposals = 1000000000ULL);

/// Reads a point sample from CSV ("x,y" header, one point per line, '#'
/// comments ignored). With `rescale` the bounding box is mapped affinely onto
/// the unit square. Parse failures report the offending line number.
Sample load_points(const std::string& path, bool rescale = false);

Sample parse_points_csv(const std::string& text, bool rescale = false);

}  // namespace conehull
