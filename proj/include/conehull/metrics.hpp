#pragma once

/// \file
/// \brief Distances between point sets and between membership-defined sets:
/// exact Hausdorff for finite sets, grid Hausdorff and boundary Hausdorff for
/// regions, Monte Carlo symmetric-difference measure.

#include <cstdint>
#include <functional>
#include <optional>

#include "conehull/geometry.hpp"
#include "conehull/rng.hpp"
#include "conehull/shapes.hpp"

namespace conehull {

using MembershipFn = std::function<bool(Point)>;

struct GridSpec {
    Frame frame;
    int resolution = 256;   // cells per axis, >= 2

    double cell_dx() const { return frame.width() / resolution; }
    double cell_dy() const { return frame.height() / resolution; }
    double cell_diagonal() const { return std::hypot(cell_dx(), cell_dy()); }
    Point center(int ix, int iy) const {
        return {frame.xmin + (ix + 0.5) * cell_dx(), frame.ymin + (iy + 0.5) * cell_dy()};
    }
};

struct MetricEstimate {
    double value = 0.0;
    /// Monte Carlo standard error, or the deterministic grid bound.
    std::optional<double> standard_error;
    std::int64_t budget = 0;   // points or cells used
};

/// Exact two-sided max-min Euclidean distance between finite point sets.
double hausdorff_point_sets(const Sample& a, const Sample& b);

/// Exact minimum distance from p to the points of a.
double dist_to_point_set(Point p, const Sample& a);

/// Hausdorff distance between the sets of cell centers classified inside each
/// predicate; the deterministic error bound (one cell diagonal) is reported
/// in the standard_error slot.
MetricEstimate hausdorff_grid(const MembershipFn& a, const MembershipFn& b, const GridSpec& grid);

/// Hausdorff distance between the boundary-cell center sets of the two
/// predicates. A cell is boundary when its classification differs from any
/// 4-neighbor; cells beyond the grid count as outside.
MetricEstimate boundary_hausdorff_grid(const MembershipFn& a, const MembershipFn& b,
                                       const GridSpec& grid);

/// Measure of the symmetric difference, by uniform Monte Carlo on the frame.
MetricEstimate measure_diff_mc(const MembershipFn& a, const MembershipFn& b, const Frame& frame,
                               std::int64_t n_mc, RandomStream& rng);

/// Hausdorff distance between a finite sample and the cell centers classified
/// inside the predicate. Exact on those two point sets (bucketed nearest
/// neighbor), so usable at fine resolutions.
MetricEstimate hausdorff_sample_to_grid(const Sample& sample, const MembershipFn& region,
                                        const GridSpec& grid);

}  // namespace conehull
