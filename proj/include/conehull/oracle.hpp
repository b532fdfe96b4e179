#pragma once

/// \file
/// \brief Brute-force certification tools: a cone-separation oracle that
/// witnesses points outside the cone-convex hull by complement, and the
/// unavoidable cone families behind the mean-rate argument, with empirical
/// unavoidability checks.

#include <cstdint>
#include <optional>
#include <vector>

#include "conehull/geometry.hpp"
#include "conehull/shapes.hpp"

namespace conehull {

/// When `cone` is present it contains the query and no sample point, proving
/// the query lies outside the hull. Absence proves nothing (one-sided).
struct SeparationCertificate {
    std::optional<FiniteCone> cone;
    double vertex_grid_step = 0.0;
    int axis_count = 0;

    bool found() const { return cone.has_value(); }
};

/// Scans vertices on a grid over the disk of radius h about the query
/// (nearest-first) and axes equally spaced on the circle; returns the first
/// cone of opening rho and height h containing the query and empty of sample
/// points. Every returned certificate is re-verified with the exact
/// membership predicate.
SeparationCertificate separation_oracle(const Sample& sample, Point query, double rho, double h,
                                        double vertex_grid_step, int axis_count);

/// Cones of opening gamma/2 and height h_one sharing a vertex, with axes
/// equally spaced so adjacent arcs are at most gamma/2 apart; every rho,h-cone
/// containing the vertex contains some member.
struct UnavoidableFamily {
    Point center;
    double gamma = 0.0;
    double h_one = 0.0;
    std::vector<UnitVec> axes;

    std::size_t cardinality() const { return axes.size(); }
    FiniteCone member(std::size_t j) const {
        return FiniteCone{center, axes[j], gamma / 2, h_one};
    }
};

/// gamma and h_one follow derived_params; cardinality is ceil(4*pi/gamma).
/// At rho == pi the formula degenerates (gamma -> 0) and a gamma of pi/4 is
/// substituted, which the empirical check validates.
UnavoidableFamily build_unavoidable_family(Point x, double rho, double h);

/// Draws `trials` random rho,h-cones containing the family's center and
/// searches the family for a member inside each, testing containment on 1000
/// low-discrepancy points per member. Returns the fraction of trials where a
/// member fits.
double check_unavoidability(const UnavoidableFamily& family, double rho, double h,
                            std::int64_t trials, std::uint64_t seed, int threads = 1);

}  // namespace conehull
