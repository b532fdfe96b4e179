#pragma once

/// \file
/// \brief Planar primitives: points, unit directions, finite cones, circular
/// sectors, and the parameter conversions used by the cone-convex machinery.

#include <cmath>
#include <limits>

namespace conehull {

inline constexpr double kPi = 3.14159265358979323846;

/// Sentinel height for unbounded (lighthouse-style) cones. Use sites
/// substitute a finite reach, typically the frame diagonal.
inline constexpr double kUnboundedHeight = std::numeric_limits<double>::infinity();

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double squared_norm(Point p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point p) { return std::sqrt(squared_norm(p)); }
inline double distance(Point a, Point b) { return norm(b - a); }

/// Direction on the unit circle. Construct through the factories so the
/// unit-norm invariant (within 1e-12) holds.
struct UnitVec {
    double x = 1.0;
    double y = 0.0;

    static UnitVec from_angle(double radians) {
        return UnitVec{std::cos(radians), std::sin(radians)};
    }

    /// Normalizes an arbitrary nonzero vector.
    static UnitVec normalized(double vx, double vy) {
        const double n = std::hypot(vx, vy);
        return UnitVec{vx / n, vy / n};
    }

    static UnitVec towards(Point from, Point to) {
        return normalized(to.x - from.x, to.y - from.y);
    }

    /// Counterclockwise angle from (1,0), in (-pi, pi].
    double angle() const {
        const double a = std::atan2(y, x);
        return a <= -kPi ? kPi : a;
    }
};

inline double dot(UnitVec a, UnitVec b) { return a.x * b.x + a.y * b.y; }
inline double cross(UnitVec a, UnitVec b) { return a.x * b.y - a.y * b.x; }
inline double cross(UnitVec a, Point b) { return a.x * b.y - a.y * b.x; }
inline double cross(Point a, UnitVec b) { return a.x * b.y - a.y * b.x; }

/// Open finite cone: vertex excluded, opening angle `opening` in (0, pi],
/// points closer than `height` to the vertex and within `opening`/2 of the
/// axis direction.
struct FiniteCone {
    Point vertex;
    UnitVec axis;
    double opening = kPi / 2;     // radians
    double height = 1.0;          // may be kUnboundedHeight
};

/// Vertex-anchored circular pie slice. Angles are counterclockwise; the
/// covered directions run from `start_dir` through `span` radians to
/// `end_dir`. Closed in angle, open in radius, vertex excluded. A span of
/// 2*pi (with start_dir == end_dir) denotes a full punctured disk.
struct Sector {
    Point vertex;
    UnitVec start_dir;
    UnitVec end_dir;
    double span = 0.0;            // radians in [0, 2*pi]
    double radius = 1.0;
};

/// Axis-aligned rectangle; the sampling window E of the eraser.
struct Frame {
    double xmin = 0.0;
    double xmax = 1.0;
    double ymin = 0.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double diagonal() const { return std::hypot(width(), height()); }

    bool contains(Point p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }

    Frame dilated(double margin) const {
        return Frame{xmin - margin, xmax + margin, ymin - margin, ymax + margin};
    }
};

/// Quantities derived from (rho, h): the reduced cone parameters guaranteeing
/// that a cone-convex-by-complement set is also cone-convex, the unavoidable
/// family angle gamma with its height h_one, and the boundary-rate constant.
struct DerivedParams {
    double rho_prime = 0.0;   // reduced opening
    double h_prime = 0.0;     // reduced height, (h/2)*sin(rho/2)
    double gamma = 0.0;       // covering-family opening; equals rho_prime
    double h_one = 0.0;       // covering-family height, (h/2)*sin(rho/2)
    double k_const = 0.0;     // 3 + 2/sin(rho/2), always > 5
};

/// Rotates `u` by `theta`; positive theta turns clockwise (a direction at
/// counterclockwise angle a maps to a - theta), negative counterclockwise.
UnitVec rotate_cw(UnitVec u, double theta);

/// Angle of `target` measured from `reference`, in (-pi, pi], positive when
/// `target` lies counterclockwise of `reference`.
double signed_angle(UnitVec reference, UnitVec target);

/// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double radians);

/// Open-cone membership: 0 < |p - vertex| < height and the direction to p
/// within opening/2 of the axis, all inequalities strict.
bool cone_contains(const FiniteCone& cone, Point p);

/// Sector membership: closed in angle, open in radius, vertex excluded.
bool sector_contains(const Sector& sector, Point p);

/// Validates 0 < rho <= pi and h > 0, throwing std::domain_error otherwise.
void require_cone_params(double rho, double h);

DerivedParams derived_params(double rho, double h);

}  // namespace conehull
