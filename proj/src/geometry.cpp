#include "conehull/geometry.hpp"

#include <stdexcept>

namespace conehull {

UnitVec rotate_cw(UnitVec u, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Clockwise rotation matrix [c s; -s c].
    return UnitVec{u.x * c + u.y * s, -u.x * s + u.y * c};
}

double signed_angle(UnitVec reference, UnitVec target) {
    const double a = std::atan2(cross(reference, target), dot(reference, target));
    // atan2 may yield -pi for directions exactly opposite; fold onto +pi.
    return a <= -kPi ? kPi : a;
}

double wrap_two_pi(double radians) {
    double a = std::fmod(radians, 2 * kPi);
    if (a < 0) a += 2 * kPi;
    return a;
}

bool cone_contains(const FiniteCone& cone, Point p) {
    const Point d = p - cone.vertex;
    const double r2 = squared_norm(d);
    if (r2 <= 0.0) return false;
    if (!(r2 < cone.height * cone.height)) return false;
    const double r = std::sqrt(r2);
    // <axis, d/|d|> > cos(opening/2), strict: the cone is open.
    return dot(cone.axis, UnitVec{d.x / r, d.y / r}) > std::cos(cone.opening / 2);
}

bool sector_contains(const Sector& sector, Point p) {
    const Point d = p - sector.vertex;
    const double r2 = squared_norm(d);
    if (r2 <= 0.0 || r2 >= sector.radius * sector.radius) return false;
    if (sector.span >= 2 * kPi) return true;
    if (sector.span <= kPi) {
        // d must lie (weakly) counterclockwise of start and clockwise of end.
        return cross(sector.start_dir, d) >= 0.0 && cross(d, sector.end_dir) >= 0.0;
    }
    // Reflex sector: complement wedge from end to start is narrower than pi;
    // containment means not strictly inside that complement.
    return !(cross(sector.end_dir, d) > 0.0 && cross(d, sector.start_dir) > 0.0);
}

void require_cone_params(double rho, double h) {
    if (!(rho > 0.0) || !(rho <= kPi)) {
        throw std::domain_error("cone opening rho must lie in (0, pi]");
    }
    if (!(h > 0.0)) {
        throw std::domain_error("cone height h must be positive");
    }
}

DerivedParams derived_params(double rho, double h) {
    require_cone_params(rho, h);
    DerivedParams out;
    out.rho_prime = rho <= kPi / 3 ? rho : (kPi - rho) / 2;
    out.h_prime = (h / 2) * std::sin(rho / 2);
    out.gamma = out.rho_prime;
    out.h_one = out.h_prime;
    out.k_const = 3.0 + 2.0 / std::sin(rho / 2);
    return out;
}

}  // namespace conehull
