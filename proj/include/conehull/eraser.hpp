#pragma once

/// \file
/// \brief Stochastic cone-erasing estimator of the cone-convex hull by
/// complement, plus a spherical-eraser comparator for the r-convex hull.
///
/// The estimator starts from a rectangular frame containing the sample and
/// repeatedly removes vertex-anchored sectors certified empty of sample
/// points; what survives approximates the hull.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conehull/geometry.hpp"
#include "conehull/rng.hpp"
#include "conehull/shapes.hpp"

namespace conehull {

enum class EraseMode {
    /// Erase only the sector between the two extreme rotated axes.
    PaperLiteral,
    /// Erase the full union of the swept empty cones (the literal sector
    /// widened by rho/2 on each side). Never degenerate, same soundness.
    Extended,
};

/// Extended-mode flanks are pulled in by this angle so the closed sector
/// stays strictly inside the open union of empty cones; the blocking sample
/// points sit exactly on that union's boundary.
inline constexpr double kExtendedEdgeShrink = 1e-9;

struct EraserConfig {
    double rho = kPi / 4;                       // cone opening, (0, pi]
    double h = 0.5;                             // cone height; may be kUnboundedHeight
    std::uint32_t target_erasures = 200;        // successful erasures to perform
    std::uint64_t max_attempts_per_erasure = 100000;
    EraseMode mode = EraseMode::Extended;
    std::optional<double> axis_min;             // candidate-axis angle interval,
    std::optional<double> axis_max;             // also caps the sweep
    std::uint64_t seed = 0;
};

/// Largest clockwise (theta_cw >= 0) and counterclockwise (theta_ccw <= 0)
/// rotations of the seed cone such that every intermediate rotation stays
/// empty of sample points; each side caps at pi/2.
struct SweepResult {
    double theta_cw = kPi / 2;
    double theta_ccw = -kPi / 2;
};

/// max_sweep requires an empty seed cone; this reports a violated call.
class SeedConeNotEmptyError : public std::logic_error {
public:
    SeedConeNotEmptyError() : std::logic_error("max_sweep: seed cone contains a sample point") {}
};

struct Candidate {
    Point vertex;
    UnitVec axis;
    double axis_angle = 0.0;   // the drawn angle, exact (no atan2 round trip)
};

enum class EstimatorKind { Cone, Ball };

/// Echo of the run parameters, carried along for serialization.
struct RegionProvenance {
    EstimatorKind kind = EstimatorKind::Cone;
    double rho = 0.0;
    double h = 0.0;
    double r = 0.0;
    std::uint32_t target_erasures = 0;
    std::uint64_t max_attempts_per_erasure = 0;
    EraseMode mode = EraseMode::Extended;
    std::optional<double> axis_min;
    std::optional<double> axis_max;
    std::uint64_t seed = 0;
};

/// Frame minus an append-only list of erased sectors. Membership queries run
/// against a uniform-grid index over sector bounding boxes, so they stay
/// cheap at thousands of sectors.
class ErasedRegion {
public:
    explicit ErasedRegion(const Frame& frame);
    ErasedRegion(const Frame& frame, const RegionProvenance& provenance);

    const Frame& frame() const { return frame_; }
    const std::vector<Sector>& sectors() const { return sectors_; }
    const RegionProvenance& provenance() const { return provenance_; }

    std::uint64_t attempts() const { return attempts_; }
    std::size_t erasures() const { return sectors_.size(); }
    bool early_stop() const { return early_stop_; }

    /// True iff p lies in the (closed) frame and in no erased sector.
    bool contains(Point p) const;

    void append(const Sector& sector);
    void count_attempt() { ++attempts_; }
    void mark_early_stop() { early_stop_ = true; }
    void set_attempts(std::uint64_t n) { attempts_ = n; }

private:
    std::size_t cell_of(Point p) const;

    Frame frame_;
    RegionProvenance provenance_;
    std::vector<Sector> sectors_;
    std::uint64_t attempts_ = 0;
    bool early_stop_ = false;

    static constexpr int kIndexResolution = 64;
    std::vector<std::vector<std::uint32_t>> index_;
    double inv_dx_ = 0.0;
    double inv_dy_ = 0.0;
};

/// Step 1: vertex uniform on the frame, axis uniform on the circle (or on the
/// configured axis interval). Three uniform draws per call: x, y, angle.
Candidate draw_candidate(const Frame& frame, const EraserConfig& config, RandomStream& rng);

/// Step 3 sweep, in closed form from the blocking angles of the sample.
SweepResult max_sweep(const Sample& sample, Point vertex, UnitVec axis, double rho, double h);

/// The sector one successful step erases: the interval between the extreme
/// rotated axes, widened by the rho/2 flanks in extended mode.
Sector build_erase_sector(const Candidate& candidate, const SweepResult& sweep,
                          const EraserConfig& config, double effective_height);

/// Steps 1-3 once. Returns false (attempt counted, nothing erased) when the
/// candidate cone intersects the sample; otherwise appends one sector.
bool erase_step(ErasedRegion& region, const Sample& sample, const EraserConfig& config,
                RandomStream& rng);

/// Iterates erase_step until `target_erasures` successes, or marks an early
/// stop after `max_attempts_per_erasure` consecutive failures.
ErasedRegion run_eraser(const Sample& sample, const Frame& frame, const EraserConfig& config);

/// Spherical comparator: centers uniform on the frame dilated by r, erasing
/// the open disk B(c, r) whenever it misses the sample.
ErasedRegion run_ball_eraser(const Sample& sample, const Frame& frame, double r,
                             std::uint32_t target_erasures, std::uint64_t max_attempts_per_erasure,
                             std::uint64_t seed);

/// Fixed-order JSON document for a completed region; doubles carry 17
/// significant digits so values round-trip exactly.
std::string region_to_json(const ErasedRegion& region);
void write_region_json(const ErasedRegion& region, const std::string& path);
ErasedRegion read_region_json(const std::string& path);
ErasedRegion parse_region_json(const std::string& text);

}  // namespace conehull
