#pragma once
// Cursor paths between click targets, and the realism score the risk
// engine reads off them. Screen space is the unit square.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gauntlet/rng.hpp"

namespace gauntlet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;  // milliseconds since the start of the trajectory

    friend bool operator==(const Point&, const Point&) = default;
};

enum class TrajectoryPolicy { Teleport, StraightLine, Bezier, HumanRecorded };

std::string_view to_string(TrajectoryPolicy policy);
TrajectoryPolicy parse_trajectory_policy(std::string_view token);

struct Trajectory {
    std::vector<Point> points;
    TrajectoryPolicy policy = TrajectoryPolicy::Teleport;
    /// Indices into `points` at which a click happens; one per target.
    std::vector<std::size_t> click_indices;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct BezierParams {
    double control_jitter = 0.25;  // perpendicular offset, as a fraction of the chord
    int samples = 64;              // points per segment, endpoints included
    double ms_per_unit = 800.0;    // base duration per unit of distance
    double min_segment_ms = 40.0;

    void validate() const;
};

/// Cubic Bernstein form. Throws InputError for t outside [0, 1].
Vec2 eval_cubic_bezier(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3, double t);

/// Plans a path visiting `targets` in order. StraightLine and Bezier share
/// the sampling and duration model in `params`; Bezier additionally bends
/// each segment and eases its timing in and out. Throws InputError for an
/// empty target list or the HumanRecorded policy.
Trajectory plan_path(TrajectoryPolicy policy, Vec2 start, std::span<const Vec2> targets, Rng& rng,
                     const BezierParams& params = {});

/// Human-likeness in [0, 1]. Zero-duration movement scores 0, a
/// constant-speed straight line 0.5; curvature and a smooth, varying speed
/// profile raise the score toward 0.95.
double realism(const Trajectory& trajectory);

}  // namespace gauntlet
