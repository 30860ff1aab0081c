#include "gauntlet/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

std::string_view to_string(TrajectoryPolicy policy) {
    switch (policy) {
        case TrajectoryPolicy::Teleport: return "teleport";
        case TrajectoryPolicy::StraightLine: return "straight_line";
        case TrajectoryPolicy::Bezier: return "bezier";
        case TrajectoryPolicy::HumanRecorded: return "human_recorded";
    }
    return "teleport";
}

TrajectoryPolicy parse_trajectory_policy(std::string_view token) {
    for (auto p : {TrajectoryPolicy::Teleport, TrajectoryPolicy::StraightLine, TrajectoryPolicy::Bezier,
                   TrajectoryPolicy::HumanRecorded})
        if (to_string(p) == token) return p;
    throw InputError(fmt::format("unknown trajectory policy: {}", token));
}

void BezierParams::validate() const {
    if (samples < 2) throw ConfigError("bezier samples must be at least 2");
    if (!(control_jitter >= 0.0)) throw ConfigError("control_jitter must be non-negative");
    if (!(ms_per_unit > 0.0) || !(min_segment_ms > 0.0)) throw ConfigError("durations must be positive");
}

Vec2 eval_cubic_bezier(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw InputError(fmt::format("bezier parameter {} outside [0, 1]", t));
    const double s = 1.0 - t;
    const double b0 = s * s * s;
    const double b1 = 3.0 * s * s * t;
    const double b2 = 3.0 * s * t * t;
    const double b3 = t * t * t;
    return {b0 * p0.x + b1 * p1.x + b2 * p2.x + b3 * p3.x, b0 * p0.y + b1 * p1.y + b2 * p2.y + b3 * p3.y};
}

namespace {

double distance(Vec2 a, Vec2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Time fraction at which an ease-in-out (raised cosine) motion has covered
// fraction u of its path.
double eased_time(double u) { return std::acos(std::clamp(1.0 - 2.0 * u, -1.0, 1.0)) / std::numbers::pi; }

}  // namespace

Trajectory plan_path(TrajectoryPolicy policy, Vec2 start, std::span<const Vec2> targets, Rng& rng,
                     const BezierParams& params) {
    if (targets.empty()) throw InputError("plan_path needs at least one target");
    if (policy == TrajectoryPolicy::HumanRecorded)
        throw InputError("human_recorded trajectories are captured, not planned");
    params.validate();

    Trajectory tr;
    tr.policy = policy;

    if (policy == TrajectoryPolicy::Teleport) {
        Vec2 from = start;
        for (Vec2 to : targets) {
            tr.points.push_back({from.x, from.y, 0.0});
            tr.points.push_back({to.x, to.y, 0.0});
            tr.click_indices.push_back(tr.points.size() - 1);
            from = to;
        }
        return tr;
    }

    tr.points.push_back({start.x, start.y, 0.0});
    Vec2 from = start;
    double clock = 0.0;
    for (Vec2 to : targets) {
        const double len = distance(from, to);
        const double duration = std::max(params.ms_per_unit * len, params.min_segment_ms);
        const Vec2 chord{to.x - from.x, to.y - from.y};

        // Control points sit at the chord thirds, which makes the cubic an
        // exact uniform-speed line when there is no perpendicular offset.
        Vec2 c1{from.x + chord.x / 3.0, from.y + chord.y / 3.0};
        Vec2 c2{from.x + 2.0 * chord.x / 3.0, from.y + 2.0 * chord.y / 3.0};
        const bool curved = policy == TrajectoryPolicy::Bezier;
        if (curved && len > 0.0) {
            const Vec2 normal{-chord.y / len, chord.x / len};
            const double o1 = params.control_jitter * len * rng.normal();
            const double o2 = params.control_jitter * len * rng.normal();
            c1 = {c1.x + o1 * normal.x, c1.y + o1 * normal.y};
            c2 = {c2.x + o2 * normal.x, c2.y + o2 * normal.y};
        }

        const int n = params.samples;
        for (int i = 1; i < n; ++i) {
            const double u = static_cast<double>(i) / (n - 1);
            Vec2 p = i == n - 1 ? to : eval_cubic_bezier(from, c1, c2, to, u);
            p.x = std::clamp(p.x, 0.0, 1.0);
            p.y = std::clamp(p.y, 0.0, 1.0);
            const double frac = curved ? eased_time(u) : u;
            tr.points.push_back({p.x, p.y, clock + duration * frac});
        }
        clock += duration;
        tr.points.back().t = clock;
        tr.click_indices.push_back(tr.points.size() - 1);
        from = to;
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Realism

namespace {

constexpr double kStraightAnchor = 0.5;
constexpr double kCurvatureWeight = 0.2;
constexpr double kDynamicsWeight = 0.25;
constexpr double kTurnScale = 0.4;       // radians of total turning
constexpr double kSpeedCvScale = 0.15;   // coefficient of variation of speed
constexpr double kRoughnessScale = 0.5;  // mean |speed change| relative to mean speed

struct Stroke {
    double duration = 0.0;
    double score = 0.0;
};

Stroke score_stroke(std::span<const Point> pts) {
    Stroke s;
    if (pts.size() < 2) return s;
    s.duration = pts.back().t - pts.front().t;
    if (!(s.duration > 0.0)) return s;

    double turning = 0.0;
    std::vector<double> speeds;
    double prev_dx = 0.0;
    double prev_dy = 0.0;
    bool have_prev = false;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dx = pts[i].x - pts[i - 1].x;
        const double dy = pts[i].y - pts[i - 1].y;
        const double dt = pts[i].t - pts[i - 1].t;
        const double len = std::hypot(dx, dy);
        if (len <= 0.0) continue;
        if (dt > 0.0) speeds.push_back(len / dt);
        if (have_prev) turning += std::abs(std::atan2(prev_dx * dy - prev_dy * dx, prev_dx * dx + prev_dy * dy));
        prev_dx = dx;
        prev_dy = dy;
        have_prev = true;
    }

    double dynamics = 0.0;
    if (speeds.size() >= 2) {
        double mean = 0.0;
        for (double v : speeds) mean += v;
        mean /= static_cast<double>(speeds.size());
        double var = 0.0;
        double rough = 0.0;
        for (std::size_t i = 0; i < speeds.size(); ++i) {
            var += (speeds[i] - mean) * (speeds[i] - mean);
            if (i > 0) rough += std::abs(speeds[i] - speeds[i - 1]);
        }
        const double cv = std::sqrt(var / static_cast<double>(speeds.size())) / mean;
        rough /= static_cast<double>(speeds.size() - 1) * mean;
        dynamics = (1.0 - std::exp(-cv / kSpeedCvScale)) * std::exp(-rough / kRoughnessScale);
    }
    const double curvature = 1.0 - std::exp(-turning / kTurnScale);
    s.score = kStraightAnchor + kCurvatureWeight * curvature + kDynamicsWeight * dynamics;
    return s;
}

}  // namespace

double realism(const Trajectory& trajectory) {
    const auto& pts = trajectory.points;
    if (trajectory.policy == TrajectoryPolicy::Teleport || pts.size() < 2) return 0.0;
    if (!(pts.back().t - pts.front().t > 0.0)) return 0.0;

    std::vector<std::size_t> cuts{0};
    for (std::size_t c : trajectory.click_indices)
        if (c > cuts.back() && c < pts.size()) cuts.push_back(c);
    if (cuts.back() != pts.size() - 1) cuts.push_back(pts.size() - 1);

    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Stroke s = score_stroke(std::span(pts).subspan(cuts[i], cuts[i + 1] - cuts[i] + 1));
        weighted += s.score * s.duration;
        total += s.duration;
    }
    return total > 0.0 ? std::clamp(weighted / total, 0.0, 1.0) : 0.0;
}

}  // namespace gauntlet
