#include "gauntlet/challenge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

std::string_view to_string(ChallengeKind kind) {
    switch (kind) {
        case ChallengeKind::Type1Grid3x3: return "type1";
        case ChallengeKind::Type2Grid4x4Segment: return "type2";
        case ChallengeKind::Type3Dynamic3x3: return "type3";
    }
    return "type1";
}

ChallengeKind parse_challenge_kind(std::string_view token) {
    if (token == "type1") return ChallengeKind::Type1Grid3x3;
    if (token == "type2") return ChallengeKind::Type2Grid4x4Segment;
    if (token == "type3") return ChallengeKind::Type3Dynamic3x3;
    throw InputError(fmt::format("unknown challenge kind: {}", token));
}

int grid_dim(ChallengeKind kind) { return kind == ChallengeKind::Type2Grid4x4Segment ? 4 : 3; }

int cell_count(ChallengeKind kind) { return grid_dim(kind) * grid_dim(kind); }

// ---------------------------------------------------------------------------
// Mask coverage

namespace {

struct GaussLegendre {
    static constexpr int kOrder = 20;
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};

    GaussLegendre() {
        for (int i = 0; i < kOrder; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= kOrder; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    template <typename F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        double sum = 0.0;
        for (int i = 0; i < kOrder; ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return sum * half;
    }
};

const GaussLegendre& gauss_legendre() {
    static const GaussLegendre rule;
    return rule;
}

// Area of the unit disk intersected with [x0,x1] x [y0,y1]. The x-range is
// split where the clipped chord length has kinks, then each piece is mapped
// through t = sin(theta), which removes the square-root endpoint behaviour.
double unit_disk_rect_area(double x0, double x1, double y0, double y1) {
    const double a = std::max(x0, -1.0);
    const double b = std::min(x1, 1.0);
    if (a >= b || y0 >= y1) return 0.0;

    std::vector<double> breaks{a, b};
    for (double y : {y0, y1}) {
        if (std::abs(y) >= 1.0) continue;
        const double r = std::sqrt(1.0 - y * y);
        for (double t : {-r, r})
            if (t > a && t < b) breaks.push_back(t);
    }
    std::sort(breaks.begin(), breaks.end());

    const auto integrand = [&](double theta) {
        const double s = std::cos(theta);
        const double len = std::min(y1, s) - std::max(y0, -s);
        return len > 0.0 ? len * s : 0.0;
    };
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::asin(breaks[i]);
        const double hi = std::asin(breaks[i + 1]);
        if (hi > lo) area += gauss_legendre().integrate(integrand, lo, hi);
    }
    return area;
}

double interval_overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

CoverageGrid mask_cell_coverage(const ObjectMask& mask) {
    constexpr double tol = 1e-12;
    if (!(mask.hx > 0.0) || !(mask.hy > 0.0))
        throw InputError("mask half-extents must be positive");
    if (mask.cx - mask.hx < -tol || mask.cx + mask.hx > 1.0 + tol || mask.cy - mask.hy < -tol ||
        mask.cy + mask.hy > 1.0 + tol)
        throw InputError("mask shape leaves the unit square");

    constexpr double side = 1.0 / kMaskGrid;
    CoverageGrid coverage{};
    for (int row = 0; row < kMaskGrid; ++row) {
        for (int col = 0; col < kMaskGrid; ++col) {
            const double x0 = col * side;
            const double x1 = x0 + side;
            const double y0 = row * side;
            const double y1 = y0 + side;
            double area = 0.0;
            if (mask.shape == ShapeKind::Rectangle) {
                area = interval_overlap(x0, x1, mask.cx - mask.hx, mask.cx + mask.hx) *
                       interval_overlap(y0, y1, mask.cy - mask.hy, mask.cy + mask.hy);
            } else {
                area = mask.hx * mask.hy *
                       unit_disk_rect_area((x0 - mask.cx) / mask.hx, (x1 - mask.cx) / mask.hx,
                                           (y0 - mask.cy) / mask.hy, (y1 - mask.cy) / mask.hy);
            }
            coverage[row * kMaskGrid + col] = std::clamp(area / (side * side), 0.0, 1.0);
        }
    }
    return coverage;
}

CellSet cells_over(const CoverageGrid& coverage, double epsilon) {
    CellSet out;
    for (int i = 0; i < kMaskCells; ++i)
        if (coverage[i] > epsilon) out.insert(i);
    return out;
}

// ---------------------------------------------------------------------------
// Generation

TargetMix TargetMix::uniform() {
    TargetMix mix;
    mix.weights.fill(1.0 / kNumClasses);
    return mix;
}

TargetMix TargetMix::degenerate(ChallengeClass c) {
    TargetMix mix;
    mix.weights[c.index()] = 1.0;
    return mix;
}

void TargetMix::validate() const {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ConfigError("target mix weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(fmt::format("target mix sums to {}, not 1", sum));
}

void GenerationParams::validate(ChallengeKind kind) const {
    if (kind == ChallengeKind::Type2Grid4x4Segment) {
        if (mask_min_cells < 1 || mask_min_cells > mask_max_cells || mask_max_cells > kMaskCells)
            throw ConfigError(fmt::format("unsatisfiable mask cell bounds [{}, {}]", mask_min_cells,
                                          mask_max_cells));
        if (!(epsilon_overlap >= 0.0 && epsilon_overlap < 1.0))
            throw ConfigError("epsilon_overlap must lie in [0, 1)");
    } else {
        if (min_targets < 0 || min_targets > max_targets || max_targets > cell_count(kind))
            throw ConfigError(
                fmt::format("unsatisfiable target bounds [{}, {}]", min_targets, max_targets));
    }
    if (!(p_replace >= 0.0 && p_replace <= 1.0)) throw ConfigError("p_replace must lie in [0, 1]");
}

namespace {

ChallengeClass draw_other_class(Rng& rng, ChallengeClass excluded) {
    auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kNumClasses) - 2));
    if (k >= excluded.index()) ++k;
    return ChallengeClass(k);
}

ObjectMask draw_mask(Rng& rng, const GenerationParams& params) {
    constexpr int kMaxAttempts = 100000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        ObjectMask m;
        m.shape = rng.bernoulli(0.5) ? ShapeKind::Rectangle : ShapeKind::Ellipse;
        m.hx = rng.uniform(0.06, 0.4);
        m.hy = rng.uniform(0.06, 0.4);
        m.cx = rng.uniform(m.hx, 1.0 - m.hx);
        m.cy = rng.uniform(m.hy, 1.0 - m.hy);
        const auto n = static_cast<int>(cells_over(mask_cell_coverage(m), params.epsilon_overlap).size());
        if (n >= params.mask_min_cells && n <= params.mask_max_cells) return m;
    }
    throw ConfigError("could not sample a mask within the configured cell bounds");
}

}  // namespace

Challenge generate_challenge(Rng& rng, ChallengeKind kind, const TargetMix& mix,
                             const GenerationParams& params) {
    mix.validate();
    params.validate(kind);

    Challenge ch;
    ch.kind = kind;
    ch.id = fmt::format("ch-{:016x}", rng.next_u64());
    ch.target = ChallengeClass(rng.categorical(mix.weights));
    ch.p_replace = params.p_replace;
    ch.epsilon_overlap = params.epsilon_overlap;

    const int n = cell_count(kind);
    ch.cells.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ch.cells[i].index = i;

    if (kind == ChallengeKind::Type2Grid4x4Segment) {
        const ObjectMask mask = draw_mask(rng, params);
        const CoverageGrid coverage = mask_cell_coverage(mask);
        for (int i = 0; i < n; ++i) {
            ch.cells[i].coverage = coverage[i];
            ch.cells[i].true_class = coverage[i] > 0.0 ? ch.target : draw_other_class(rng, ch.target);
        }
        ch.mask = mask;
        return ch;
    }

    const int targets = rng.uniform_int(params.min_targets, params.max_targets);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < targets; ++i) {
        const int j = rng.uniform_int(i, n - 1);
        std::swap(order[i], order[j]);
    }
    for (int i = 0; i < n; ++i) {
        auto& cell = ch.cells[order[i]];
        cell.true_class = i < targets ? ch.target : draw_other_class(rng, ch.target);
    }
    return ch;
}

// ---------------------------------------------------------------------------
// Grading

CellSet expected_selection(const Challenge& challenge) {
    CellSet expected;
    for (const auto& cell : challenge.cells) {
        const bool hit = challenge.kind == ChallengeKind::Type2Grid4x4Segment
                             ? cell.coverage > challenge.epsilon_overlap
                             : cell.true_class == challenge.target;
        if (hit) expected.insert(cell.index);
    }
    return expected;
}

namespace {
void check_indices(const Challenge& challenge, const CellSet& cells) {
    const int n = static_cast<int>(challenge.cells.size());
    for (int i : cells)
        if (i < 0 || i >= n)
            throw InputError(fmt::format("cell index {} out of range for {} cells", i, n));
}
}  // namespace

GradeResult grade(const Challenge& challenge, const CellSet& selection) {
    check_indices(challenge, selection);
    GradeResult r;
    r.expected = expected_selection(challenge);
    r.selected = selection;
    r.passed = r.expected == r.selected;
    return r;
}

Challenge replace_clicked(const Challenge& challenge, const CellSet& clicked, Rng& rng) {
    if (challenge.kind != ChallengeKind::Type3Dynamic3x3)
        throw InputError("replace_clicked requires a dynamic (type3) challenge");
    check_indices(challenge, clicked);
    Challenge next = challenge;
    for (int i : clicked) {
        auto& cell = next.cells[i];
        cell.true_class = rng.bernoulli(challenge.p_replace) ? challenge.target
                                                              : draw_other_class(rng, challenge.target);
        ++cell.generation;
    }
    return next;
}

RoundsGrade grade_rounds(std::span<const ChallengeRound> rounds) {
    RoundsGrade out;
    if (rounds.empty()) return out;
    out.passed = true;
    for (const auto& round : rounds) {
        out.rounds.push_back(grade(round.shown, round.clicked));
        out.passed = out.passed && out.rounds.back().passed;
    }
    if (rounds.front().shown.kind == ChallengeKind::Type3Dynamic3x3 && !rounds.back().clicked.empty())
        out.passed = false;
    return out;
}

}  // namespace gauntlet
