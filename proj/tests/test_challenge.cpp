#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gauntlet/challenge.hpp"
#include "gauntlet/error.hpp"

using namespace gauntlet;

namespace {

CellSet subset_from_mask(unsigned bits, int n) {
    CellSet s;
    for (int i = 0; i < n; ++i)
        if (bits & (1u << i)) s.insert(i);
    return s;
}

// Area of the ellipse inside [x0,x1]x[y0,y1], by a fine midpoint rule over x
// of the exact vertical chord clipped to the cell.
double ellipse_cell_area(const ObjectMask& m, double x0, double x1, double y0, double y1) {
    constexpr int steps = 20000;
    const double lo = std::max(x0, m.cx - m.hx);
    const double hi = std::min(x1, m.cx + m.hx);
    if (hi <= lo) return 0.0;
    const double h = (hi - lo) / steps;
    double area = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double x = lo + (i + 0.5) * h;
        const double u = (x - m.cx) / m.hx;
        const double half = m.hy * std::sqrt(std::max(0.0, 1.0 - u * u));
        const double a = std::max(y0, m.cy - half);
        const double b = std::min(y1, m.cy + half);
        if (b > a) area += (b - a) * h;
    }
    return area;
}

}  // namespace

TEST_CASE("grid geometry") {
    CHECK(grid_dim(ChallengeKind::Type1Grid3x3) == 3);
    CHECK(grid_dim(ChallengeKind::Type2Grid4x4Segment) == 4);
    CHECK(cell_count(ChallengeKind::Type3Dynamic3x3) == 9);
    CHECK(cell_count(ChallengeKind::Type2Grid4x4Segment) == 16);
    for (auto k : {ChallengeKind::Type1Grid3x3, ChallengeKind::Type2Grid4x4Segment, ChallengeKind::Type3Dynamic3x3})
        CHECK(parse_challenge_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_challenge_kind("type4"), InputError);
}

TEST_CASE("exactly one of the 512 subsets passes a 3x3 grid") {
    Rng rng(2024);
    for (int instance = 0; instance < 40; ++instance) {
        const auto kind = instance % 2 ? ChallengeKind::Type1Grid3x3 : ChallengeKind::Type3Dynamic3x3;
        const Challenge ch = generate_challenge(rng, kind, TargetMix::uniform());
        CellSet truth;
        for (const auto& c : ch.cells)
            if (c.true_class == ch.target) truth.insert(c.index);
        int passing = 0;
        for (unsigned bits = 0; bits < 512; ++bits) {
            const CellSet s = subset_from_mask(bits, 9);
            if (grade(ch, s).passed) {
                ++passing;
                CHECK(s == truth);
            }
        }
        CHECK(passing == 1);
    }
}

TEST_CASE("grade rejects out-of-range cells") {
    Rng rng(1);
    const Challenge ch = generate_challenge(rng, ChallengeKind::Type1Grid3x3, TargetMix::uniform());
    CHECK_THROWS_AS(grade(ch, {9}), InputError);
    CHECK_THROWS_AS(grade(ch, {-1}), InputError);
}

TEST_CASE("generated grids respect target-count bounds") {
    Rng rng(17);
    GenerationParams p;
    for (int i = 0; i < 500; ++i) {
        const Challenge ch = generate_challenge(rng, ChallengeKind::Type1Grid3x3, TargetMix::uniform(), p);
        const auto k = expected_selection(ch).size();
        CHECK(k >= 1);
        CHECK(k <= 6);
        CHECK(ch.cells.size() == 9);
        for (int j = 0; j < 9; ++j) CHECK(ch.cells[j].index == j);
    }
    p.min_targets = p.max_targets = 3;
    for (int i = 0; i < 50; ++i)
        CHECK(expected_selection(generate_challenge(rng, ChallengeKind::Type3Dynamic3x3, TargetMix::uniform(), p))
                  .size() == 3);
}

TEST_CASE("generation is deterministic per seed") {
    for (auto kind : {ChallengeKind::Type1Grid3x3, ChallengeKind::Type2Grid4x4Segment, ChallengeKind::Type3Dynamic3x3}) {
        Rng a(7), b(7), c(8);
        const auto x = generate_challenge(a, kind, TargetMix::uniform());
        CHECK(x == generate_challenge(b, kind, TargetMix::uniform()));
        CHECK_FALSE(x == generate_challenge(c, kind, TargetMix::uniform()));
    }
}

TEST_CASE("degenerate target mix always picks its class") {
    Rng rng(3);
    const auto bus = ChallengeClass::parse("bus");
    for (int i = 0; i < 50; ++i)
        CHECK(generate_challenge(rng, ChallengeKind::Type2Grid4x4Segment, TargetMix::degenerate(bus)).target == bus);
}

TEST_CASE("rectangle coverage is exact") {
    ObjectMask centre{ShapeKind::Rectangle, 0.5, 0.5, 0.25, 0.25};
    const auto cov = mask_cell_coverage(centre);
    for (int i = 0; i < 16; ++i) {
        const bool inner = i == 5 || i == 6 || i == 9 || i == 10;
        CHECK(cov[i] == doctest::Approx(inner ? 1.0 : 0.0));
    }
    // straddles cells 0 and 1 horizontally, top half of row 0
    ObjectMask strip{ShapeKind::Rectangle, 0.25, 0.0625, 0.125, 0.0625};
    const auto s = mask_cell_coverage(strip);
    CHECK(s[0] == doctest::Approx(0.25));
    CHECK(s[1] == doctest::Approx(0.25));
    CHECK(cells_over(s, 0.0) == CellSet{0, 1});
}

TEST_CASE("ellipse coverage matches area and a fine numerical integral") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        ObjectMask m{ShapeKind::Ellipse, 0, 0, rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.45)};
        m.cx = rng.uniform(m.hx, 1.0 - m.hx);
        m.cy = rng.uniform(m.hy, 1.0 - m.hy);
        const auto cov = mask_cell_coverage(m);
        double total = 0.0;
        for (int i = 0; i < 16; ++i) {
            const double x0 = (i % 4) * 0.25, y0 = (i / 4) * 0.25;
            const double ref = ellipse_cell_area(m, x0, x0 + 0.25, y0, y0 + 0.25) / 0.0625;
            CHECK(std::abs(cov[i] - ref) <= 1e-4);
            total += cov[i] * 0.0625;
        }
        CHECK(std::abs(total - std::numbers::pi * m.hx * m.hy) <= 1e-9);
    }
}

TEST_CASE("masks outside the unit square are rejected") {
    CHECK_THROWS_AS(mask_cell_coverage({ShapeKind::Rectangle, 0.1, 0.5, 0.2, 0.1}), InputError);
    CHECK_THROWS_AS(mask_cell_coverage({ShapeKind::Ellipse, 0.5, 0.5, 0.0, 0.1}), InputError);
}

TEST_CASE("type2 challenges carry a consistent mask") {
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const Challenge ch = generate_challenge(rng, ChallengeKind::Type2Grid4x4Segment, TargetMix::uniform());
        REQUIRE(ch.mask);
        const auto cov = mask_cell_coverage(*ch.mask);
        const auto over = cells_over(cov, ch.epsilon_overlap);
        CHECK(over.size() >= 2);
        CHECK(over.size() <= 8);
        CHECK(expected_selection(ch) == over);
        for (int j = 0; j < 16; ++j) CHECK(ch.cells[j].coverage == cov[j]);
        CHECK(grade(ch, over).passed);
    }
}

TEST_CASE("replace_clicked honours p_replace") {
    Rng rng(12);
    GenerationParams p;
    p.min_targets = p.max_targets = 4;
    for (double pr : {0.0, 1.0}) {
        p.p_replace = pr;
        const Challenge ch = generate_challenge(rng, ChallengeKind::Type3Dynamic3x3, TargetMix::uniform(), p);
        const CellSet clicked = expected_selection(ch);
        const Challenge next = replace_clicked(ch, clicked, rng);
        for (int i = 0; i < 9; ++i) {
            if (clicked.contains(i)) {
                CHECK(next.cells[i].generation == ch.cells[i].generation + 1);
                CHECK((next.cells[i].true_class == ch.target) == (pr == 1.0));
            } else {
                CHECK(next.cells[i] == ch.cells[i]);
            }
        }
    }
    Rng r2(1);
    const Challenge t1 = generate_challenge(r2, ChallengeKind::Type1Grid3x3, TargetMix::uniform());
    CHECK_THROWS_AS(replace_clicked(t1, {0}, r2), InputError);
}

TEST_CASE("dynamic grading needs every round right and a final empty round") {
    Rng rng(21);
    GenerationParams p;
    p.p_replace = 0.0;
    const Challenge ch = generate_challenge(rng, ChallengeKind::Type3Dynamic3x3, TargetMix::uniform(), p);
    const CellSet truth = expected_selection(ch);
    const Challenge next = replace_clicked(ch, truth, rng);
    CHECK(expected_selection(next).empty());

    std::vector<ChallengeRound> good{{ch, truth}, {next, {}}};
    CHECK(grade_rounds(good).passed);
    CHECK(grade_rounds(good).rounds.size() == 2);

    std::vector<ChallengeRound> unconfirmed{{ch, truth}};
    CHECK_FALSE(grade_rounds(unconfirmed).passed);

    CellSet extra = truth;
    for (int i = 0; i < 9; ++i)
        if (!truth.contains(i)) {
            extra.insert(i);
            break;
        }
    std::vector<ChallengeRound> wrong{{ch, extra}, {replace_clicked(ch, extra, rng), {}}};
    CHECK_FALSE(grade_rounds(wrong).passed);
    CHECK_FALSE(grade_rounds({}).passed);
}

TEST_CASE("parameter validation") {
    GenerationParams p;
    p.min_targets = -1;
    CHECK_THROWS_AS(p.validate(ChallengeKind::Type1Grid3x3), ConfigError);
    p.min_targets = 0;  // empty grids are allowed; the right answer is no clicks
    p.validate(ChallengeKind::Type1Grid3x3);
    p = {};
    p.max_targets = 10;
    CHECK_THROWS_AS(p.validate(ChallengeKind::Type1Grid3x3), ConfigError);
    p = {};
    p.p_replace = 1.5;
    CHECK_THROWS_AS(p.validate(ChallengeKind::Type3Dynamic3x3), ConfigError);
    TargetMix bad = TargetMix::uniform();
    bad.weights[0] += 0.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
