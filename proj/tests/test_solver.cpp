#include <doctest.h>

#include <cmath>
#include <vector>

#include "gauntlet/error.hpp"
#include "gauntlet/solver.hpp"

using namespace gauntlet;

namespace {

long argmax(const ProbabilityVector& v) {
    return std::max_element(v.begin(), v.end()) - v.begin();
}

std::vector<long> argmax_counts(const ClassifierModel& m, ChallengeClass c, int draws, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<long> counts(kNumClasses, 0);
    for (int i = 0; i < draws; ++i) ++counts[argmax(classify(m, c, rng))];
    return counts;
}

}  // namespace

TEST_CASE("threshold selection is strict") {
    const std::vector<double> probs{0.5, 0.1, 0.3, 0.2, 0.19, 0.21, 0.0, 0.9, 0.05};
    CHECK(select_above_threshold(probs, 0.2) == CellSet{0, 2, 5, 7});
    const std::vector<double> edge{0.21, 0.20};
    CHECK(select_above_threshold(edge, 0.2) == CellSet{0});
}

TEST_CASE("overlap rule with epsilon") {
    CoverageGrid cov{};
    cov[5] = 0.40;
    cov[6] = 0.02;
    CHECK(cells_over(cov, 0.0) == CellSet{5, 6});
    CHECK(cells_over(cov, 0.05) == CellSet{5});
}

TEST_CASE("default confusion matrix") {
    const auto m = default_confusion();
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        double sum = 0.0;
        for (double p : m[i]) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
    CHECK(m[classes::bicycle().index()][classes::bicycle().index()] == 0.89);
    CHECK(m[classes::bridge().index()][classes::bridge().index()] == 0.84);
    CHECK(m[classes::bus().index()][classes::bus().index()] == 0.97);
    CHECK(m[classes::hydrant().index()][classes::hydrant().index()] == 1.0);
    const double expected = (0.89 + 0.84 + 0.97 + 1.0 + 9 * kCommonDiagonal) / 13.0;
    CHECK(macro_top1(m) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(macro_top1(m) - 0.824) <= 0.001);
    ClassifierModel{}.validate();
}

TEST_CASE("classifier vectors are distributions") {
    Rng rng(4);
    ClassifierModel m;
    for (int i = 0; i < 2000; ++i) {
        const auto v = classify(m, ChallengeClass(static_cast<std::size_t>(i % kNumClasses)), rng);
        double s = 0.0;
        for (double p : v) {
            CHECK(p >= 0.0);
            s += p;
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("hydrant is always top-1") {
    ClassifierModel m;
    const auto counts = argmax_counts(m, classes::hydrant(), 20000, 8);
    CHECK(counts[classes::hydrant().index()] == 20000);
    m.concentration = 1e6;
    CHECK(argmax_counts(m, classes::hydrant(), 2000, 9)[classes::hydrant().index()] == 2000);
}

TEST_CASE("bicycle top-1 frequency") {
    const auto counts = argmax_counts(ClassifierModel{}, classes::bicycle(), 100000, 10);
    CHECK(std::abs(counts[classes::bicycle().index()] / 1e5 - 0.89) <= 0.01);
}

TEST_CASE("argmax frequencies fit the confusion row (chi-square, alpha 0.01)") {
    // 99th percentile of chi-square with 12 degrees of freedom
    constexpr double critical = 26.217;
    const ClassifierModel m;
    constexpr int n = 100000;
    for (auto c : {classes::bicycle(), classes::car(), classes::stairs()}) {
        const auto counts = argmax_counts(m, c, n, 1000 + c.index());
        double chi2 = 0.0;
        for (std::size_t j = 0; j < kNumClasses; ++j) {
            const double e = n * m.confusion[c.index()][j];
            chi2 += (counts[j] - e) * (counts[j] - e) / e;
        }
        CHECK(chi2 < critical);
    }
}

TEST_CASE("misclassified cells keep the true class as runner-up") {
    Rng rng(31);
    ClassifierModel m;
    const auto car = classes::car();
    int confused = 0, runner_up = 0;
    for (int i = 0; i < 20000; ++i) {
        const auto v = classify(m, car, rng);
        if (argmax(v) == static_cast<long>(car.index())) continue;
        ++confused;
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        runner_up += v[car.index()] == sorted[1];
    }
    CHECK(confused > 0);
    CHECK(runner_up / static_cast<double>(confused) > 0.95);
}

TEST_CASE("raising the threshold never adds cells") {
    Rng gen(14);
    for (int trial = 0; trial < 200; ++trial) {
        const Challenge ch = generate_challenge(gen, ChallengeKind::Type1Grid3x3, TargetMix::uniform());
        ClassifierModel lo, hi;
        lo.threshold = 0.1 + 0.001 * trial;
        hi.threshold = lo.threshold + 0.15;
        Rng a(trial), b(trial);
        const auto s_lo = std::get<Selection>(solve_grid_classification(lo, ch, ch.target, a)).cells;
        const auto s_hi = std::get<Selection>(solve_grid_classification(hi, ch, ch.target, b)).cells;
        CHECK(std::includes(s_lo.begin(), s_lo.end(), s_hi.begin(), s_hi.end()));
    }
}

TEST_CASE("classification refuses segmentation challenges") {
    Rng rng(2);
    const Challenge ch = generate_challenge(rng, ChallengeKind::Type2Grid4x4Segment, TargetMix::uniform());
    CHECK_THROWS_AS(solve_grid_classification(ClassifierModel{}, ch, ch.target, rng), InputError);
    const Challenge t1 = generate_challenge(rng, ChallengeKind::Type1Grid3x3, TargetMix::uniform());
    CHECK_THROWS_AS(solve_segmentation(SegmentationModel::default_model(), t1, rng), InputError);
}

TEST_CASE("segmenter skips unsupported classes regardless of rng") {
    const auto model = SegmentationModel::default_model();
    int supported = 0;
    for (std::size_t i = 0; i < kNumClasses; ++i) supported += model.supported[i];
    CHECK(supported == 9);
    CHECK_FALSE(model.supports(classes::stairs()));
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const Challenge ch =
            generate_challenge(rng, ChallengeKind::Type2Grid4x4Segment, TargetMix::degenerate(classes::stairs()));
        const auto out = solve_segmentation(model, ch, rng);
        REQUIRE(std::holds_alternative<Skip>(out));
        CHECK(std::get<Skip>(out).reason == "unsupported_class");
    }
}

TEST_CASE("noise-free segmentation is exact") {
    auto model = SegmentationModel::default_model();
    model.iou_noise = 0.0;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Challenge ch =
            generate_challenge(rng, ChallengeKind::Type2Grid4x4Segment, TargetMix::degenerate(classes::bus()));
        const auto out = solve_segmentation(model, ch, rng);
        REQUIRE(std::holds_alternative<Selection>(out));
        CHECK(grade(ch, std::get<Selection>(out).cells).passed);
    }
}

TEST_CASE("oracle passes static challenges in one round") {
    Rng rng(6);
    const Agent oracle = agent::Oracle{};
    for (int i = 0; i < 100; ++i) {
        const auto kind = i % 2 ? ChallengeKind::Type1Grid3x3 : ChallengeKind::Type2Grid4x4Segment;
        const Challenge ch = generate_challenge(rng, kind, TargetMix::uniform());
        const auto report = solve_challenge(oracle, ch, rng);
        CHECK(report.rounds == 1);
        CHECK(grade_rounds(report.log).passed);
    }
}

TEST_CASE("oracle needs two rounds on a non-refilling dynamic grid") {
    GenerationParams p;
    p.p_replace = 0.0;
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const Challenge ch = generate_challenge(rng, ChallengeKind::Type3Dynamic3x3, TargetMix::uniform(), p);
        const auto report = solve_challenge(agent::Oracle{}, ch, rng);
        CHECK(report.rounds == 2);
        CHECK(std::get<Selection>(report.outcome).cells == expected_selection(ch));
        CHECK(grade_rounds(report.log).passed);
    }
}

TEST_CASE("oracle round count follows the replacement stream") {
    Rng gen(40);
    for (int trial = 0; trial < 100; ++trial) {
        const Challenge ch = generate_challenge(gen, ChallengeKind::Type3Dynamic3x3, TargetMix::uniform());
        // Replay: each wave clicks the targets among the previous wave's replacements.
        Rng replay(trial);
        Challenge shown = ch;
        CellSet wave = expected_selection(ch);
        int waves = 0;
        while (!wave.empty() && waves < 50) {
            ++waves;
            shown = replace_clicked(shown, wave, replay);
            CellSet next;
            for (int i : wave)
                if (shown.cells[i].true_class == shown.target) next.insert(i);
            wave = next;
        }
        Rng rng(trial);
        const auto report = solve_challenge(agent::Oracle{}, ch, rng, 100);
        CHECK(report.rounds == waves + 1);
        CHECK(grade_rounds(report.log).passed);
    }
}

TEST_CASE("dynamic loop gives up at the round limit") {
    GenerationParams p;
    p.p_replace = 1.0;
    Rng rng(5);
    const Challenge ch = generate_challenge(rng, ChallengeKind::Type3Dynamic3x3, TargetMix::uniform(), p);
    const auto report = solve_challenge(agent::Oracle{}, ch, rng, 10);
    REQUIRE(std::holds_alternative<Skip>(report.outcome));
    CHECK(std::get<Skip>(report.outcome).reason == "round_limit");
    CHECK(report.rounds == 10);
}

TEST_CASE("agents must be bound for the challenge kind") {
    Rng rng(1);
    const Challenge t2 = generate_challenge(rng, ChallengeKind::Type2Grid4x4Segment, TargetMix::uniform());
    CHECK_THROWS_AS(solve_challenge(agent::Classifier{}, t2, rng), InputError);
    CHECK(agent_supports(agent::Composite{}, ChallengeKind::Type2Grid4x4Segment));
    CHECK_FALSE(agent_supports(agent::Segmenter{}, ChallengeKind::Type1Grid3x3));
}

TEST_CASE("model validation") {
    ClassifierModel m;
    m.confusion[0][0] += 0.1;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = {};
    m.threshold = 1.5;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    auto s = SegmentationModel::default_model();
    s.iou_noise = 1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}
