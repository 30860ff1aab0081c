#include <doctest.h>

#include "gauntlet/error.hpp"
#include "gauntlet/json_io.hpp"
#include "gauntlet/session.hpp"

using namespace gauntlet;

namespace {

ExperimentConfig small(std::string_view name, int runs) {
    ExperimentConfig c = preset(name);
    c.runs = runs;
    return c;
}

json without_label(const ExperimentConfig& c) {
    json j = c;
    j.erase("preset");
    return j;
}

}  // namespace

TEST_CASE("oracle sessions serve exactly the demand") {
    auto c = small("vpn_on", 40);
    c.agent.kind = AgentConfig::Kind::Oracle;
    const auto result = run_experiment(c, 2);
    for (const auto& r : result.records) {
        REQUIRE(r.demand);
        CHECK(r.solved);
        CHECK(r.challenges_served == *r.demand);
        CHECK(r.count(ChallengeOutcome::Fail) == 0);
    }
}

TEST_CASE("accounting identity for the composite agent") {
    for (auto name : {"vpn_on", "mouse_bezier", "cookies_on"}) {
        const auto result = run_experiment(small(name, 30), 2);
        for (const auto& r : result.records) {
            CHECK(static_cast<long>(r.entries.size()) == r.challenges_served);
            CHECK(r.passed == r.count(ChallengeOutcome::Pass));
            if (r.solved) {
                CHECK(r.challenges_served ==
                      *r.demand + r.count(ChallengeOutcome::Fail) + r.count(ChallengeOutcome::Skip));
                CHECK(r.entries.back().outcome == ChallengeOutcome::Pass);
            } else {
                CHECK(r.challenges_served == 200);
            }
        }
    }
}

TEST_CASE("experiments are reproducible and thread-count independent") {
    for (auto name : {"vpn_on", "mouse_bezier", "human_baseline"}) {
        const auto c = small(name, 24);
        const auto one = run_experiment(c, 1);
        const auto four = run_experiment(c, 4);
        const auto again = run_experiment(c, 1);
        CHECK(one.records == four.records);
        CHECK(one.records == again.records);
        CHECK(one.summary == four.summary);
        CHECK(canonical(json(one.records)) == canonical(json(four.records)));
    }
    auto c = small("vpn_on", 10);
    c.master_seed = 2;
    CHECK_FALSE(run_experiment(c, 1).records == run_experiment(small("vpn_on", 10), 1).records);
}

TEST_CASE("run records carry the probe tier") {
    const auto none = run_experiment(small("mouse_none", 5), 1);
    for (const auto& r : none.records) CHECK(r.tier == PolicyTier::Teleport);
    const auto line = run_experiment(small("mouse_straight", 5), 1);
    for (const auto& r : line.records) CHECK(r.tier == PolicyTier::StraightLine);
    const auto curve = run_experiment(small("mouse_bezier", 5), 1);
    for (const auto& r : curve.records) {
        CHECK(r.tier == PolicyTier::Bezier);
        CHECK(r.realism >= 0.7);
    }
}

TEST_CASE("without a vpn the client is flagged after the threshold") {
    auto c = small("vpn_off", 30);
    c.stop_after_abort = false;
    const auto result = run_experiment(c, 3);
    REQUIRE(result.records.size() == 30);
    for (int i = 0; i < 20; ++i) {
        CHECK_FALSE(result.records[i].flagged_at_start);
        CHECK(result.records[i].demand.has_value());
    }
    for (int i = 20; i < 30; ++i) {
        const auto& r = result.records[i];
        CHECK(r.flagged_at_start);
        CHECK_FALSE(r.demand.has_value());
        CHECK(r.challenges_served == 200);
        CHECK_FALSE(r.solved);
    }
    // risk rises with reuse
    CHECK(result.records[10].risk > result.records[0].risk);

    const auto truncated = run_experiment(small("vpn_off", 30), 1);
    CHECK(truncated.records.size() == 21);
    CHECK_FALSE(truncated.records.back().solved);
}

TEST_CASE("threshold is configurable") {
    auto c = small("vpn_off", 12);
    c.flag_threshold = 5;
    c.stop_after_abort = false;
    const auto result = run_experiment(c, 1);
    CHECK_FALSE(result.records[4].flagged_at_start);
    CHECK(result.records[5].flagged_at_start);
}

TEST_CASE("human sessions need at least two challenges") {
    const auto result = run_experiment(small("human_baseline", 200), 4);
    for (const auto& r : result.records) {
        CHECK(r.challenges_served >= 2);
        CHECK(*r.demand >= 2);
    }
}

TEST_CASE("presets") {
    for (const auto& name : preset_names()) {
        const auto c = preset(name);
        CHECK(c.preset == name);
        CHECK(c.runs == 50);
        c.validate();
    }
    CHECK(without_label(preset("mouse_none")) == without_label(preset("vpn_on")));
    CHECK(without_label(preset("cookies_off")) == without_label(preset("mouse_bezier")));
    CHECK(preset("vpn_off").vpn == false);
    CHECK(preset("cookies_on").trusted);
    CHECK_FALSE(preset("cookies_off").trusted);

    const auto human = preset("human_baseline");
    CHECK(human.human_mode);
    CHECK(human.kind_mix.weight(ChallengeKind::Type3Dynamic3x3) >
          human.kind_mix.weight(ChallengeKind::Type1Grid3x3) + human.kind_mix.weight(ChallengeKind::Type2Grid4x4Segment));
    const auto bot = preset("bot_baseline");
    CHECK_FALSE(bot.human_mode);
    CHECK(bot.kind_mix.weight(ChallengeKind::Type1Grid3x3) + bot.kind_mix.weight(ChallengeKind::Type2Grid4x4Segment) >
          bot.kind_mix.weight(ChallengeKind::Type3Dynamic3x3));
    CHECK_THROWS_AS(preset("vpn_maybe"), ConfigError);
}

TEST_CASE("config validation") {
    auto c = preset("vpn_on");
    c.runs = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("vpn_on");
    c.kind_mix.weights = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("vpn_on");
    c.abort_limit = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(run_experiment(c, 1), ConfigError);
}

TEST_CASE("cell centres sit inside the grid") {
    for (auto kind : {ChallengeKind::Type1Grid3x3, ChallengeKind::Type2Grid4x4Segment}) {
        for (int i = 0; i < cell_count(kind); ++i) {
            const Vec2 p = layout::cell_center(kind, i);
            CHECK(p.x > layout::kGridLeft);
            CHECK(p.x < layout::kGridLeft + layout::kGridSide);
            CHECK(p.y > layout::kGridTop);
            CHECK(p.y < layout::kGridTop + layout::kGridSide);
        }
    }
    CHECK(layout::cell_center(ChallengeKind::Type1Grid3x3, 0).x < layout::cell_center(ChallengeKind::Type1Grid3x3, 1).x);
    CHECK(layout::cell_center(ChallengeKind::Type1Grid3x3, 0).y < layout::cell_center(ChallengeKind::Type1Grid3x3, 3).y);
}
