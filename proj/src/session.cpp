#include "gauntlet/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

Vec2 layout::cell_center(ChallengeKind kind, int index) {
    const int dim = grid_dim(kind);
    if (index < 0 || index >= dim * dim) throw InputError(fmt::format("cell index {} out of range", index));
    const double side = kGridSide / dim;
    return {kGridLeft + (index % dim + 0.5) * side, kGridTop + (index / dim + 0.5) * side};
}

// ---------------------------------------------------------------------------
// Configuration

std::string_view to_string(AgentConfig::Kind kind) {
    switch (kind) {
        case AgentConfig::Kind::Oracle: return "oracle";
        case AgentConfig::Kind::Classifier: return "classifier";
        case AgentConfig::Kind::Segmenter: return "segmenter";
        case AgentConfig::Kind::Composite: return "composite";
    }
    return "composite";
}

AgentConfig::Kind parse_agent_kind(std::string_view token) {
    for (auto k : {AgentConfig::Kind::Oracle, AgentConfig::Kind::Classifier, AgentConfig::Kind::Segmenter,
                   AgentConfig::Kind::Composite})
        if (to_string(k) == token) return k;
    throw ConfigError(fmt::format("unknown agent kind: {}", token));
}

Agent AgentConfig::build() const {
    classifier.validate();
    segmenter.validate();
    switch (kind) {
        case Kind::Oracle: return agent::Oracle{};
        case Kind::Classifier: return agent::Classifier{classifier};
        case Kind::Segmenter: return agent::Segmenter{segmenter};
        case Kind::Composite: return agent::Composite{classifier, segmenter};
    }
    return agent::Oracle{};
}

void KindMix::validate() const {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ConfigError("kind mix weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(fmt::format("kind mix sums to {}, not 1", sum));
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (abort_limit < 1) throw ConfigError("abort_limit must be at least 1");
    if (flag_threshold < 1) throw ConfigError("flag_threshold must be at least 1");
    if (max_rounds < 1) throw ConfigError("max_rounds must be at least 1");
    if (trajectory == TrajectoryPolicy::HumanRecorded)
        throw ConfigError("simulated sessions need a plannable trajectory policy");
    kind_mix.validate();
    target_mix.validate();
    path.validate();
    calibration.validate();
    const Agent a = agent.build();
    for (auto kind : {ChallengeKind::Type1Grid3x3, ChallengeKind::Type2Grid4x4Segment,
                      ChallengeKind::Type3Dynamic3x3}) {
        if (kind_mix.weight(kind) <= 0.0) continue;
        generation.validate(kind);
        if (!agent_supports(a, kind))
            throw ConfigError(fmt::format("{} agent cannot solve {} challenges in the kind mix",
                                          to_string(agent.kind), to_string(kind)));
    }
}

std::string_view to_string(ChallengeOutcome outcome) {
    switch (outcome) {
        case ChallengeOutcome::Pass: return "pass";
        case ChallengeOutcome::Fail: return "fail";
        case ChallengeOutcome::Skip: return "skip";
    }
    return "fail";
}

ChallengeOutcome parse_challenge_outcome(std::string_view token) {
    for (auto o : {ChallengeOutcome::Pass, ChallengeOutcome::Fail, ChallengeOutcome::Skip})
        if (to_string(o) == token) return o;
    throw InputError(fmt::format("unknown challenge outcome: {}", token));
}

long RunRecord::count(ChallengeOutcome outcome) const {
    return std::count_if(entries.begin(), entries.end(),
                         [outcome](const ChallengeEntry& e) { return e.outcome == outcome; });
}

std::vector<long> challenge_counts(const std::vector<RunRecord>& records) {
    std::vector<long> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.challenges_served);
    return out;
}

// ---------------------------------------------------------------------------
// Sessions

namespace {

std::vector<Vec2> click_targets(const ChallengeKind kind, const SolveReport& report) {
    std::vector<Vec2> targets;
    if (std::holds_alternative<Skip>(report.outcome)) {
        for (const auto& round : report.log)
            for (int i : round.clicked) targets.push_back(layout::cell_center(kind, i));
        targets.push_back(layout::kReloadButton);
        return targets;
    }
    for (int i : std::get<Selection>(report.outcome).click_order)
        targets.push_back(layout::cell_center(kind, i));
    targets.push_back(layout::kVerifyButton);
    return targets;
}

ChallengeKind draw_kind(Rng& rng, const KindMix& mix) {
    return static_cast<ChallengeKind>(rng.categorical(mix.weights));
}

}  // namespace

RunRecord run_session(const ExperimentConfig& config, const Agent& agent, RiskState& risk_state, Rng& rng,
                      int run_index) {
    RunRecord record;
    record.run_index = run_index;
    record.flagged_at_start = risk_state.flagged;

    const std::string ip = config.vpn ? fmt::format("vpn-{}", run_index) : std::string("home");
    const Vec2 checkbox[] = {layout::kCheckbox};
    const Trajectory probe = plan_path(config.trajectory, layout::kCursorHome, checkbox, rng, config.path);
    record.realism = realism(probe);

    const SessionFeatures features =
        session_features(risk_state, ip, record.realism, config.trusted, config.vpn);
    RiskWeights weights;
    weights.ip_saturation = risk_state.flag_threshold;
    record.risk = risk(features, weights);
    record.tier = tier_for_realism(record.realism, config.calibration);

    if (!risk_state.flagged) {
        const double a = config.human_mode ? config.calibration.human_acceptance
                                           : acceptance(record.tier, config.trusted, config.calibration);
        record.demand = challenge_count_law(a, config.human_mode, rng, config.calibration.human_shift);
    }

    const long limit = std::min<long>(config.abort_limit, risk_state.abort_limit);
    Vec2 cursor = checkbox[0];
    while (record.challenges_served < limit && (!record.demand || record.passed < *record.demand)) {
        const ChallengeKind kind = draw_kind(rng, config.kind_mix);
        const Challenge challenge = generate_challenge(rng, kind, config.target_mix, config.generation);
        const SolveReport report = solve_challenge(agent, challenge, rng, config.max_rounds);

        ChallengeEntry entry;
        entry.kind = kind;
        entry.target = challenge.target;
        entry.rounds = report.rounds;
        const std::vector<Vec2> targets = click_targets(kind, report);
        const Trajectory path = plan_path(config.trajectory, cursor, targets, rng, config.path);
        entry.realism = realism(path);
        cursor = targets.back();

        if (std::holds_alternative<Skip>(report.outcome)) {
            entry.outcome = ChallengeOutcome::Skip;
        } else {
            entry.outcome = grade_rounds(report.log).passed ? ChallengeOutcome::Pass : ChallengeOutcome::Fail;
        }
        if (entry.outcome == ChallengeOutcome::Pass) ++record.passed;
        ++record.challenges_served;
        record.entries.push_back(std::move(entry));
    }
    record.solved = record.demand && record.passed >= *record.demand;
    risk_state = observe_session(std::move(risk_state), features, ip);
    return record;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    const Agent agent = config.agent.build();

    ExperimentResult result;
    result.config = config;
    result.records.resize(static_cast<std::size_t>(config.runs));

    const auto fresh_state = [&] {
        RiskState s;
        s.flag_threshold = config.flag_threshold;
        s.abort_limit = config.abort_limit;
        return s;
    };

    if (!config.vpn) {
        RiskState shared = fresh_state();
        for (int i = 0; i < config.runs; ++i) {
            Rng rng = Rng::stream(config.master_seed, static_cast<std::uint64_t>(i) + 1);
            result.records[i] = run_session(config, agent, shared, rng, i + 1);
            if (config.stop_after_abort && !result.records[i].solved) {
                result.records.resize(static_cast<std::size_t>(i) + 1);
                break;
            }
        }
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const auto worker = [&] {
            for (int i = next++; i < config.runs; i = next++) {
                try {
                    RiskState own = fresh_state();
                    Rng rng = Rng::stream(config.master_seed, static_cast<std::uint64_t>(i) + 1);
                    result.records[i] = run_session(config, agent, own, rng, i + 1);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const int n = std::clamp(threads, 1, config.runs);
        std::vector<std::thread> pool;
        for (int t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
        if (config.stop_after_abort) {
            const auto it = std::find_if(result.records.begin(), result.records.end(),
                                         [](const RunRecord& r) { return !r.solved; });
            if (it != result.records.end()) result.records.erase(it + 1, result.records.end());
        }
    }

    const std::vector<long> counts = challenge_counts(result.records);
    result.summary = summarize(counts);
    return result;
}

// ---------------------------------------------------------------------------
// Presets

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "vpn_off",     "vpn_on",         "mouse_none",     "mouse_straight", "mouse_bezier",
        "cookies_off", "cookies_on",     "human_baseline", "bot_baseline",   "vpn_on_oracle_bezier_trusted",
    };
    return names;
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.preset = std::string(name);
    if (name == "vpn_off") {
        c.vpn = false;
        c.stop_after_abort = true;
    } else if (name == "vpn_on" || name == "mouse_none") {
        // defaults: vpn, no cursor movement, no cookies
    } else if (name == "mouse_straight") {
        c.trajectory = TrajectoryPolicy::StraightLine;
    } else if (name == "mouse_bezier" || name == "cookies_off") {
        c.trajectory = TrajectoryPolicy::Bezier;
    } else if (name == "cookies_on" || name == "bot_baseline") {
        c.trajectory = TrajectoryPolicy::Bezier;
        c.trusted = true;
    } else if (name == "human_baseline") {
        c.trajectory = TrajectoryPolicy::Bezier;
        c.trusted = true;
        c.human_mode = true;
        c.agent.kind = AgentConfig::Kind::Oracle;
        c.kind_mix.weights = {0.15, 0.15, 0.70};
    } else if (name == "vpn_on_oracle_bezier_trusted") {
        c.trajectory = TrajectoryPolicy::Bezier;
        c.trusted = true;
        c.agent.kind = AgentConfig::Kind::Oracle;
    } else {
        throw ConfigError(fmt::format("unknown preset: {}", name));
    }
    return c;
}

}  // namespace gauntlet
