#pragma once
// Captcha sessions and experiments: serve challenges until the gatekeeper's
// demand is met (or the abort limit is hit) and record what happened.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gauntlet/challenge.hpp"
#include "gauntlet/risk.hpp"
#include "gauntlet/solver.hpp"
#include "gauntlet/stats.hpp"
#include "gauntlet/trajectory.hpp"

namespace gauntlet {

/// Screen positions of the widget, in unit-square coordinates.
namespace layout {
inline constexpr Vec2 kCursorHome{0.5, 0.95};
inline constexpr Vec2 kCheckbox{0.15, 0.12};
inline constexpr Vec2 kVerifyButton{0.7, 0.86};
inline constexpr Vec2 kReloadButton{0.3, 0.86};
inline constexpr double kGridLeft = 0.3;
inline constexpr double kGridTop = 0.3;
inline constexpr double kGridSide = 0.4;

Vec2 cell_center(ChallengeKind kind, int index);
}  // namespace layout

struct AgentConfig {
    enum class Kind { Oracle, Classifier, Segmenter, Composite };
    Kind kind = Kind::Composite;
    ClassifierModel classifier;
    SegmentationModel segmenter = SegmentationModel::default_model();

    Agent build() const;
};

std::string_view to_string(AgentConfig::Kind kind);
AgentConfig::Kind parse_agent_kind(std::string_view token);

/// Weights over {type1, type2, type3}.
struct KindMix {
    std::array<double, 3> weights{0.4, 0.4, 0.2};

    void validate() const;
    double weight(ChallengeKind kind) const { return weights[static_cast<std::size_t>(kind)]; }
};

struct ExperimentConfig {
    std::string preset = "custom";
    int runs = 50;
    std::uint64_t master_seed = 1;
    AgentConfig agent;
    TrajectoryPolicy trajectory = TrajectoryPolicy::Teleport;
    BezierParams path;
    bool vpn = true;
    bool trusted = false;
    KindMix kind_mix;
    bool human_mode = false;
    int abort_limit = 200;
    int flag_threshold = 20;
    bool stop_after_abort = false;  // truncate the experiment after the first unsolved run
    int max_rounds = kDefaultMaxRounds;
    TargetMix target_mix = TargetMix::uniform();
    GenerationParams generation;
    CalibrationTable calibration = CalibrationTable::defaults();

    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

enum class ChallengeOutcome { Pass, Fail, Skip };

std::string_view to_string(ChallengeOutcome outcome);
ChallengeOutcome parse_challenge_outcome(std::string_view token);

struct ChallengeEntry {
    ChallengeKind kind = ChallengeKind::Type1Grid3x3;
    ChallengeClass target;
    ChallengeOutcome outcome = ChallengeOutcome::Fail;
    int rounds = 1;
    double realism = 0.0;
    std::vector<Point> trace;  // recorded cursor trace (human sessions only)

    friend bool operator==(const ChallengeEntry&, const ChallengeEntry&) = default;
};

struct RunRecord {
    int run_index = 0;
    long challenges_served = 0;
    std::optional<long> demand;  // absent when the gatekeeper had flagged the client
    long passed = 0;
    bool solved = false;
    bool flagged_at_start = false;
    double risk = 0.0;
    double realism = 0.0;  // realism of the checkbox approach path
    PolicyTier tier = PolicyTier::Teleport;
    std::vector<ChallengeEntry> entries;

    long count(ChallengeOutcome outcome) const;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Challenges served per run, in run order.
std::vector<long> challenge_counts(const std::vector<RunRecord>& records);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunRecord> records;
    SummaryStats summary;
};

/// Runs one captcha session. `risk_state` is read for flagging and IP reuse
/// and updated with the session's observation.
RunRecord run_session(const ExperimentConfig& config, const Agent& agent, RiskState& risk_state,
                      Rng& rng, int run_index);

/// Runs `config.runs` sessions with per-run streams derived from the master
/// seed. Without a VPN the runs share one risk state and execute in order;
/// with a VPN they are independent and spread over `threads` workers. The
/// result does not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

/// Throws ConfigError for an unknown name.
ExperimentConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

}  // namespace gauntlet
