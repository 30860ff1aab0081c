#pragma once
// Canonical JSON forms. Objects serialize with sorted keys and compact
// separators, so equal values always produce identical bytes.

#include <string>

#include <json.hpp>

#include "gauntlet/challenge.hpp"
#include "gauntlet/risk.hpp"
#include "gauntlet/session.hpp"
#include "gauntlet/stats.hpp"
#include "gauntlet/trajectory.hpp"

namespace gauntlet {

using json = nlohmann::json;

std::string canonical(const json& j);

// Full form, ground truth included (logs and gateway debug mode).
void to_json(json& j, const Challenge& c);
void from_json(const json& j, Challenge& c);

/// Human-facing form: geometry and glyph descriptors only. Never carries
/// true_class or coverage fields.
json challenge_view(const Challenge& c, int round = 1);

void to_json(json& j, const Point& p);
void from_json(const json& j, Point& p);
void to_json(json& j, const Trajectory& t);
void from_json(const json& j, Trajectory& t);

void to_json(json& j, const ChallengeEntry& e);
void from_json(const json& j, ChallengeEntry& e);
void to_json(json& j, const RunRecord& r);
void from_json(const json& j, RunRecord& r);

void to_json(json& j, const SummaryStats& s);
void to_json(json& j, const TTestResult& t);

void to_json(json& j, const CalibrationTable& t);
/// Starts from the defaults and applies the fields present in `j`.
CalibrationTable calibration_from_json(const json& j);

void to_json(json& j, const AgentConfig& a);
AgentConfig agent_config_from_json(const json& j, AgentConfig base = {});

void to_json(json& j, const ExperimentConfig& c);
/// Starts from `preset(j["preset"])` when present (custom defaults otherwise)
/// and applies the remaining fields. Throws ConfigError on malformed input.
ExperimentConfig experiment_config_from_json(const json& j);

}  // namespace gauntlet
