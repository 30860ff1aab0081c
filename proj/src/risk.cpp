#include "gauntlet/risk.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

void SessionFeatures::validate() const {
    if (ip_reuse < 0) throw InputError("ip_reuse must be non-negative");
    if (!(realism >= 0.0 && realism <= 1.0)) throw InputError("realism must lie in [0, 1]");
    if (vpn && ip_reuse != 0) throw InputError("a vpn session cannot reuse an ip");
}

double risk(const SessionFeatures& f, const RiskWeights& w) {
    f.validate();
    const double reuse = std::min(1.0, static_cast<double>(f.ip_reuse) / std::max(1, w.ip_saturation));
    const double r = w.base + w.ip_reuse * reuse - w.realism * f.realism - (f.trusted ? w.trusted : 0.0);
    return std::clamp(r, 0.0, 1.0);
}

std::string_view to_string(PolicyTier tier) {
    switch (tier) {
        case PolicyTier::Teleport: return "teleport";
        case PolicyTier::StraightLine: return "straight_line";
        case PolicyTier::Bezier: return "bezier";
    }
    return "teleport";
}

PolicyTier parse_policy_tier(std::string_view token) {
    for (auto t : {PolicyTier::Teleport, PolicyTier::StraightLine, PolicyTier::Bezier})
        if (to_string(t) == token) return t;
    throw ConfigError(fmt::format("unknown policy tier: {}", token));
}

CalibrationTable CalibrationTable::defaults() {
    const double trust_ratio = kMeanBezier / kMeanBezierTrusted;
    CalibrationTable t;
    t.tiers[PolicyTier::Teleport] = {1.0 / kMeanTeleport, trust_ratio / kMeanTeleport};
    t.tiers[PolicyTier::StraightLine] = {1.0 / kMeanStraightLine, trust_ratio / kMeanStraightLine};
    t.tiers[PolicyTier::Bezier] = {1.0 / kMeanBezier, 1.0 / kMeanBezierTrusted};
    t.human_acceptance = 1.0 / (kMeanHuman - 1.0);
    t.human_shift = 1;
    return t;
}

void CalibrationTable::validate() const {
    const auto in_range = [](double a) { return a > 0.0 && a <= 1.0; };
    for (const auto& [tier, a] : tiers) {
        if (!in_range(a.untrusted) || !in_range(a.trusted))
            throw ConfigError(fmt::format("acceptance for tier {} must lie in (0, 1]", to_string(tier)));
        if (a.trusted < a.untrusted)
            throw ConfigError(fmt::format("trusted acceptance below untrusted for tier {}", to_string(tier)));
    }
    if (!in_range(human_acceptance)) throw ConfigError("human acceptance must lie in (0, 1]");
    if (human_shift < 1) throw ConfigError("human shift must be at least 1");
    if (!(straight_line_cutoff > 0.0 && straight_line_cutoff < bezier_cutoff && bezier_cutoff <= 1.0))
        throw ConfigError("realism cutoffs must satisfy 0 < straight_line < bezier <= 1");
}

double acceptance(PolicyTier tier, bool trusted, const CalibrationTable& table) {
    const auto it = table.tiers.find(tier);
    if (it == table.tiers.end())
        throw ConfigError(fmt::format("calibration table has no tier {}", to_string(tier)));
    return trusted ? it->second.trusted : it->second.untrusted;
}

PolicyTier tier_for_realism(double realism, const CalibrationTable& table) {
    if (realism >= table.bezier_cutoff) return PolicyTier::Bezier;
    if (realism >= table.straight_line_cutoff) return PolicyTier::StraightLine;
    return PolicyTier::Teleport;
}

int RiskState::ip_reuse(const std::string& ip) const {
    const auto it = sessions_per_ip.find(ip);
    return it == sessions_per_ip.end() ? 0 : it->second;
}

SessionFeatures session_features(const RiskState& state, const std::string& ip, double realism,
                                 bool trusted, bool vpn) {
    return {vpn ? 0 : state.ip_reuse(ip), std::clamp(realism, 0.0, 1.0), trusted, vpn};
}

RiskState observe_session(RiskState state, const SessionFeatures& features, const std::string& ip) {
    if (features.vpn) return state;
    const int seen = ++state.sessions_per_ip[ip];
    if (seen >= state.flag_threshold) state.flagged = true;
    return state;
}

long challenge_count_law(double a, bool human, Rng& rng, int human_shift) {
    if (!(a >= 0.0 && a <= 1.0)) throw InputError("acceptance probability must lie in [0, 1]");
    const long n = rng.geometric(a);
    return human ? n + human_shift : n;
}

long geometric_median(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw InputError("geometric median needs a in (0, 1]");
    if (a == 1.0) return 1;
    return std::max(1L, static_cast<long>(std::ceil(std::log(0.5) / std::log1p(-a))));
}

}  // namespace gauntlet
