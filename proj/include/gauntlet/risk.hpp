#pragma once
// Simulated gatekeeper: risk scoring, calibrated acceptance, IP-reuse
// flagging, and the challenges-per-captcha law.

#include <map>
#include <string>
#include <string_view>

#include "gauntlet/rng.hpp"

namespace gauntlet {

struct SessionFeatures {
    int ip_reuse = 0;
    double realism = 0.0;
    bool trusted = false;
    bool vpn = false;

    /// Throws InputError on negative reuse, realism outside [0, 1], or vpn with reuse.
    void validate() const;
};

struct RiskWeights {
    double base = 0.5;
    double ip_reuse = 0.5;
    double realism = 0.3;
    double trusted = 0.3;
    int ip_saturation = 20;  // reuse count at which the IP term is maximal
};

/// Clamped weighted sum; rises with IP reuse, falls with realism and trust.
double risk(const SessionFeatures& features, const RiskWeights& weights = {});

enum class PolicyTier { Teleport, StraightLine, Bezier };

std::string_view to_string(PolicyTier tier);
PolicyTier parse_policy_tier(std::string_view token);

struct TierAcceptance {
    double untrusted = 0.0;
    double trusted = 0.0;

    friend bool operator==(const TierAcceptance&, const TierAcceptance&) = default;
};

/// Per-passed-challenge acceptance probabilities. Each entry is the
/// reciprocal of a published mean challenge count (method of moments for a
/// geometric law). Trusted entries without a published mean are scaled from
/// the untrusted entry by the Bezier trusted/untrusted ratio.
struct CalibrationTable {
    std::map<PolicyTier, TierAcceptance> tiers;
    double human_acceptance = 0.4;  // humans: N = human_shift + Geometric(human_acceptance)
    int human_shift = 1;
    double straight_line_cutoff = 0.25;  // realism at or above which a path counts as moved
    double bezier_cutoff = 0.65;         // realism at or above which a path counts as curved

    static CalibrationTable defaults();
    /// Throws ConfigError on probabilities outside (0, 1], trusted < untrusted,
    /// or unordered cutoffs.
    void validate() const;

    friend bool operator==(const CalibrationTable&, const CalibrationTable&) = default;
};

inline constexpr double kMeanTeleport = 19.23;
inline constexpr double kMeanStraightLine = 9.72;
inline constexpr double kMeanBezier = 8.38;
inline constexpr double kMeanBezierTrusted = 2.71;
inline constexpr double kMeanHuman = 3.50;

/// Throws ConfigError when the tier is missing from the table.
double acceptance(PolicyTier tier, bool trusted, const CalibrationTable& table);

/// Tier the gatekeeper assigns to a cursor path of the given realism.
PolicyTier tier_for_realism(double realism, const CalibrationTable& table);

struct RiskState {
    std::map<std::string, int> sessions_per_ip;
    bool flagged = false;
    int flag_threshold = 20;
    int abort_limit = 200;

    int ip_reuse(const std::string& ip) const;
};

/// Features for a session from `ip`; a VPN session never reuses an IP.
SessionFeatures session_features(const RiskState& state, const std::string& ip, double realism,
                                 bool trusted, bool vpn);

/// Records a completed session. Without a VPN the IP's counter advances and
/// the state flags once it reaches flag_threshold. Flagging is permanent.
RiskState observe_session(RiskState state, const SessionFeatures& features, const std::string& ip);

/// Challenges demanded for one captcha. Bots: Geometric(a) on {1, 2, ...}.
/// Humans: human_shift + Geometric(a). a == 0 yields an unreachable demand.
long challenge_count_law(double a, bool human, Rng& rng, int human_shift = 1);

/// Closed-form median of Geometric(a): ceil(ln 0.5 / ln(1 - a)).
long geometric_median(double a);

}  // namespace gauntlet
