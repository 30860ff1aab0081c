#include "gauntlet/json_io.hpp"

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

std::string canonical(const json& j) { return j.dump(); }

// ---------------------------------------------------------------------------
// Challenges

namespace {

std::string_view to_string(ShapeKind s) { return s == ShapeKind::Rectangle ? "rectangle" : "ellipse"; }

ShapeKind parse_shape(const std::string& s) {
    if (s == "rectangle") return ShapeKind::Rectangle;
    if (s == "ellipse") return ShapeKind::Ellipse;
    throw InputError("unknown mask shape: " + s);
}

json mask_json(const ObjectMask& m) {
    return {{"shape", to_string(m.shape)}, {"cx", m.cx}, {"cy", m.cy}, {"hx", m.hx}, {"hy", m.hy}};
}

std::uint64_t style_seed(const Challenge& c, const GridCell& cell) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : c.id) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    return splitmix64(h ^ (static_cast<std::uint64_t>(cell.index) << 32) ^
                      static_cast<std::uint64_t>(cell.generation)) >>
           11;
}

}  // namespace

void to_json(json& j, const Challenge& c) {
    json cells = json::array();
    for (const auto& cell : c.cells)
        cells.push_back({{"index", cell.index},
                         {"true_class", cell.true_class.label()},
                         {"coverage", cell.coverage},
                         {"generation", cell.generation}});
    j = {{"id", c.id},
         {"kind", to_string(c.kind)},
         {"target", c.target.label()},
         {"cells", std::move(cells)},
         {"mask", c.mask ? mask_json(*c.mask) : json(nullptr)},
         {"p_replace", c.p_replace},
         {"epsilon_overlap", c.epsilon_overlap}};
}

void from_json(const json& j, Challenge& c) {
    c.id = j.at("id").get<std::string>();
    c.kind = parse_challenge_kind(j.at("kind").get<std::string>());
    c.target = ChallengeClass::parse(j.at("target").get<std::string>());
    c.cells.clear();
    for (const auto& cj : j.at("cells")) {
        GridCell cell;
        cell.index = cj.at("index").get<int>();
        cell.true_class = ChallengeClass::parse(cj.at("true_class").get<std::string>());
        cell.coverage = cj.at("coverage").get<double>();
        cell.generation = cj.at("generation").get<int>();
        c.cells.push_back(cell);
    }
    c.mask.reset();
    if (j.contains("mask") && !j.at("mask").is_null()) {
        const auto& mj = j.at("mask");
        c.mask = ObjectMask{parse_shape(mj.at("shape").get<std::string>()), mj.at("cx").get<double>(),
                            mj.at("cy").get<double>(), mj.at("hx").get<double>(), mj.at("hy").get<double>()};
    }
    c.p_replace = j.value("p_replace", 0.3);
    c.epsilon_overlap = j.value("epsilon_overlap", 0.0);
}

json challenge_view(const Challenge& c, int round) {
    json cells = json::array();
    for (const auto& cell : c.cells) {
        json glyph = {{"style_seed", style_seed(c, cell)}};
        // Type2 cells are windows onto one scene; only the 3x3 kinds carry an
        // icon per cell.
        if (c.kind != ChallengeKind::Type2Grid4x4Segment) glyph["icon"] = cell.true_class.label();
        cells.push_back({{"index", cell.index}, {"glyph", std::move(glyph)}});
    }
    json view = {{"id", c.id},
                 {"kind", to_string(c.kind)},
                 {"target", c.target.label()},
                 {"grid", grid_dim(c.kind)},
                 {"round", round},
                 {"cells", std::move(cells)}};
    if (c.mask) {
        view["scene"] = {{"icon", c.target.label()}, {"outline", mask_json(*c.mask)}};
    }
    return view;
}

// ---------------------------------------------------------------------------
// Trajectories

void to_json(json& j, const Point& p) { j = {{"x", p.x}, {"y", p.y}, {"t_ms", p.t}}; }

void from_json(const json& j, Point& p) {
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    p.t = j.at("t_ms").get<double>();
}

void to_json(json& j, const Trajectory& t) {
    j = {{"policy", to_string(t.policy)}, {"points", t.points}, {"clicks", t.click_indices}};
}

void from_json(const json& j, Trajectory& t) {
    t.policy = parse_trajectory_policy(j.value("policy", std::string("human_recorded")));
    t.points = j.at("points").get<std::vector<Point>>();
    t.click_indices = j.value("clicks", std::vector<std::size_t>{});
}

// ---------------------------------------------------------------------------
// Run records

void to_json(json& j, const ChallengeEntry& e) {
    j = {{"kind", to_string(e.kind)},   {"target", e.target.label()}, {"outcome", to_string(e.outcome)},
         {"rounds", e.rounds},          {"realism", e.realism}};
    if (!e.trace.empty()) j["trace"] = e.trace;
}

void from_json(const json& j, ChallengeEntry& e) {
    e.kind = parse_challenge_kind(j.at("kind").get<std::string>());
    e.target = ChallengeClass::parse(j.at("target").get<std::string>());
    e.outcome = parse_challenge_outcome(j.at("outcome").get<std::string>());
    e.rounds = j.at("rounds").get<int>();
    e.realism = j.at("realism").get<double>();
    e.trace = j.value("trace", std::vector<Point>{});
}

void to_json(json& j, const RunRecord& r) {
    j = {{"run_index", r.run_index},
         {"challenges_served", r.challenges_served},
         {"demand", r.demand ? json(*r.demand) : json(nullptr)},
         {"passed", r.passed},
         {"solved", r.solved},
         {"flagged_at_start", r.flagged_at_start},
         {"risk", r.risk},
         {"realism", r.realism},
         {"tier", to_string(r.tier)},
         {"entries", r.entries}};
}

void from_json(const json& j, RunRecord& r) {
    r.run_index = j.at("run_index").get<int>();
    r.challenges_served = j.at("challenges_served").get<long>();
    r.demand.reset();
    if (!j.at("demand").is_null()) r.demand = j.at("demand").get<long>();
    r.passed = j.at("passed").get<long>();
    r.solved = j.at("solved").get<bool>();
    r.flagged_at_start = j.at("flagged_at_start").get<bool>();
    r.risk = j.at("risk").get<double>();
    r.realism = j.at("realism").get<double>();
    r.tier = parse_policy_tier(j.at("tier").get<std::string>());
    r.entries = j.at("entries").get<std::vector<ChallengeEntry>>();
    if (r.challenges_served < 0 || r.challenges_served != static_cast<long>(r.entries.size()))
        throw InputError("challenges_served does not match the entry count");
}

// ---------------------------------------------------------------------------
// Statistics

void to_json(json& j, const SummaryStats& s) {
    j = {{"n", s.n},       {"minimum", s.minimum},
         {"median", s.median}, {"mean", s.mean},
         {"maximum", s.maximum}, {"std", s.std ? json(*s.std) : json(nullptr)},
         {"iqr", s.iqr}};
}

void to_json(json& j, const TTestResult& t) {
    j = {{"t_statistic", t.t_statistic}, {"degrees_of_freedom", t.degrees_of_freedom}, {"p_value", t.p_value}};
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <typename F>
auto as_config(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("malformed {}: {}", what, e.what()));
    } catch (const InputError& e) {
        throw ConfigError(fmt::format("malformed {}: {}", what, e.what()));
    }
}

}  // namespace

void to_json(json& j, const CalibrationTable& t) {
    json tiers = json::object();
    for (const auto& [tier, a] : t.tiers)
        tiers[std::string(to_string(tier))] = {{"untrusted", a.untrusted}, {"trusted", a.trusted}};
    j = {{"tiers", std::move(tiers)},
         {"human", {{"acceptance", t.human_acceptance}, {"shift", t.human_shift}}},
         {"realism_cutoffs", {{"straight_line", t.straight_line_cutoff}, {"bezier", t.bezier_cutoff}}}};
}

CalibrationTable calibration_from_json(const json& j) {
    return as_config("calibration table", [&] {
        CalibrationTable t = CalibrationTable::defaults();
        if (j.contains("tiers")) {
            t.tiers.clear();
            for (const auto& [name, a] : j.at("tiers").items())
                t.tiers[parse_policy_tier(name)] = {a.at("untrusted").get<double>(), a.at("trusted").get<double>()};
        }
        if (j.contains("human")) {
            t.human_acceptance = j.at("human").value("acceptance", t.human_acceptance);
            t.human_shift = j.at("human").value("shift", t.human_shift);
        }
        if (j.contains("realism_cutoffs")) {
            t.straight_line_cutoff = j.at("realism_cutoffs").value("straight_line", t.straight_line_cutoff);
            t.bezier_cutoff = j.at("realism_cutoffs").value("bezier", t.bezier_cutoff);
        }
        t.validate();
        return t;
    });
}

void to_json(json& j, const AgentConfig& a) {
    std::vector<std::string> supported;
    for (std::size_t i = 0; i < kNumClasses; ++i)
        if (a.segmenter.supported[i]) supported.emplace_back(kClassLabels[i]);
    j = {{"agent", to_string(a.kind)},
         {"threshold", a.classifier.threshold},
         {"ambiguity", a.classifier.ambiguity},
         {"concentration", a.classifier.concentration},
         {"confusion", a.classifier.confusion},
         {"supported_classes", supported},
         {"iou_noise", a.segmenter.iou_noise},
         {"epsilon_overlap", a.segmenter.epsilon_overlap}};
}

AgentConfig agent_config_from_json(const json& j, AgentConfig base) {
    return as_config("agent block", [&] {
        AgentConfig a = std::move(base);
        if (j.contains("agent")) a.kind = parse_agent_kind(j.at("agent").get<std::string>());
        a.classifier.threshold = j.value("threshold", a.classifier.threshold);
        a.classifier.ambiguity = j.value("ambiguity", a.classifier.ambiguity);
        a.classifier.concentration = j.value("concentration", a.classifier.concentration);
        if (j.contains("confusion") && !j.at("confusion").is_null())
            a.classifier.confusion = j.at("confusion").get<ConfusionMatrix>();
        if (j.contains("supported_classes")) {
            a.segmenter.supported.fill(false);
            for (const auto& label : j.at("supported_classes"))
                a.segmenter.supported[ChallengeClass::parse(label.get<std::string>()).index()] = true;
        }
        a.segmenter.iou_noise = j.value("iou_noise", a.segmenter.iou_noise);
        a.segmenter.epsilon_overlap = j.value("epsilon_overlap", a.segmenter.epsilon_overlap);
        a.classifier.validate();
        a.segmenter.validate();
        return a;
    });
}

void to_json(json& j, const ExperimentConfig& c) {
    json mix = json::object();
    for (std::size_t i = 0; i < kNumClasses; ++i) mix[std::string(kClassLabels[i])] = c.target_mix.weights[i];
    j = {{"preset", c.preset},
         {"runs", c.runs},
         {"seed", c.master_seed},
         {"agent", c.agent},
         {"trajectory", to_string(c.trajectory)},
         {"bezier",
          {{"control_jitter", c.path.control_jitter},
           {"samples", c.path.samples},
           {"ms_per_unit", c.path.ms_per_unit},
           {"min_segment_ms", c.path.min_segment_ms}}},
         {"vpn", c.vpn},
         {"trusted", c.trusted},
         {"kind_mix", c.kind_mix.weights},
         {"human_mode", c.human_mode},
         {"abort_limit", c.abort_limit},
         {"flag_threshold", c.flag_threshold},
         {"stop_after_abort", c.stop_after_abort},
         {"max_rounds", c.max_rounds},
         {"target_mix", std::move(mix)},
         {"challenge",
          {{"min_targets", c.generation.min_targets},
           {"max_targets", c.generation.max_targets},
           {"p_replace", c.generation.p_replace},
           {"epsilon_overlap", c.generation.epsilon_overlap},
           {"mask_min_cells", c.generation.mask_min_cells},
           {"mask_max_cells", c.generation.mask_max_cells}}},
         {"calibration", c.calibration}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
    return as_config("experiment config", [&] {
        if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
        ExperimentConfig c = j.contains("preset") && j.at("preset").get<std::string>() != "custom"
                                 ? preset(j.at("preset").get<std::string>())
                                 : ExperimentConfig{};
        c.runs = j.value("runs", c.runs);
        c.master_seed = j.value("seed", c.master_seed);
        if (j.contains("agent")) c.agent = agent_config_from_json(j.at("agent"), c.agent);
        if (j.contains("trajectory"))
            c.trajectory = parse_trajectory_policy(j.at("trajectory").get<std::string>());
        if (j.contains("bezier")) {
            const auto& b = j.at("bezier");
            c.path.control_jitter = b.value("control_jitter", c.path.control_jitter);
            c.path.samples = b.value("samples", c.path.samples);
            c.path.ms_per_unit = b.value("ms_per_unit", c.path.ms_per_unit);
            c.path.min_segment_ms = b.value("min_segment_ms", c.path.min_segment_ms);
        }
        c.vpn = j.value("vpn", c.vpn);
        c.trusted = j.value("trusted", c.trusted);
        if (j.contains("kind_mix")) c.kind_mix.weights = j.at("kind_mix").get<std::array<double, 3>>();
        c.human_mode = j.value("human_mode", c.human_mode);
        c.abort_limit = j.value("abort_limit", c.abort_limit);
        c.flag_threshold = j.value("flag_threshold", c.flag_threshold);
        c.stop_after_abort = j.value("stop_after_abort", c.stop_after_abort);
        c.max_rounds = j.value("max_rounds", c.max_rounds);
        if (j.contains("target_mix")) {
            c.target_mix.weights.fill(0.0);
            for (const auto& [label, w] : j.at("target_mix").items())
                c.target_mix.weights[ChallengeClass::parse(label).index()] = w.get<double>();
        }
        if (j.contains("challenge")) {
            const auto& g = j.at("challenge");
            c.generation.min_targets = g.value("min_targets", c.generation.min_targets);
            c.generation.max_targets = g.value("max_targets", c.generation.max_targets);
            c.generation.p_replace = g.value("p_replace", c.generation.p_replace);
            c.generation.epsilon_overlap = g.value("epsilon_overlap", c.generation.epsilon_overlap);
            c.generation.mask_min_cells = g.value("mask_min_cells", c.generation.mask_min_cells);
            c.generation.mask_max_cells = g.value("mask_max_cells", c.generation.mask_max_cells);
        }
        if (j.contains("calibration")) c.calibration = calibration_from_json(j.at("calibration"));
        c.validate();
        return c;
    });
}

}  // namespace gauntlet
