#include "gauntlet/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

ConfusionMatrix default_confusion() {
    ClassRow diagonal;
    diagonal.fill(kCommonDiagonal);
    diagonal[classes::bicycle().index()] = 0.89;
    diagonal[classes::bridge().index()] = 0.84;
    diagonal[classes::bus().index()] = 0.97;
    diagonal[classes::hydrant().index()] = 1.00;

    ConfusionMatrix m{};
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        const double off = (1.0 - diagonal[i]) / static_cast<double>(kNumClasses - 1);
        m[i].fill(off);
        m[i][i] = diagonal[i];
    }
    return m;
}

double macro_top1(const ConfusionMatrix& m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kNumClasses; ++i) sum += m[i][i];
    return sum / static_cast<double>(kNumClasses);
}

void ClassifierModel::validate() const {
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        double sum = 0.0;
        for (double p : confusion[i]) {
            if (!(p >= 0.0)) throw ConfigError(fmt::format("confusion row {} has a negative entry", i));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConfigError(fmt::format("confusion row {} sums to {}", i, sum));
    }
    if (!(concentration > 0.0)) throw ConfigError("concentration must be positive");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in [0, 1]");
    if (!(ambiguity >= 0.0 && ambiguity <= 1.0)) throw ConfigError("ambiguity must lie in [0, 1]");
}

ProbabilityVector classify(const ClassifierModel& model, ChallengeClass true_class, Rng& rng) {
    const ClassRow& row = model.confusion[true_class.index()];
    const std::size_t top = rng.categorical(row);

    ClassRow centre = row;
    if (top != true_class.index()) {
        const double moved = model.ambiguity * row[true_class.index()];
        centre[top] += moved;
        centre[true_class.index()] -= moved;
    }

    ProbabilityVector v{};
    double total = 0.0;
    for (std::size_t j = 0; j < kNumClasses; ++j) {
        v[j] = rng.gamma(model.concentration * centre[j]);
        total += v[j];
    }
    if (!(total > 0.0)) {
        v.fill(0.0);
        v[top] = 1.0;
        return v;
    }
    for (double& p : v) p /= total;
    const auto argmax = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    std::swap(v[argmax], v[top]);
    return v;
}

SegmentationModel SegmentationModel::default_model() {
    SegmentationModel m;
    m.supported.fill(true);
    for (auto label : {"stairs", "chimney", "mountain", "palm_tree"})
        m.supported[ChallengeClass::parse(label).index()] = false;
    return m;
}

void SegmentationModel::validate() const {
    if (!(iou_noise >= 0.0 && iou_noise < 1.0)) throw ConfigError("iou_noise must lie in [0, 1)");
    if (!(epsilon_overlap >= 0.0 && epsilon_overlap < 1.0))
        throw ConfigError("epsilon_overlap must lie in [0, 1)");
}

CellSet select_above_threshold(std::span<const double> target_probability, double threshold) {
    CellSet out;
    for (std::size_t i = 0; i < target_probability.size(); ++i)
        if (target_probability[i] > threshold) out.insert(static_cast<int>(i));
    return out;
}

namespace {

std::vector<int> in_order(const CellSet& cells) { return {cells.begin(), cells.end()}; }

CellSet all_cells(const Challenge& challenge) {
    CellSet out;
    for (const auto& cell : challenge.cells) out.insert(cell.index);
    return out;
}

}  // namespace

SolveOutcome solve_grid_classification(const ClassifierModel& model, const Challenge& challenge,
                                       ChallengeClass target, Rng& rng,
                                       const std::optional<CellSet>& examine) {
    if (challenge.kind == ChallengeKind::Type2Grid4x4Segment)
        throw InputError("grid classification does not apply to type2 challenges");
    const CellSet cells = examine ? *examine : all_cells(challenge);

    std::vector<double> target_probability(challenge.cells.size(), 0.0);
    for (int i : cells) {
        if (i < 0 || i >= static_cast<int>(challenge.cells.size()))
            throw InputError(fmt::format("cell index {} out of range", i));
        target_probability[i] = classify(model, challenge.cells[i].true_class, rng)[target.index()];
    }
    CellSet picked = select_above_threshold(target_probability, model.threshold);
    return Selection{picked, in_order(picked)};
}

ObjectMask perturb_mask(const ObjectMask& mask, double noise, Rng& rng) {
    if (noise <= 0.0) return mask;
    ObjectMask m = mask;
    m.cx += noise * mask.hx * rng.normal();
    m.cy += noise * mask.hy * rng.normal();
    m.hx *= std::max(0.05, 1.0 + noise * rng.normal());
    m.hy *= std::max(0.05, 1.0 + noise * rng.normal());
    m.hx = std::min(m.hx, 0.5);
    m.hy = std::min(m.hy, 0.5);
    m.cx = std::clamp(m.cx, m.hx, 1.0 - m.hx);
    m.cy = std::clamp(m.cy, m.hy, 1.0 - m.hy);
    return m;
}

SolveOutcome solve_segmentation(const SegmentationModel& model, const Challenge& challenge, Rng& rng) {
    if (challenge.kind != ChallengeKind::Type2Grid4x4Segment || !challenge.mask)
        throw InputError("segmentation requires a type2 challenge with a mask");
    if (!model.supports(challenge.target)) return Skip{"unsupported_class"};
    const ObjectMask seen = perturb_mask(*challenge.mask, model.iou_noise, rng);
    CellSet picked = cells_over(mask_cell_coverage(seen), model.epsilon_overlap);
    return Selection{picked, in_order(picked)};
}

bool agent_supports(const Agent& a, ChallengeKind kind) {
    const bool segment = kind == ChallengeKind::Type2Grid4x4Segment;
    if (std::holds_alternative<agent::Classifier>(a)) return !segment;
    if (std::holds_alternative<agent::Segmenter>(a)) return segment;
    return true;
}

namespace {

// Clicks for one round over the cells in `examine`.
SolveOutcome single_round(const Agent& a, const Challenge& challenge, Rng& rng,
                          const std::optional<CellSet>& examine) {
    if (!agent_supports(a, challenge.kind))
        throw InputError(fmt::format("agent is not bound for {} challenges", to_string(challenge.kind)));

    if (std::holds_alternative<agent::Oracle>(a)) {
        const CellSet truth = expected_selection(challenge);
        CellSet picked;
        for (int i : truth)
            if (!examine || examine->contains(i)) picked.insert(i);
        return Selection{picked, in_order(picked)};
    }
    if (challenge.kind == ChallengeKind::Type2Grid4x4Segment) {
        const auto& model = std::holds_alternative<agent::Segmenter>(a)
                                ? std::get<agent::Segmenter>(a).model
                                : std::get<agent::Composite>(a).segmenter;
        return solve_segmentation(model, challenge, rng);
    }
    const auto& model = std::holds_alternative<agent::Classifier>(a)
                            ? std::get<agent::Classifier>(a).model
                            : std::get<agent::Composite>(a).classifier;
    return solve_grid_classification(model, challenge, challenge.target, rng, examine);
}

}  // namespace

SolveReport solve_challenge(const Agent& a, const Challenge& challenge, Rng& rng, int max_rounds) {
    if (max_rounds < 1) throw InputError("max_rounds must be at least 1");
    SolveReport report;

    if (challenge.kind != ChallengeKind::Type3Dynamic3x3) {
        report.outcome = single_round(a, challenge, rng, std::nullopt);
        report.rounds = 1;
        if (const auto* sel = std::get_if<Selection>(&report.outcome))
            report.log.push_back({challenge, sel->cells});
        return report;
    }

    Selection total;
    Challenge shown = challenge;
    std::optional<CellSet> examine;  // first round looks at every cell
    for (int round = 1; round <= max_rounds; ++round) {
        const SolveOutcome outcome = single_round(a, shown, rng, examine);
        const CellSet clicked = std::get<Selection>(outcome).cells;
        report.log.push_back({shown, clicked});
        report.rounds = round;
        if (clicked.empty()) {
            report.outcome = total;
            return report;
        }
        total.cells.insert(clicked.begin(), clicked.end());
        total.click_order.insert(total.click_order.end(), clicked.begin(), clicked.end());
        shown = replace_clicked(shown, clicked, rng);
        examine = clicked;
    }
    report.outcome = Skip{"round_limit"};
    return report;
}

}  // namespace gauntlet
