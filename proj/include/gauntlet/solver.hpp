#pragma once
// Stochastic stand-ins for the grid classifier and the segmenter, and the
// per-kind solving procedures built on them.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gauntlet/challenge.hpp"
#include "gauntlet/classes.hpp"
#include "gauntlet/rng.hpp"

namespace gauntlet {

using ClassRow = std::array<double, kNumClasses>;
using ConfusionMatrix = std::array<ClassRow, kNumClasses>;
using ProbabilityVector = ClassRow;

/// Diagonal accuracy assigned to classes without a published per-class
/// figure; chosen so the macro-averaged top-1 accuracy is 0.824.
inline constexpr double kCommonDiagonal = 0.779;

/// Default matrix: published diagonals for bicycle, bridge, bus and hydrant,
/// kCommonDiagonal elsewhere, off-diagonal mass spread evenly along each row.
ConfusionMatrix default_confusion();

/// Mean of the diagonal.
double macro_top1(const ConfusionMatrix& m);

struct ClassifierModel {
    ConfusionMatrix confusion = default_confusion();
    double concentration = 50.0;
    double threshold = 0.2;
    // Share of the true class's mass handed to the confused class on a
    // misclassification; the true class usually stays runner-up.
    double ambiguity = 0.6;

    /// Throws ConfigError when a row is not a probability vector or the
    /// scalars are out of range.
    void validate() const;
};

/// Draws the classifier's probability vector for an image of `true_class`.
/// The top-1 class is drawn from the confusion row; the vector is a
/// Dirichlet draw (sharpness = concentration) centred on the row, with
/// `ambiguity` of the true-class mass shifted to the drawn class when the
/// two differ, and its largest entry then moved onto the drawn class.
ProbabilityVector classify(const ClassifierModel& model, ChallengeClass true_class, Rng& rng);

struct SegmentationModel {
    std::array<bool, kNumClasses> supported{};
    double iou_noise = 0.02;
    double epsilon_overlap = 0.0;

    /// Nine classes: everything except stairs, chimney, mountain, palm_tree.
    static SegmentationModel default_model();
    bool supports(ChallengeClass c) const { return supported[c.index()]; }
    void validate() const;
};

struct Selection {
    CellSet cells;
    std::vector<int> click_order;

    friend bool operator==(const Selection&, const Selection&) = default;
};

struct Skip {
    std::string reason;  // "unsupported_class" | "round_limit"

    friend bool operator==(const Skip&, const Skip&) = default;
};

using SolveOutcome = std::variant<Selection, Skip>;

/// Cells whose target probability is strictly greater than `threshold`.
CellSet select_above_threshold(std::span<const double> target_probability, double threshold);

/// Thresholded classification of the cells in `examine` (all cells when
/// empty). Throws InputError for a Type2 challenge.
SolveOutcome solve_grid_classification(const ClassifierModel& model, const Challenge& challenge,
                                       ChallengeClass target, Rng& rng,
                                       const std::optional<CellSet>& examine = std::nullopt);

/// Jitters a mask's centre and extents in proportion to `noise`, keeping it
/// inside the unit square.
ObjectMask perturb_mask(const ObjectMask& mask, double noise, Rng& rng);

/// Selects every cell the (perturbed) segmentation overlaps, or skips
/// unsupported targets. Throws InputError for non-Type2 challenges.
SolveOutcome solve_segmentation(const SegmentationModel& model, const Challenge& challenge, Rng& rng);

namespace agent {
struct Oracle {};
struct Classifier {
    ClassifierModel model;
};
struct Segmenter {
    SegmentationModel model;
};
struct Composite {
    ClassifierModel classifier;
    SegmentationModel segmenter;
};
}  // namespace agent

using Agent = std::variant<agent::Oracle, agent::Classifier, agent::Segmenter, agent::Composite>;

/// Whether the agent can handle challenges of `kind`.
bool agent_supports(const Agent& a, ChallengeKind kind);

struct SolveReport {
    SolveOutcome outcome;
    int rounds = 0;
    std::vector<ChallengeRound> log;  // one entry per interaction round
};

inline constexpr int kDefaultMaxRounds = 10;

/// Solves one challenge. Dynamic challenges loop: the agent clicks, the
/// clicked cells are replaced, and only replacements are examined next,
/// until a round clicks nothing or `max_rounds` rounds have been used.
SolveReport solve_challenge(const Agent& a, const Challenge& challenge, Rng& rng,
                            int max_rounds = kDefaultMaxRounds);

}  // namespace gauntlet
