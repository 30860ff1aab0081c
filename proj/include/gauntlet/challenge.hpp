#pragma once
// Synthetic image-grid challenges and exact-match grading.
//
// Cells are indexed row-major from the top-left corner. The Type2 scene is
// the unit square with y pointing down, split into 4x4 cells of side 0.25.

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gauntlet/classes.hpp"
#include "gauntlet/rng.hpp"

namespace gauntlet {

enum class ChallengeKind { Type1Grid3x3, Type2Grid4x4Segment, Type3Dynamic3x3 };

std::string_view to_string(ChallengeKind kind);
ChallengeKind parse_challenge_kind(std::string_view token);
int grid_dim(ChallengeKind kind);
int cell_count(ChallengeKind kind);

using CellSet = std::set<int>;

struct GridCell {
    int index = 0;
    ChallengeClass true_class;
    double coverage = 0.0;  // Type2 only
    int generation = 0;     // Type3 only

    friend bool operator==(const GridCell&, const GridCell&) = default;
};

enum class ShapeKind { Rectangle, Ellipse };

/// Axis-aligned rectangle or ellipse given by center and half-extents.
struct ObjectMask {
    ShapeKind shape = ShapeKind::Rectangle;
    double cx = 0.5;
    double cy = 0.5;
    double hx = 0.25;
    double hy = 0.25;

    friend bool operator==(const ObjectMask&, const ObjectMask&) = default;
};

inline constexpr int kMaskGrid = 4;
inline constexpr int kMaskCells = kMaskGrid * kMaskGrid;
using CoverageGrid = std::array<double, kMaskCells>;

/// Fraction of each 4x4 cell covered by the mask. Throws InputError if the
/// shape is degenerate or leaves the unit square.
CoverageGrid mask_cell_coverage(const ObjectMask& mask);

/// Cells whose coverage is strictly greater than `epsilon`.
CellSet cells_over(const CoverageGrid& coverage, double epsilon);

/// Probability of each class being chosen as a challenge target.
struct TargetMix {
    std::array<double, kNumClasses> weights{};

    static TargetMix uniform();
    static TargetMix degenerate(ChallengeClass c);
    /// Throws ConfigError unless weights are non-negative and sum to 1.
    void validate() const;
};

struct GenerationParams {
    int min_targets = 1;
    int max_targets = 6;
    double p_replace = 0.3;
    double epsilon_overlap = 0.0;
    int mask_min_cells = 2;
    int mask_max_cells = 8;

    void validate(ChallengeKind kind) const;
};

struct Challenge {
    std::string id;
    ChallengeKind kind = ChallengeKind::Type1Grid3x3;
    ChallengeClass target;
    std::vector<GridCell> cells;
    std::optional<ObjectMask> mask;
    double p_replace = 0.3;
    double epsilon_overlap = 0.0;

    friend bool operator==(const Challenge&, const Challenge&) = default;
};

Challenge generate_challenge(Rng& rng, ChallengeKind kind, const TargetMix& mix,
                             const GenerationParams& params = {});

/// The selection a perfect solver would make for the challenge as it stands.
CellSet expected_selection(const Challenge& challenge);

struct GradeResult {
    bool passed = false;
    CellSet expected;
    CellSet selected;

    friend bool operator==(const GradeResult&, const GradeResult&) = default;
};

/// Exact set-equality grading. Throws InputError on an out-of-range index.
GradeResult grade(const Challenge& challenge, const CellSet& selection);

/// Redraws each clicked Type3 cell; the new content is the target with
/// probability challenge.p_replace. Throws InputError for other kinds.
Challenge replace_clicked(const Challenge& challenge, const CellSet& clicked, Rng& rng);

/// One interaction round: the challenge as shown, and the cells clicked.
struct ChallengeRound {
    Challenge shown;
    CellSet clicked;
};

struct RoundsGrade {
    bool passed = false;
    std::vector<GradeResult> rounds;
};

/// Grades a full interaction. Every round must match exactly; a dynamic
/// challenge must additionally end on an empty confirmation round.
RoundsGrade grade_rounds(std::span<const ChallengeRound> rounds);

}  // namespace gauntlet
