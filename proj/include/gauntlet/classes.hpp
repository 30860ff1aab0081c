#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string_view>

namespace gauntlet {

inline constexpr std::size_t kNumClasses = 13;

/// Canonical class tokens, in index order. The first eight kinds appear in
/// live challenges named in the literature; the remaining five are the usual
/// image-grid classes that fill out the list of thirteen.
inline constexpr std::array<std::string_view, kNumClasses> kClassLabels = {
    "bicycle", "boat",       "bridge",    "bus",    "car",    "chimney",        "crosswalk",
    "hydrant", "motorcycle", "mountain", "palm_tree", "stairs", "traffic_light",
};

/// One of the thirteen challenge object classes.
class ChallengeClass {
public:
    constexpr ChallengeClass() = default;
    /// Throws InputError when `index` is not below kNumClasses.
    explicit ChallengeClass(std::size_t index);

    /// Throws InputError for an unknown label.
    static ChallengeClass parse(std::string_view label);

    constexpr std::size_t index() const noexcept { return index_; }
    constexpr std::string_view label() const noexcept { return kClassLabels[index_]; }

    friend constexpr auto operator<=>(ChallengeClass, ChallengeClass) = default;

private:
    std::size_t index_ = 0;
};

namespace classes {
ChallengeClass bicycle();
ChallengeClass bridge();
ChallengeClass bus();
ChallengeClass car();
ChallengeClass crosswalk();
ChallengeClass hydrant();
ChallengeClass motorcycle();
ChallengeClass stairs();
}  // namespace classes

}  // namespace gauntlet
