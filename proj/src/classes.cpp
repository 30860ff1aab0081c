#include "gauntlet/classes.hpp"

#include <algorithm>
#include <string>

#include "gauntlet/error.hpp"

namespace gauntlet {

ChallengeClass::ChallengeClass(std::size_t index) : index_(index) {
    if (index >= kNumClasses) throw InputError("class index out of range: " + std::to_string(index));
}

ChallengeClass ChallengeClass::parse(std::string_view label) {
    const auto it = std::find(kClassLabels.begin(), kClassLabels.end(), label);
    if (it == kClassLabels.end()) throw InputError("unknown class label: " + std::string(label));
    return ChallengeClass(static_cast<std::size_t>(it - kClassLabels.begin()));
}

namespace classes {
ChallengeClass bicycle() { return ChallengeClass::parse("bicycle"); }
ChallengeClass bridge() { return ChallengeClass::parse("bridge"); }
ChallengeClass bus() { return ChallengeClass::parse("bus"); }
ChallengeClass car() { return ChallengeClass::parse("car"); }
ChallengeClass crosswalk() { return ChallengeClass::parse("crosswalk"); }
ChallengeClass hydrant() { return ChallengeClass::parse("hydrant"); }
ChallengeClass motorcycle() { return ChallengeClass::parse("motorcycle"); }
ChallengeClass stairs() { return ChallengeClass::parse("stairs"); }
}  // namespace classes

}  // namespace gauntlet
