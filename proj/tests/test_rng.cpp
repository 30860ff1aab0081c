#include <doctest.h>

#include <random>
#include <vector>

#include "gauntlet/rng.hpp"

using namespace gauntlet;

TEST_CASE("rng engine output is the standard mt19937_64 sequence") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        Rng r(seed);
        std::mt19937_64 ref(splitmix64(seed));
        for (int i = 0; i < 1000; ++i) CHECK(r.next_u64() == ref());
    }
    // 10000th output of a default-seeded engine is fixed by the standard
    std::mt19937_64 standard;
    standard.discard(9999);
    CHECK(standard() == 9981545732273789042ULL);
}

TEST_CASE("splitmix64 reference values") {
    // First two outputs of the reference splitmix64 generator started at state 0
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("streams for different indices diverge") {
    auto a = Rng::stream(7, 1);
    auto b = Rng::stream(7, 2);
    auto a2 = Rng::stream(7, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        same += x == b.next_u64();
        CHECK(x == a2.next_u64());
    }
    CHECK(same == 0);
}

TEST_CASE("uniform stays in range") {
    Rng r(3);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double v = r.uniform_pos();
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
        const int k = r.uniform_int(-2, 3);
        REQUIRE(k >= -2);
        REQUIRE(k <= 3);
    }
}

TEST_CASE("normal and gamma moments") {
    Rng r(11);
    constexpr int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(s / n == doctest::Approx(0.0).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));

    for (double shape : {0.5, 1.0, 3.7, 39.0}) {
        double g = 0;
        for (int i = 0; i < n; ++i) g += r.gamma(shape);
        // standard error of the mean is sqrt(shape / n)
        CHECK(std::abs(g / n - shape) < 5.0 * std::sqrt(shape / n));
    }
    CHECK(r.gamma(0.0) == 0.0);
}

TEST_CASE("categorical never returns a zero-weight index") {
    Rng r(5);
    const std::vector<double> w{0.0, 2.0, 0.0, 1.0, 0.0};
    int counts[5] = {};
    for (int i = 0; i < 30000; ++i) ++counts[r.categorical(w)];
    CHECK(counts[0] == 0);
    CHECK(counts[2] == 0);
    CHECK(counts[4] == 0);
    CHECK(counts[1] / 30000.0 == doctest::Approx(2.0 / 3.0).epsilon(0.03));
}

TEST_CASE("geometric support and mean") {
    Rng r(9);
    CHECK(r.geometric(1.0) == 1);
    CHECK(r.geometric(0.0) == std::numeric_limits<long>::max() / 2);
    constexpr int n = 200000;
    double s = 0;
    long lo = 1000;
    for (int i = 0; i < n; ++i) {
        const long k = r.geometric(0.25);
        lo = std::min(lo, k);
        s += static_cast<double>(k);
    }
    CHECK(lo == 1);
    CHECK(s / n == doctest::Approx(4.0).epsilon(0.02));
}
