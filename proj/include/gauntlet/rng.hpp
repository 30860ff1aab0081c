#pragma once
// Seeded random stream used by every stochastic component.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The variate transforms below are written out explicitly
// instead of using <random> distributions, whose algorithms differ between
// standard library vendors; recorded test values therefore hold on any
// conforming toolchain.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace gauntlet {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

    /// Independent stream for sub-task `index` of an experiment seeded with `master`.
    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(splitmix64(master) ^ splitmix64(index + 0x5851F42D4C957F2DULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe to take a logarithm of.
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(uniform() * static_cast<double>(span));
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; the paired variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the power boost.
    double gamma(double shape) {
        if (shape <= 0.0) return 0.0;
        if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform_pos(), 1.0 / shape);
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Index drawn from unnormalized non-negative weights.
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            last_positive = i;
            if (u < weights[i]) return i;
            u -= weights[i];
        }
        return last_positive;
    }

    /// Number of Bernoulli(p) trials up to and including the first success (support >= 1).
    long geometric(double p) {
        constexpr long cap = std::numeric_limits<long>::max() / 2;
        if (p >= 1.0) return 1;
        if (p <= 0.0) return cap;
        const double n = std::ceil(std::log(uniform_pos()) / std::log1p(-p));
        if (n < 1.0) return 1;
        return n >= static_cast<double>(cap) ? cap : static_cast<long>(n);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gauntlet
