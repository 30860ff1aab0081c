#include "gauntlet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gauntlet/error.hpp"

namespace gauntlet {

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InputError("percentile of empty data");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::span<const double> samples) {
    if (samples.empty()) throw InputError("summarize needs at least one sample");
    std::vector<double> v(samples.begin(), samples.end());
    std::sort(v.begin(), v.end());

    SummaryStats s;
    s.n = v.size();
    s.minimum = v.front();
    s.maximum = v.back();
    s.median = percentile_sorted(v, 0.5);
    s.iqr = percentile_sorted(v, 0.75) - percentile_sorted(v, 0.25);
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

SummaryStats summarize(std::span<const long> samples) {
    std::vector<double> v(samples.begin(), samples.end());
    return summarize(std::span<const double>(v));
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw InputError("incomplete beta needs positive shape parameters");
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("incomplete beta argument outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
    return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw InputError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    const double p = incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
    return std::clamp(p, 0.0, 1.0);
}

TTestResult t_from_summary(double mean1, double sd1, std::size_t n1, double mean2, double sd2,
                           std::size_t n2) {
    if (n1 < 2 || n2 < 2) throw InputError("t-test needs at least two samples per side");
    if (!(sd1 >= 0.0 && sd2 >= 0.0)) throw InputError("standard deviations must be non-negative");
    const double v1 = sd1 * sd1 / static_cast<double>(n1);
    const double v2 = sd2 * sd2 / static_cast<double>(n2);
    const double se2 = v1 + v2;
    if (!(se2 > 0.0)) throw InputError("t-test undefined for zero combined variance");

    TTestResult r;
    r.t_statistic = (mean1 - mean2) / std::sqrt(se2);
    r.degrees_of_freedom =
        se2 * se2 / (v1 * v1 / static_cast<double>(n1 - 1) + v2 * v2 / static_cast<double>(n2 - 1));
    r.p_value = student_t_two_sided(r.t_statistic, r.degrees_of_freedom);
    return r;
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw InputError("t-test needs at least two samples per side");
    const SummaryStats sa = summarize(a);
    const SummaryStats sb = summarize(b);
    return t_from_summary(sa.mean, *sa.std, sa.n, sb.mean, *sb.std, sb.n);
}

}  // namespace gauntlet
