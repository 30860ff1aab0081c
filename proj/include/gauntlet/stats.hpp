#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gauntlet {

/// Field order follows the published tables: min, median, mean, max, std, IQR.
struct SummaryStats {
    std::size_t n = 0;
    double minimum = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double maximum = 0.0;
    std::optional<double> std;  // sample (n - 1) deviation; absent when n == 1
    double iqr = 0.0;

    friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

/// Linear-interpolation percentile of sorted data at h = (n - 1) q.
double percentile_sorted(std::span<const double> sorted, double q);

/// Throws InputError on empty input.
SummaryStats summarize(std::span<const double> samples);
SummaryStats summarize(std::span<const long> samples);

struct TTestResult {
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;  // Welch-Satterthwaite
    double p_value = 1.0;             // two-sided
};

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Welch's unequal-variance t-test from summary figures. Throws InputError
/// for n < 2, negative deviations, or zero combined variance.
TTestResult t_from_summary(double mean1, double sd1, std::size_t n1, double mean2, double sd2,
                           std::size_t n2);

/// Welch's t-test on raw samples; sample a is the first side.
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

}  // namespace gauntlet
