#pragma once

#include <cstddef>
#include <span>

namespace replica::stats {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation (n - 1 denominator)
    std::size_t n = 0;
};

/// Single-pass (Welford) mean and sample standard deviation. Throws
/// TooFewSamples for fewer than two values.
MeanSd mean_sd(std::span<const double> xs);

struct TTestResult {
    double t_stat = 0.0;
    int df = 0;
    double p_two_sided = 1.0;
    double mean_diff = 0.0;
    double sd_diff = 0.0;
    std::size_t n = 0;
};

/// Paired-sample t-test on d = a - b. Throws LengthMismatch, TooFewSamples
/// (n < 2) and ZeroVariance (all differences equal).
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// 100 * count / total. Throws InvalidCounts unless 0 <= count <= total, total > 0.
double proportion(int count, int total);

/// Half-away-from-zero rounding to a number of decimals, as used in reports.
double round_to(double value, int decimals);

}  // namespace replica::stats
