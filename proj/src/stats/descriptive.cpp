#include "replica/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "replica/error.hpp"
#include "replica/stats/student_t.hpp"

namespace replica::stats {

MeanSd mean_sd(std::span<const double> xs) {
    if (xs.size() < 2) throw Error(ErrorCode::TooFewSamples, "mean/sd needs at least two samples");
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double x : xs) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    return {mean, std::sqrt(std::max(0.0, m2) / static_cast<double>(n - 1)), n};
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "paired samples differ in length");
    if (a.size() < 2) throw Error(ErrorCode::TooFewSamples, "paired t-test needs at least two pairs");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    if (std::all_of(d.begin(), d.end(), [&](double x) { return x == d.front(); })) {
        throw Error(ErrorCode::ZeroVariance, "all paired differences are equal");
    }
    const auto [mean, sd, n] = mean_sd(d);
    TTestResult r;
    r.n = n;
    r.df = static_cast<int>(n) - 1;
    r.mean_diff = mean;
    r.sd_diff = sd;
    r.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
    r.p_two_sided = student_t_two_sided(r.t_stat, r.df);
    return r;
}

double proportion(int count, int total) {
    if (total <= 0 || count < 0 || count > total) throw Error(ErrorCode::InvalidCounts, "need 0 <= count <= total, total > 0");
    return 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

}  // namespace replica::stats
