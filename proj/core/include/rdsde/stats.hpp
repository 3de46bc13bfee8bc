#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rdsde::stats {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_sd = 0.0;  ///< sample SD of the residuals (n - 2 degrees of freedom)
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// Percentile bootstrap confidence interval of the mean.
Interval bootstrap_mean_ci(std::span<const double> values, double level, std::size_t resamples,
                           std::uint64_t seed);

double mean(std::span<const double> values);
double median(std::span<const double> values);

}  // namespace rdsde::stats
