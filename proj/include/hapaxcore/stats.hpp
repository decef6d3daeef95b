#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace hapaxcore {

/// Descriptive statistics of a frequency list.
///
/// variance is the sample variance (n - 1 denominator). skewness is the
/// moment estimator g1 = m3 / m2^1.5 and kurtosis_excess is g2 = m4 / m2^2 - 3
/// (kurtosis_raw = m4 / m2^2), where mk are central moments with denominator
/// n. Both are empty when the input has zero variance, as are mean_over_sd
/// and pearson2.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
    std::optional<double> skewness;
    std::optional<double> kurtosis_raw;
    std::optional<double> kurtosis_excess;
    double median = 0.0;
    double max = 0.0;
    double min = 0.0;
    /// Square root of the mean of squares, evaluated as sqrt(mean^2 + m2).
    double rms = 0.0;
    double std_error = 0.0;
    std::optional<double> mean_over_sd;
    /// Pearson's second skewness coefficient 3 (mean - median) / sd.
    std::optional<double> pearson2;
};

/// Throws DomainError when fewer than two values are given.
SummaryStats summary_stats(std::span<const double> values);

}  // namespace hapaxcore
