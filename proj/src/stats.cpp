#include "hapaxcore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hapaxcore/error.hpp"

namespace hapaxcore {

SummaryStats summary_stats(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DomainError("summary statistics need at least two values");

    SummaryStats s;
    s.n = n;
    const double dn = static_cast<double>(n);

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / dn;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (s.min == s.max) {
        // Constant input: report the exact value rather than a rounding residue.
        s.mean = s.min;
        s.rms = std::abs(s.min);
        return s;
    }

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;

    s.variance = m2 * dn / (dn - 1.0);
    s.std_dev = std::sqrt(s.variance);
    s.std_error = s.std_dev / std::sqrt(dn);
    s.rms = std::sqrt(s.mean * s.mean + m2);

    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis_raw = m4 / (m2 * m2);
    s.kurtosis_excess = *s.kurtosis_raw - 3.0;
    s.mean_over_sd = s.mean / s.std_dev;
    s.pearson2 = 3.0 * (s.mean - s.median) / s.std_dev;
    return s;
}

}  // namespace hapaxcore
