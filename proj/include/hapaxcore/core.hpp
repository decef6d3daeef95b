#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "hapaxcore/error.hpp"
#include "hapaxcore/hapax.hpp"
#include "hapaxcore/zmfit.hpp"

namespace hapaxcore {

/// Largest h such that the h-th value (1-based) is >= h; 0 for empty input.
/// Throws DomainError if the input is not sorted in non-increasing order.
std::int64_t h_index(std::span<const std::int64_t> sorted_sizes);

struct CoreResult {
    std::int64_t h_index = 0;
    std::vector<HapaxEntry> core_tokens;  ///< ranks 1..h_index of the table
    std::int64_t n_total = 0;             ///< table size
    std::optional<double> m_abs;          ///< set once a full-table fit exists
    std::optional<double> m_rel;
};

/// Core = the top h_index entries under the table's tie-break. m_abs and
/// m_rel are left empty.
CoreResult extract_core(const HapaxTable& table);

namespace detail {

inline constexpr double kLogBranchWidth = 1e-9;

// Antiderivative difference of (beta + r)^-gamma between r = 1 and r = upper.
template <typename Scalar>
Scalar zm_area_unit(Scalar beta, Scalar gamma, Scalar upper) {
    const Scalar log_ratio = std::log1p((upper - Scalar(1)) / (beta + Scalar(1)));
    if (std::abs(gamma - Scalar(1)) < Scalar(kLogBranchWidth)) return log_ratio;
    // (b^e - a^e) / e written as a^e expm1(e ln(b/a)) / e to stay accurate near gamma = 1
    const Scalar e = Scalar(1) - gamma;
    return std::pow(beta + Scalar(1), e) * std::expm1(e * log_ratio) / e;
}

}  // namespace detail

/// Area under the fitted curve between r = 1 and r = h:
///     alpha / (1 - gamma) * [(beta + h)^(1 - gamma) - (beta + 1)^(1 - gamma)],
/// or alpha * [ln(beta + h) - ln(beta + 1)] when |gamma - 1| < 1e-9.
/// h is real here so that the integral can be evaluated at any upper limit.
template <typename Scalar>
Scalar measure_abs(const ZMParams<Scalar>& params, Scalar h) {
    if (!params.valid()) throw DomainError("invalid Zipf-Mandelbrot parameters");
    if (!(h >= Scalar(1))) throw DomainError("core measure needs h >= 1");
    return params.alpha * detail::zm_area_unit(params.beta, params.gamma, h);
}

/// measure_abs(params, h) / measure_abs(params, n_total); alpha cancels.
/// Throws DomainError unless 1 <= h < n_total.
template <typename Scalar>
Scalar measure_rel(const ZMParams<Scalar>& params, Scalar h, Scalar n_total) {
    if (!params.valid()) throw DomainError("invalid Zipf-Mandelbrot parameters");
    if (!(h >= Scalar(1)) || !(h < n_total)) {
        throw DomainError("relative core measure needs 1 <= h < n_total");
    }
    return detail::zm_area_unit(params.beta, params.gamma, h) /
           detail::zm_area_unit(params.beta, params.gamma, n_total);
}

/// A fit branch either succeeded or carries the error message.
struct FitBranch {
    std::optional<ZMFitResultd> fit;
    std::string error;
    Vector<double> sizes;  ///< the ranked data the branch was fitted on

    bool ok() const { return fit.has_value(); }
};

struct ThreeWayFits {
    FitBranch fit_all;      ///< every entry
    FitBranch fit_core;     ///< ranks 1..H, reranked
    FitBranch fit_removed;  ///< ranks H+1..N, reranked from 1
};

struct CoreAnalysis {
    CoreResult core;
    ThreeWayFits fits;
};

/// Fits the full table, the core and the table without the core. A failing
/// branch records its error and leaves the others intact. m_abs and m_rel use
/// the full-table parameters; both stay empty if that fit failed, and m_rel
/// also when h_index >= n_total.
CoreAnalysis three_way_fit(const HapaxTable& table, const FitOptions& options = {});

}  // namespace hapaxcore
