#pragma once

// Zipf-Mandelbrot rank-size law s(r) = alpha / (beta + r)^gamma: evaluation,
// least-squares calibration, confidence intervals and residual diagnostics.
//
// Everything here is templated on the scalar type and takes Eigen dense
// objects, so `fit(sizes)` works for any expression yielding a column of
// ranked sizes s_1 >= s_2 >= ... (rank r is the 1-based position).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "hapaxcore/error.hpp"

namespace hapaxcore {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct ZMParams {
    Scalar alpha{1};
    Scalar beta{0};
    Scalar gamma{1};

    /// alpha > 0, beta > -1, gamma > 0, all finite.
    bool valid() const {
        return std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma) &&
               alpha > Scalar(0) && beta + Scalar(1) > Scalar(0) && gamma > Scalar(0);
    }

    /// Checked construction; throws DomainError on invalid parameters.
    static ZMParams make(Scalar alpha, Scalar beta, Scalar gamma) {
        ZMParams p{alpha, beta, gamma};
        if (!p.valid()) throw DomainError("invalid Zipf-Mandelbrot parameters");
        return p;
    }
};

using ZMParamsd = ZMParams<double>;

template <typename Scalar>
inline Scalar zm_eval(const ZMParams<Scalar>& p, Scalar rank) {
    return p.alpha / std::pow(p.beta + rank, p.gamma);
}

/// Fitted values at ranks 1..n.
template <typename Scalar>
Vector<Scalar> zm_curve(const ZMParams<Scalar>& p, Eigen::Index n) {
    const auto ranks = Vector<Scalar>::LinSpaced(n, Scalar(1), static_cast<Scalar>(n)).array();
    return (p.alpha * (ranks + p.beta).pow(-p.gamma)).matrix();
}

enum class FitSpace { Linear, Log };

enum class FitModel {
    ZipfMandelbrot,  ///< alpha, beta, gamma free
    PowerLaw,        ///< beta fixed at 0
};

struct FitOptions {
    FitSpace space = FitSpace::Linear;
    int max_iterations = 500;
    /// Stop when the relative decrease of the objective falls below this.
    double objective_tolerance = 1e-10;
    /// Stop when the scaled relative parameter step falls below this.
    double step_tolerance = 1e-8;
};

template <typename Scalar>
struct Interval {
    Scalar low{};
    Scalar high{};
    bool contains(Scalar x) const { return low <= x && x <= high; }
};

template <typename Scalar>
using ParamIntervals = std::array<Interval<Scalar>, 3>;  // alpha, beta, gamma

template <typename Scalar>
struct ZMFitResult {
    ZMParams<Scalar> params;
    FitModel model = FitModel::ZipfMandelbrot;
    FitSpace space = FitSpace::Linear;
    /// Empty when the Jacobian at the optimum is rank deficient.
    std::optional<ParamIntervals<Scalar>> ci95;
    /// Linear-space R^2; empty for constant data.
    std::optional<Scalar> r_squared;
    Vector<Scalar> residuals;  ///< observed - fitted, per rank
    Eigen::Index n_points = 0;
    bool converged = false;
    int iterations = 0;
    Scalar sse{};          ///< objective at the returned parameters (in the fit space)
    Scalar initial_sse{};  ///< objective at the starting point
};

using ZMFitResultd = ZMFitResult<double>;

template <typename Scalar>
struct DeviationReport {
    std::vector<Eigen::Index> low_rank_excess;    ///< ranks 1..k with observed > fitted
    std::vector<Eigen::Index> high_rank_deficit;  ///< trailing ranks with observed < fitted
    /// Largest (observed - fitted) / fitted over low_rank_excess; 0 if empty.
    Scalar max_prefix_relative_excess{};
};

inline Vector<double> to_sizes(std::span<const std::int64_t> values) {
    Vector<double> out(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = static_cast<double>(values[i]);
    }
    return out;
}

/// 1 - SS_res / SS_tot in linear space. Empty when the data are constant.
template <typename Derived>
std::optional<typename Derived::Scalar> r_squared(
    const Eigen::DenseBase<Derived>& sizes, const ZMParams<typename Derived::Scalar>& params) {
    using Scalar = typename Derived::Scalar;
    const Vector<Scalar> s = sizes.derived();
    if (s.size() < 2) throw DomainError("R^2 needs at least two points");
    const Scalar mean = s.mean();
    const Scalar ss_tot = (s.array() - mean).square().sum();
    if (!(ss_tot > Scalar(0))) return std::nullopt;
    const Scalar ss_res = (s - zm_curve(params, s.size())).squaredNorm();
    return Scalar(1) - ss_res / ss_tot;
}

template <typename Derived>
DeviationReport<typename Derived::Scalar> deviations(
    const Eigen::DenseBase<Derived>& sizes, const ZMParams<typename Derived::Scalar>& params) {
    using Scalar = typename Derived::Scalar;
    const Vector<Scalar> s = sizes.derived();
    const Vector<Scalar> f = zm_curve(params, s.size());
    DeviationReport<Scalar> report;
    Eigen::Index i = 0;
    for (; i < s.size() && s(i) > f(i); ++i) {
        report.low_rank_excess.push_back(i + 1);
        report.max_prefix_relative_excess =
            std::max(report.max_prefix_relative_excess, (s(i) - f(i)) / f(i));
    }
    Eigen::Index j = s.size();
    while (j > i && s(j - 1) < f(j - 1)) --j;
    for (Eigen::Index k = j; k < s.size(); ++k) report.high_rank_deficit.push_back(k + 1);
    return report;
}

namespace detail {

// Search coordinates. With c = 1 / (beta + 1), k = gamma * c and
// L = ln s(1) = ln alpha - gamma ln(beta + 1), the log-model becomes
//     ln s(r) = L - (k / c) ln(1 + c (r - 1)),
// which tends smoothly to L - k (r - 1) as beta grows. The long curved valley
// that couples alpha, beta and gamma at large beta is nearly straight here.
template <typename Scalar>
struct Coords {
    Scalar level;  // L
    Scalar slope;  // k
    Scalar curv;   // c
};

inline constexpr double kBetaFloor = -0.999;
inline constexpr double kGammaCap = 10.0;
inline constexpr double kGammaFloor = 1e-10;
inline constexpr double kCurvFloor = 1e-12;

template <typename Scalar>
Coords<Scalar> to_coords(const ZMParams<Scalar>& p) {
    const Scalar c = Scalar(1) / (p.beta + Scalar(1));
    return {std::log(p.alpha) - p.gamma * std::log(p.beta + Scalar(1)), p.gamma * c, c};
}

template <typename Scalar>
ZMParams<Scalar> from_coords(const Coords<Scalar>& x) {
    const Scalar gamma = x.slope / x.curv;
    const Scalar beta = Scalar(1) / x.curv - Scalar(1);
    return {std::exp(x.level + gamma * std::log(beta + Scalar(1))), beta, gamma};
}

template <typename Scalar>
Coords<Scalar> project(Coords<Scalar> x, bool curv_fixed) {
    if (!curv_fixed) {
        const Scalar cmax = Scalar(1) / (Scalar(kBetaFloor) + Scalar(1));
        x.curv = std::clamp(x.curv, Scalar(kCurvFloor), cmax);
    }
    x.slope = std::clamp(x.slope, Scalar(kGammaFloor) * x.curv, Scalar(kGammaCap) * x.curv);
    return x;
}

// (log1p(y) - y / (1 + y)) / y^2 without cancellation for small y.
template <typename Scalar>
Scalar curvature_kernel(Scalar y) {
    if (std::abs(y) < Scalar(1e-3)) {
        // sum_{n>=2} (-1)^n (n-1)/n y^(n-2)
        Scalar sum{0};
        Scalar pow{1};
        for (int n = 2; n <= 8; ++n) {
            const Scalar term = Scalar(n - 1) / Scalar(n) * pow;
            sum += (n % 2 == 0) ? term : -term;
            pow *= y;
        }
        return sum;
    }
    return (std::log1p(y) - y / (Scalar(1) + y)) / (y * y);
}

template <typename Scalar>
class Problem {
public:
    Problem(const Vector<Scalar>& sizes, FitSpace space, FitModel model)
        : sizes_(sizes), space_(space), model_(model),
          log_sizes_(sizes.array().log().matrix()),
          offsets_(Vector<Scalar>::LinSpaced(sizes.size(), Scalar(0),
                                             static_cast<Scalar>(sizes.size() - 1))) {}

    Eigen::Index n() const { return sizes_.size(); }
    int free_count() const { return model_ == FitModel::PowerLaw ? 2 : 3; }
    bool curv_fixed() const { return model_ == FitModel::PowerLaw; }

    Vector<Scalar> log_model(const Coords<Scalar>& x) const {
        const Scalar ratio = x.slope / x.curv;
        return (x.level - ratio * (offsets_.array() * x.curv).log1p()).matrix();
    }

    Vector<Scalar> residuals(const Coords<Scalar>& x) const {
        const Vector<Scalar> lf = log_model(x);
        if (space_ == FitSpace::Log) return log_sizes_ - lf;
        return sizes_ - lf.array().exp().matrix();
    }

    // d(residual)/d(free coords); columns L, k[, c].
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jacobian(const Coords<Scalar>& x) const {
        const Eigen::Index m = n();
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jac(m, free_count());
        const Vector<Scalar> lf = log_model(x);
        for (Eigen::Index i = 0; i < m; ++i) {
            const Scalar t = offsets_(i);
            const Scalar y = x.curv * t;
            // d ln f / d coords
            const Scalar d_level{1};
            const Scalar d_slope = -std::log1p(y) / x.curv;
            const Scalar d_curv = x.slope * t * t * curvature_kernel(y);
            const Scalar scale = space_ == FitSpace::Log ? Scalar(-1) : -std::exp(lf(i));
            jac(i, 0) = scale * d_level;
            jac(i, 1) = scale * d_slope;
            if (!curv_fixed()) jac(i, 2) = scale * d_curv;
        }
        return jac;
    }

    Coords<Scalar> step(const Coords<Scalar>& x, const Vector<Scalar>& h) const {
        Coords<Scalar> y{x.level + h(0), x.slope + h(1), x.curv};
        if (!curv_fixed()) y.curv += h(2);
        return project(y, curv_fixed());
    }

    Vector<Scalar> as_vector(const Coords<Scalar>& x) const {
        Vector<Scalar> v(free_count());
        v(0) = x.level;
        v(1) = x.slope;
        if (!curv_fixed()) v(2) = x.curv;
        return v;
    }

    // Deterministic start: for each beta on a fixed grid, regress ln s on
    // ln(beta + r), refit alpha by least squares in the fit space, and keep
    // the beta with the smallest objective.
    Coords<Scalar> initial_guess() const {
        std::vector<Scalar> grid{Scalar(0)};
        if (!curv_fixed()) {
            for (int e = -10; e <= 60; ++e) grid.push_back(std::pow(Scalar(10), Scalar(e) / Scalar(10)));
        }
        const auto ranks = (offsets_.array() + Scalar(1));
        Coords<Scalar> best{};
        Scalar best_sse = std::numeric_limits<Scalar>::infinity();
        for (const Scalar beta : grid) {
            const Eigen::Array<Scalar, Eigen::Dynamic, 1> lx = (ranks + beta).log();
            const Scalar mx = lx.mean();
            const Scalar my = log_sizes_.mean();
            const Scalar sxx = (lx - mx).square().sum();
            const Scalar sxy = ((lx - mx) * (log_sizes_.array() - my)).sum();
            Scalar gamma = sxx > Scalar(0) ? -sxy / sxx : Scalar(1);
            gamma = std::clamp(gamma, Scalar(kGammaFloor), Scalar(kGammaCap));
            const Eigen::Array<Scalar, Eigen::Dynamic, 1> g = (-gamma * lx).exp();
            Scalar alpha;
            if (space_ == FitSpace::Log) {
                alpha = std::exp(my + gamma * mx);
            } else {
                alpha = (sizes_.array() * g).sum() / g.square().sum();
            }
            if (!(alpha > Scalar(0)) || !std::isfinite(alpha)) continue;
            const Coords<Scalar> x = project(to_coords(ZMParams<Scalar>{alpha, beta, gamma}), curv_fixed());
            const Scalar sse = residuals(x).squaredNorm();
            if (sse < best_sse) {
                best_sse = sse;
                best = x;
            }
        }
        if (!std::isfinite(best_sse)) {
            best = project(to_coords(ZMParams<Scalar>{sizes_(0), Scalar(0), Scalar(1)}), curv_fixed());
        }
        return best;
    }

private:
    Vector<Scalar> sizes_;
    FitSpace space_;
    FitModel model_;
    Vector<Scalar> log_sizes_;
    Vector<Scalar> offsets_;  // r - 1
};

template <typename Scalar>
void check_sizes(const Vector<Scalar>& s) {
    if (s.size() < 4) throw DomainError("fit needs at least 4 ranked sizes, got " + std::to_string(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s(i)) || !(s(i) > Scalar(0))) {
            throw DomainError("sizes must be positive and finite (rank " + std::to_string(i + 1) + ")");
        }
    }
}

}  // namespace detail

/// Asymptotic 95% intervals: estimate +/- t(0.975, N - p) * se, with the
/// covariance s^2 (J^T J)^-1, s^2 = SSE / (N - p), J the Jacobian of the
/// fit-space residuals with respect to the free parameters at `params`.
/// A fixed parameter (beta of a power law) gets a zero-width interval.
/// Empty when the Jacobian is rank deficient.
template <typename Derived>
std::optional<ParamIntervals<typename Derived::Scalar>> confidence_intervals(
    const Eigen::DenseBase<Derived>& sizes, const ZMParams<typename Derived::Scalar>& params,
    FitModel model = FitModel::ZipfMandelbrot, FitSpace space = FitSpace::Linear) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Vector<Scalar> s = sizes.derived();
    const Eigen::Index n = s.size();
    const int p = model == FitModel::PowerLaw ? 2 : 3;
    if (n <= p) return std::nullopt;

    const Vector<Scalar> f = zm_curve(params, n);
    Matrix jac(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar shifted = params.beta + static_cast<Scalar>(i + 1);
        const Scalar w = space == FitSpace::Log ? Scalar(1) : f(i);
        jac(i, 0) = w / params.alpha;
        jac(i, 1) = -w * std::log(shifted);  // gamma
        if (p == 3) jac(i, 2) = -w * params.gamma / shifted;  // beta
    }
    const Vector<Scalar> res =
        space == FitSpace::Log ? Vector<Scalar>(s.array().log() - f.array().log()) : Vector<Scalar>(s - f);
    const Scalar sigma2 = res.squaredNorm() / static_cast<Scalar>(n - p);

    // Column scaling, then (J^T J)^-1 = D^-1 P R^-1 R^-T P^T D^-1 from a pivoted QR.
    Vector<Scalar> norms = jac.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (!(norms(j) > Scalar(0)) || !std::isfinite(norms(j))) return std::nullopt;
    }
    const Matrix scaled = jac * norms.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
    if (qr.rank() < p) return std::nullopt;
    const Matrix r = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    const Matrix rinv = r.template triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
    const Matrix perm = qr.colsPermutation();
    const Matrix cov_scaled = perm * (rinv * rinv.transpose()) * perm.transpose();
    const Matrix cov = norms.cwiseInverse().asDiagonal() * cov_scaled * norms.cwiseInverse().asDiagonal();

    const boost::math::students_t_distribution<double> dist(static_cast<double>(n - p));
    const Scalar t = static_cast<Scalar>(boost::math::quantile(dist, 0.975));
    auto interval = [&](Scalar estimate, Eigen::Index j) {
        const Scalar half = t * std::sqrt(std::max(Scalar(0), sigma2 * cov(j, j)));
        return Interval<Scalar>{estimate - half, estimate + half};
    };
    ParamIntervals<Scalar> out;
    out[0] = interval(params.alpha, 0);
    out[2] = interval(params.gamma, 1);
    out[1] = p == 3 ? interval(params.beta, 2) : Interval<Scalar>{params.beta, params.beta};
    return out;
}

/// Damped Gauss-Newton (Levenberg-Marquardt) calibration of the chosen model.
/// Throws DomainError for fewer than 4 points or non-positive sizes. If the
/// iteration cap is reached the best parameters so far are returned with
/// converged = false.
template <typename Derived>
ZMFitResult<typename Derived::Scalar> fit_model(const Eigen::DenseBase<Derived>& sizes, FitModel model,
                                                const FitOptions& options = {}) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Vector<Scalar> s = sizes.derived();
    detail::check_sizes(s);

    const detail::Problem<Scalar> problem(s, options.space, model);
    const int p = problem.free_count();
    const Eigen::Index n = problem.n();

    detail::Coords<Scalar> x = problem.initial_guess();
    Vector<Scalar> res = problem.residuals(x);
    Scalar sse = res.squaredNorm();

    ZMFitResult<Scalar> result;
    result.model = model;
    result.space = options.space;
    result.n_points = n;
    result.initial_sse = sse;

    Scalar lambda{1e-3};
    int iter = 0;
    bool converged = false;
    while (iter < options.max_iterations && !converged) {
        ++iter;
        if (sse == Scalar(0)) {
            converged = true;
            break;
        }
        const Matrix jac = problem.jacobian(x);
        Vector<Scalar> norms = jac.colwise().norm().transpose();
        for (Eigen::Index j = 0; j < p; ++j) {
            if (!(norms(j) > Scalar(0)) || !std::isfinite(norms(j))) norms(j) = Scalar(1);
        }
        const Matrix scaled = jac * norms.cwiseInverse().asDiagonal();

        bool accepted = false;
        while (!accepted) {
            // Solve min |scaled h + res|^2 + lambda |h|^2 through QR of the stacked system.
            Matrix stacked(n + p, p);
            stacked.topRows(n) = scaled;
            stacked.bottomRows(p) = std::sqrt(lambda) * Matrix::Identity(p, p);
            Vector<Scalar> rhs = Vector<Scalar>::Zero(n + p);
            rhs.head(n) = -res;
            const Vector<Scalar> hs = stacked.colPivHouseholderQr().solve(rhs);
            const Vector<Scalar> h = hs.cwiseQuotient(norms);

            const detail::Coords<Scalar> trial = problem.step(x, h);
            const Vector<Scalar> trial_res = problem.residuals(trial);
            const Scalar trial_sse = trial_res.squaredNorm();
            if (std::isfinite(trial_sse) && trial_sse < sse) {
                const Scalar decrease = (sse - trial_sse) / sse;
                const Vector<Scalar> dx = problem.as_vector(trial) - problem.as_vector(x);
                const Scalar xnorm = problem.as_vector(x).cwiseProduct(norms).norm();
                const Scalar rel_step = dx.cwiseProduct(norms).norm() / std::max(xnorm, std::numeric_limits<Scalar>::min());
                x = trial;
                res = trial_res;
                sse = trial_sse;
                lambda = std::max(lambda / Scalar(10), Scalar(1e-15));
                accepted = true;
                converged = sse == Scalar(0) || decrease < Scalar(options.objective_tolerance) ||
                            rel_step < Scalar(options.step_tolerance);
            } else {
                lambda *= Scalar(10);
                if (lambda > Scalar(1e16)) {
                    // No descent direction left at working precision: x is stationary.
                    converged = true;
                    break;
                }
            }
        }
    }

    result.params = detail::from_coords(x);
    if (model == FitModel::PowerLaw) result.params.beta = Scalar(0);
    result.converged = converged;
    result.iterations = iter;
    result.sse = sse;
    result.residuals = s - zm_curve(result.params, n);
    result.r_squared = r_squared(s, result.params);
    result.ci95 = confidence_intervals(s, result.params, model, options.space);
    return result;
}

/// Zipf-Mandelbrot fit with alpha, beta and gamma free.
template <typename Derived>
ZMFitResult<typename Derived::Scalar> fit(const Eigen::DenseBase<Derived>& sizes, const FitOptions& options = {}) {
    return fit_model(sizes, FitModel::ZipfMandelbrot, options);
}

/// Pure power law alpha / r^gamma (beta fixed at 0).
template <typename Derived>
ZMFitResult<typename Derived::Scalar> fit_power_law(const Eigen::DenseBase<Derived>& sizes,
                                                    const FitOptions& options = {}) {
    return fit_model(sizes, FitModel::PowerLaw, options);
}

}  // namespace hapaxcore
