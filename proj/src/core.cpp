#include "hapaxcore/core.hpp"

namespace hapaxcore {

std::int64_t h_index(std::span<const std::int64_t> sorted_sizes) {
    for (std::size_t i = 1; i < sorted_sizes.size(); ++i) {
        if (sorted_sizes[i] > sorted_sizes[i - 1]) {
            throw DomainError("h_index input must be sorted in non-increasing order");
        }
    }
    std::int64_t h = 0;
    while (h < static_cast<std::int64_t>(sorted_sizes.size()) &&
           sorted_sizes[static_cast<std::size_t>(h)] >= h + 1) {
        ++h;
    }
    return h;
}

CoreResult extract_core(const HapaxTable& table) {
    CoreResult core;
    const auto sizes = table.sizes();
    core.h_index = h_index(sizes);
    core.n_total = static_cast<std::int64_t>(table.total_tokens());
    core.core_tokens.assign(table.entries.begin(), table.entries.begin() + core.h_index);
    return core;
}

namespace {

FitBranch run_branch(Vector<double> sizes, const FitOptions& options) {
    FitBranch branch;
    try {
        branch.fit = fit(sizes, options);
    } catch (const Error& e) {
        branch.error = e.what();
    }
    branch.sizes = std::move(sizes);
    return branch;
}

}  // namespace

CoreAnalysis three_way_fit(const HapaxTable& table, const FitOptions& options) {
    CoreAnalysis out;
    out.core = extract_core(table);
    const Vector<double> all = to_sizes(table.sizes());
    const Eigen::Index h = out.core.h_index;

    out.fits.fit_all = run_branch(all, options);
    out.fits.fit_core = run_branch(all.head(h), options);
    out.fits.fit_removed = run_branch(all.tail(all.size() - h), options);

    if (out.fits.fit_all.ok() && h >= 1) {
        const auto& params = out.fits.fit_all.fit->params;
        out.core.m_abs = measure_abs(params, static_cast<double>(h));
        if (h < out.core.n_total) {
            out.core.m_rel =
                measure_rel(params, static_cast<double>(h), static_cast<double>(out.core.n_total));
        }
    }
    return out;
}

}  // namespace hapaxcore
