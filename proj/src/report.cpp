#include "hapaxcore/report.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>

namespace hapaxcore {

using nlohmann::ordered_json;

std::string format_number(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("cannot format number");
    return {buf, end};
}

std::string format_human(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << csv_field(fields[i]);
    }
    out << '\n';
}

void write_hapax_table(std::ostream& out, const HapaxTable& table) {
    write_csv_row(out, {"rank", "token", "frequency"});
    for (const auto& e : table.entries) {
        write_csv_row(out, {std::to_string(e.rank), e.token, std::to_string(e.frequency)});
    }
}

void write_plot_data(std::ostream& out, const FitBranch& branch) {
    write_csv_row(out, {"rank", "observed", "fitted", "residual"});
    if (!branch.ok()) return;
    const auto& fit = *branch.fit;
    const Vector<double> fitted = zm_curve(fit.params, branch.sizes.size());
    for (Eigen::Index i = 0; i < branch.sizes.size(); ++i) {
        write_csv_row(out, {std::to_string(i + 1), format_number(branch.sizes(i)), format_number(fitted(i)),
                            format_number(fit.residuals(i))});
    }
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

void write_stats_table(std::ostream& out, const std::vector<std::pair<std::string, SummaryStats>>& columns) {
    std::vector<std::string> header{"indicator"};
    for (const auto& [name, _] : columns) header.push_back(name);
    write_csv_row(out, header);

    auto row = [&](const char* name, auto get) {
        std::vector<std::string> fields{name};
        for (const auto& [_, s] : columns) fields.push_back(get(s));
        write_csv_row(out, fields);
    };
    row("n", [](const SummaryStats& s) { return std::to_string(s.n); });
    row("mean", [](const SummaryStats& s) { return format_number(s.mean); });
    row("variance", [](const SummaryStats& s) { return format_number(s.variance); });
    row("std_dev", [](const SummaryStats& s) { return format_number(s.std_dev); });
    row("skewness", [](const SummaryStats& s) { return opt_number(s.skewness); });
    row("kurtosis_raw", [](const SummaryStats& s) { return opt_number(s.kurtosis_raw); });
    row("kurtosis_excess", [](const SummaryStats& s) { return opt_number(s.kurtosis_excess); });
    row("median", [](const SummaryStats& s) { return format_number(s.median); });
    row("max", [](const SummaryStats& s) { return format_number(s.max); });
    row("min", [](const SummaryStats& s) { return format_number(s.min); });
    row("rms", [](const SummaryStats& s) { return format_number(s.rms); });
    row("std_error", [](const SummaryStats& s) { return format_number(s.std_error); });
    row("mean_over_sd", [](const SummaryStats& s) { return opt_number(s.mean_over_sd); });
    row("pearson2", [](const SummaryStats& s) { return opt_number(s.pearson2); });
}

const char* to_string(FitSpace space) { return space == FitSpace::Log ? "log" : "linear"; }

const char* to_string(FitModel model) {
    return model == FitModel::PowerLaw ? "power_law" : "zipf_mandelbrot";
}

ordered_json fit_report(const ZMFitResultd& fit) {
    ordered_json j;
    j["model"] = to_string(fit.model);
    j["space"] = to_string(fit.space);
    j["alpha"] = fit.params.alpha;
    j["beta"] = fit.params.beta;
    j["gamma"] = fit.params.gamma;
    if (fit.ci95) {
        const auto& ci = *fit.ci95;
        j["ci95"] = {{"alpha", {ci[0].low, ci[0].high}},
                     {"beta", {ci[1].low, ci[1].high}},
                     {"gamma", {ci[2].low, ci[2].high}}};
    } else {
        j["ci95"] = nullptr;
    }
    j["r_squared"] = opt_json(fit.r_squared);
    j["n_points"] = fit.n_points;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["sse"] = fit.sse;
    return j;
}

ordered_json fit_report(const FitBranch& branch) {
    ordered_json j;
    if (!branch.ok()) {
        j["status"] = "error";
        j["error"] = branch.error;
        j["n_points"] = branch.sizes.size();
        return j;
    }
    j["status"] = "ok";
    const ordered_json fields = fit_report(*branch.fit);
    for (const auto& [key, value] : fields.items()) j[key] = value;
    return j;
}

ordered_json core_report(const CoreAnalysis& analysis) {
    const auto& core = analysis.core;
    ordered_json j;
    j["h_index"] = core.h_index;
    j["m_abs"] = opt_json(core.m_abs);
    j["m_rel"] = opt_json(core.m_rel);
    j["n_total"] = core.n_total;
    ordered_json tokens = ordered_json::array();
    for (const auto& e : core.core_tokens) {
        tokens.push_back({{"rank", e.rank}, {"token", e.token}, {"display", e.display}, {"frequency", e.frequency}});
    }
    j["core"] = std::move(tokens);
    j["fits"] = {{"all", fit_report(analysis.fits.fit_all)},
                 {"core", fit_report(analysis.fits.fit_core)},
                 {"removed", fit_report(analysis.fits.fit_removed)}};
    return j;
}

ordered_json stats_report(const SummaryStats& s) {
    ordered_json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["std_dev"] = s.std_dev;
    j["skewness"] = opt_json(s.skewness);
    j["kurtosis_raw"] = opt_json(s.kurtosis_raw);
    j["kurtosis_excess"] = opt_json(s.kurtosis_excess);
    j["median"] = s.median;
    j["max"] = s.max;
    j["min"] = s.min;
    j["rms"] = s.rms;
    j["std_error"] = s.std_error;
    j["mean_over_sd"] = opt_json(s.mean_over_sd);
    j["pearson2"] = opt_json(s.pearson2);
    return j;
}

std::vector<PlotRow> read_plot_data(std::istream& in) {
    std::vector<PlotRow> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        PlotRow row;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 4) throw InputError("plot-data row must have 4 fields: " + line);
        auto parse = [](const std::string& f, auto& out) {
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
            if (ec != std::errc{} || ptr != f.data() + f.size()) throw InputError("bad number \"" + f + "\"");
        };
        parse(fields[0], row.rank);
        parse(fields[1], row.observed);
        parse(fields[2], row.fitted);
        parse(fields[3], row.residual);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hapaxcore
