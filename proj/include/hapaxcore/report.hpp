#pragma once

// Serialisation of tables (CSV with a header row) and reports (JSON).
// Machine-readable numbers use the shortest representation that round-trips.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hapaxcore/core.hpp"
#include "hapaxcore/hapax.hpp"
#include "hapaxcore/stats.hpp"
#include "hapaxcore/zmfit.hpp"

namespace hapaxcore {

/// Shortest decimal that parses back to the same double.
std::string format_number(double value);

/// 6 significant digits, for console summaries.
std::string format_human(double value);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

void write_hapax_table(std::ostream& out, const HapaxTable& table);

/// Columns rank, observed, fitted, residual; header only when the fit failed.
void write_plot_data(std::ostream& out, const FitBranch& branch);

/// One row per indicator, one column per named stats block. Undefined
/// values are written as empty fields.
void write_stats_table(std::ostream& out, const std::vector<std::pair<std::string, SummaryStats>>& columns);

const char* to_string(FitSpace space);
const char* to_string(FitModel model);

nlohmann::ordered_json fit_report(const ZMFitResultd& fit);
/// {"status": "ok", ...fit_report} or {"status": "error", "error": ...}.
nlohmann::ordered_json fit_report(const FitBranch& branch);
nlohmann::ordered_json core_report(const CoreAnalysis& analysis);
nlohmann::ordered_json stats_report(const SummaryStats& stats);

/// Reads back a plot-data CSV (rank, observed, fitted, residual).
struct PlotRow {
    long rank = 0;
    double observed = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
};
std::vector<PlotRow> read_plot_data(std::istream& in);

}  // namespace hapaxcore
