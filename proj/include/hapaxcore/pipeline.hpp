#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "hapaxcore/zmfit.hpp"

namespace hapaxcore {

enum class Emit {
    HapaxTable,
    FitReport,
    CoreReport,
    PlotData,
    Stats,
    AuthorUsage,
    PerDocPercentages,
};

/// Parses "hapax-table", "fit-report", ... ; throws DomainError otherwise.
Emit parse_emit(const std::string& name);
const char* to_string(Emit emit);

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> wordlist;
    std::optional<std::size_t> ngram_n;
    std::optional<std::string> context_token;
    /// context: keep only documents where the token is a hapax.
    bool hapax_only = false;
    FitSpace fit_space = FitSpace::Linear;
    /// Empty means every emission except author-usage, plus author-usage
    /// when a context token is set.
    std::set<Emit> emit;
};

/// Output file names inside output_dir.
namespace files {
inline constexpr const char* kHapaxTable = "hapax_table.csv";
inline constexpr const char* kFitAll = "fit_all.json";
inline constexpr const char* kFitCore = "fit_core.json";
inline constexpr const char* kFitRemoved = "fit_removed.json";
inline constexpr const char* kCoreReport = "core_report.json";
inline constexpr const char* kPlotAll = "plot_all.csv";
inline constexpr const char* kPlotCore = "plot_core.csv";
inline constexpr const char* kPlotRemoved = "plot_removed.csv";
inline constexpr const char* kStats = "stats.csv";
inline constexpr const char* kAuthorUsage = "author_usage.csv";
inline constexpr const char* kPerDocument = "per_document.csv";
inline constexpr const char* kOutOfDictionary = "out_of_dictionary.csv";
inline constexpr const char* kContext = "context.csv";
std::string once_ngrams(std::size_t n);
}  // namespace files

/// Each command returns the process exit status (0 on success). Diagnostics
/// and the console summary go to `log`. On failure every file the command
/// wrote is removed again.
int cmd_analyze(const RunConfig& config, std::ostream& log);
int cmd_context(const RunConfig& config, std::ostream& log);
int cmd_flag_typos(const RunConfig& config, std::ostream& log);

}  // namespace hapaxcore
