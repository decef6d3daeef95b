#include "hapaxcore/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <vector>

#include "hapaxcore/core.hpp"
#include "hapaxcore/corpus.hpp"
#include "hapaxcore/hapax.hpp"
#include "hapaxcore/report.hpp"
#include "hapaxcore/stats.hpp"

namespace hapaxcore {
namespace fs = std::filesystem;

namespace {

constexpr std::pair<Emit, const char*> kEmitNames[] = {
    {Emit::HapaxTable, "hapax-table"},   {Emit::FitReport, "fit-report"},
    {Emit::CoreReport, "core-report"},   {Emit::PlotData, "plot-data"},
    {Emit::Stats, "stats"},              {Emit::AuthorUsage, "author-usage"},
    {Emit::PerDocPercentages, "per-doc-percentages"},
};

// Writes files into the output directory and remembers them so a failed
// run can remove its partial output.
class OutputTree {
public:
    explicit OutputTree(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const auto path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + path.string());
        body(out);
        out.flush();
        if (!out) throw InputError("error while writing " + path.string());
    }

    void write_json(const std::string& name, const nlohmann::ordered_json& j) {
        write(name, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    }

    void rollback() noexcept {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
        written_.clear();
    }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

std::set<Emit> effective_emits(const RunConfig& config) {
    if (!config.emit.empty()) return config.emit;
    std::set<Emit> all{Emit::HapaxTable, Emit::FitReport, Emit::CoreReport, Emit::PlotData,
                       Emit::Stats, Emit::PerDocPercentages};
    if (config.context_token) all.insert(Emit::AuthorUsage);
    return all;
}

std::vector<double> as_doubles(const std::vector<std::int64_t>& v) {
    return {v.begin(), v.end()};
}

void write_per_document(std::ostream& out, const CorpusHandle& corpus) {
    struct Row {
        const Document* doc;
        std::size_t hapaxes;
        std::optional<double> fraction;
    };
    std::vector<Row> rows;
    for (const auto& doc : corpus.documents) {
        Row row{&doc, doc_hapaxes(doc).size(), std::nullopt};
        if (!doc.tokens.empty()) row.fraction = hapax_percentage(doc);
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.fraction.has_value() != b.fraction.has_value()) return a.fraction.has_value();
        if (a.fraction && *a.fraction != *b.fraction) return *a.fraction > *b.fraction;
        return a.doc->meta.id < b.doc->meta.id;
    });
    write_csv_row(out, {"rank", "id", "speaker", "date", "tokens", "hapaxes", "hapax_fraction"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        write_csv_row(out, {std::to_string(i + 1), r.doc->meta.id, r.doc->meta.speaker,
                            format_date(r.doc->meta.date), std::to_string(r.doc->tokens.size()),
                            std::to_string(r.hapaxes), r.fraction ? format_number(*r.fraction) : ""});
    }
}

void write_token_counts(std::ostream& out, const std::vector<TokenCount>& rows) {
    write_csv_row(out, {"token", "count"});
    for (const auto& r : rows) write_csv_row(out, {r.token, std::to_string(r.count)});
}

void print_fit(std::ostream& log, const char* label, const FitBranch& branch) {
    log << "  fit " << label << ": ";
    if (!branch.ok()) {
        log << "failed (" << branch.error << ")\n";
        return;
    }
    const auto& f = *branch.fit;
    log << "alpha=" << format_human(f.params.alpha) << " beta=" << format_human(f.params.beta)
        << " gamma=" << format_human(f.params.gamma)
        << " R2=" << (f.r_squared ? format_human(*f.r_squared) : std::string("undefined"))
        << " n=" << f.n_points << (f.converged ? "" : " (not converged)") << '\n';
}

int guarded(OutputTree* tree, std::ostream& log, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        if (tree) tree->rollback();
        return 1;
    }
}

}  // namespace

std::string files::once_ngrams(std::size_t n) { return "once_ngrams_" + std::to_string(n) + ".csv"; }

Emit parse_emit(const std::string& name) {
    for (const auto& [emit, text] : kEmitNames) {
        if (name == text) return emit;
    }
    throw DomainError("unknown emit kind \"" + name + "\"");
}

const char* to_string(Emit emit) {
    for (const auto& [e, text] : kEmitNames) {
        if (e == emit) return text;
    }
    return "?";
}

int cmd_analyze(const RunConfig& config, std::ostream& log) {
    std::optional<OutputTree> tree;
    return guarded(nullptr, log, [&] {
        const auto emits = effective_emits(config);
        if (emits.contains(Emit::AuthorUsage) && !config.context_token) {
            throw DomainError("author-usage needs --context-token");
        }
        const auto corpus = ingest(config.manifest);
        const auto table = aggregate(corpus);
        tree.emplace(config.output_dir);

        const int status = guarded(&*tree, log, [&] {
            FitOptions options;
            options.space = config.fit_space;
            const bool need_fits = emits.contains(Emit::FitReport) || emits.contains(Emit::CoreReport) ||
                                   emits.contains(Emit::PlotData);
            std::optional<CoreAnalysis> analysis;
            if (need_fits) analysis = three_way_fit(table, options);

            if (emits.contains(Emit::HapaxTable)) {
                tree->write(files::kHapaxTable, [&](std::ostream& out) { write_hapax_table(out, table); });
            }
            if (emits.contains(Emit::FitReport)) {
                tree->write_json(files::kFitAll, fit_report(analysis->fits.fit_all));
                tree->write_json(files::kFitCore, fit_report(analysis->fits.fit_core));
                tree->write_json(files::kFitRemoved, fit_report(analysis->fits.fit_removed));
            }
            if (emits.contains(Emit::CoreReport)) tree->write_json(files::kCoreReport, core_report(*analysis));
            if (emits.contains(Emit::PlotData)) {
                tree->write(files::kPlotAll, [&](std::ostream& out) { write_plot_data(out, analysis->fits.fit_all); });
                tree->write(files::kPlotCore, [&](std::ostream& out) { write_plot_data(out, analysis->fits.fit_core); });
                tree->write(files::kPlotRemoved,
                            [&](std::ostream& out) { write_plot_data(out, analysis->fits.fit_removed); });
            }
            if (emits.contains(Emit::Stats)) {
                const auto sizes = table.sizes();
                std::vector<std::pair<std::string, SummaryStats>> columns;
                columns.emplace_back("whole_corpus", summary_stats(as_doubles(sizes)));
                const auto core = extract_core(table);
                if (core.h_index >= 2) {
                    const auto core_sizes = as_doubles(std::vector<std::int64_t>(
                        sizes.begin(), sizes.begin() + core.h_index));
                    columns.emplace_back("core", summary_stats(core_sizes));
                }
                tree->write(files::kStats, [&](std::ostream& out) { write_stats_table(out, columns); });
            }
            if (emits.contains(Emit::AuthorUsage)) {
                const auto rows = author_usage(corpus, *config.context_token);
                tree->write(files::kAuthorUsage, [&](std::ostream& out) {
                    write_csv_row(out, {"speaker", "pct", "hapax_documents", "total_speeches"});
                    for (const auto& r : rows) {
                        write_csv_row(out, {r.speaker, format_number(r.pct), std::to_string(r.hapax_documents),
                                            std::to_string(r.total_speeches)});
                    }
                });
            }
            if (emits.contains(Emit::PerDocPercentages)) {
                tree->write(files::kPerDocument, [&](std::ostream& out) { write_per_document(out, corpus); });
            }
            if (config.wordlist) {
                const auto flagged = flag_out_of_dictionary(corpus, *config.wordlist);
                tree->write(files::kOutOfDictionary, [&](std::ostream& out) { write_token_counts(out, flagged); });
            }
            if (config.ngram_n) {
                const auto grams = aggregate_once_ngrams(corpus, *config.ngram_n);
                tree->write(files::once_ngrams(*config.ngram_n), [&](std::ostream& out) {
                    write_csv_row(out, {"rank", "ngram", "frequency"});
                    for (const auto& e : grams.entries) {
                        write_csv_row(out, {std::to_string(e.rank), e.token, std::to_string(e.frequency)});
                    }
                });
            }

            log << "documents: " << corpus.documents.size() << ", hapax table entries: " << table.total_tokens()
                << '\n';
            if (analysis) {
                const auto& core = analysis->core;
                log << "  H = " << core.h_index;
                if (core.m_abs) log << ", M_A = " << format_human(*core.m_abs);
                if (core.m_rel) log << ", M_R = " << format_human(*core.m_rel);
                log << '\n';
                print_fit(log, "(a) all", analysis->fits.fit_all);
                print_fit(log, "(b) core", analysis->fits.fit_core);
                print_fit(log, "(c) removed", analysis->fits.fit_removed);
            }
        });
        if (status != 0) throw Error("analysis aborted; partial output removed");
    });
}

int cmd_context(const RunConfig& config, std::ostream& log) {
    return guarded(nullptr, log, [&] {
        if (!config.context_token) throw DomainError("context needs --token");
        const auto corpus = ingest(config.manifest);
        const auto key = fold_case(*config.context_token);
        const auto hits = context_search(corpus, key);

        struct Row {
            const Document* doc;
            std::size_t doc_index;
            const ContextHit* hit;
        };
        std::vector<Row> rows;
        for (const auto& hit : hits) {
            for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
                const auto& doc = corpus.documents[d];
                if (doc.meta.id != hit.document_id) continue;
                if (config.hapax_only && !doc_hapaxes(doc).contains(key)) break;
                rows.push_back({&doc, d, &hit});
                break;
            }
        }
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.doc->meta.date != b.doc->meta.date) return a.doc->meta.date < b.doc->meta.date;
            if (a.doc_index != b.doc_index) return a.doc_index < b.doc_index;
            return a.hit->sentence_index < b.hit->sentence_index;
        });

        OutputTree tree(config.output_dir);
        const int status = guarded(&tree, log, [&] {
            tree.write(files::kContext, [&](std::ostream& out) {
                write_csv_row(out, {"document_id", "speaker", "date", "sentence_index", "sentence"});
                for (const auto& r : rows) {
                    write_csv_row(out, {r.doc->meta.id, r.doc->meta.speaker, format_date(r.doc->meta.date),
                                        std::to_string(r.hit->sentence_index), r.hit->sentence});
                }
            });
        });
        if (status != 0) throw Error("context search aborted");
        log << rows.size() << " sentence(s) contain \"" << key << "\"\n";
    });
}

int cmd_flag_typos(const RunConfig& config, std::ostream& log) {
    return guarded(nullptr, log, [&] {
        if (!config.wordlist) throw DomainError("flag-typos needs --wordlist");
        const auto corpus = ingest(config.manifest);
        const auto flagged = flag_out_of_dictionary(corpus, *config.wordlist);
        OutputTree tree(config.output_dir);
        const int status = guarded(&tree, log, [&] {
            tree.write(files::kOutOfDictionary, [&](std::ostream& out) { write_token_counts(out, flagged); });
        });
        if (status != 0) throw Error("flag-typos aborted");
        log << flagged.size() << " out-of-dictionary token(s)\n";
    });
}

}  // namespace hapaxcore
