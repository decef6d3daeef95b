// Command-line front end: analyze, context, flag-typos.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hapaxcore/error.hpp"
#include "hapaxcore/pipeline.hpp"

namespace {

void add_common(CLI::App* cmd, hapaxcore::RunConfig& config) {
    cmd->add_option("-m,--manifest", config.manifest, "JSON Lines manifest (id, title, speaker, date, path)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--output-dir", config.output_dir, "Directory for output files (created if absent)")
        ->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hapax legomena rank-size analysis"};
    app.require_subcommand(1);

    hapaxcore::RunConfig config;
    std::vector<std::string> emit_names;
    std::string fit_space = "linear";
    std::size_t ngram_n = 0;
    std::string wordlist;
    std::string token;

    auto* analyze = app.add_subcommand("analyze", "Hapax table, Zipf-Mandelbrot fits, core of the hapaxes");
    add_common(analyze, config);
    analyze->add_option("--emit", emit_names,
                        "Outputs to write: hapax-table, fit-report, core-report, plot-data, stats, "
                        "author-usage, per-doc-percentages (default: all applicable)")
        ->delimiter(',');
    analyze->add_option("--fit-space", fit_space, "Least-squares space")
        ->check(CLI::IsMember({"linear", "log"}));
    analyze->add_option("--wordlist", wordlist, "Lexicon for out-of-dictionary flagging")->check(CLI::ExistingFile);
    analyze->add_option("--ngram-n", ngram_n, "Also tabulate n-grams said once per document")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--context-token", token, "Token for the author-usage table");

    auto* context = app.add_subcommand("context", "Sentences containing a token");
    add_common(context, config);
    context->add_option("-t,--token", token, "Token to look up")->required();
    context->add_flag("--hapax-only", config.hapax_only, "Only documents where the token is a hapax");

    auto* typos = app.add_subcommand("flag-typos", "Tokens missing from a lexicon");
    add_common(typos, config);
    typos->add_option("--wordlist", wordlist, "Newline-delimited lexicon")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& name : emit_names) config.emit.insert(hapaxcore::parse_emit(name));
    } catch (const hapaxcore::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    config.fit_space = fit_space == "log" ? hapaxcore::FitSpace::Log : hapaxcore::FitSpace::Linear;
    if (ngram_n > 0) config.ngram_n = ngram_n;
    if (!wordlist.empty()) config.wordlist = wordlist;
    if (!token.empty()) config.context_token = token;

    if (analyze->parsed()) return hapaxcore::cmd_analyze(config, std::cout);
    if (context->parsed()) return hapaxcore::cmd_context(config, std::cout);
    return hapaxcore::cmd_flag_typos(config, std::cout);
}
