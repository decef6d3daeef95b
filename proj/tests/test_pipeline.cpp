#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hapaxcore/core.hpp"
#include "hapaxcore/pipeline.hpp"
#include "hapaxcore/report.hpp"
#include "support.hpp"

using namespace hapaxcore;
namespace fs = std::filesystem;

namespace {

std::vector<testing::DocFixture> toy_docs() {
    return {
        {"d1", "George Washington", "1789-04-30", "Fellow citizens. We owe a duty to the nation, a duty of care."},
        {"d2", "George Washington", "1790-01-08", "The duty of the people is plain. Sense prevails."},
        {"d3", "John Adams", "1797-03-04", "Common sense, common duty. The nation endures!"},
        {"d4", "John Adams", "1798-12-08", "Sense and sense alone. We give thanks."},
        {"d5", "Thomas Jefferson", "1801-03-04", "We are all republicans, we are all federalists. Sense."},
    };
}

std::vector<std::string> list_files(const fs::path& dir) {
    std::vector<std::string> names;
    if (!fs::exists(dir)) return names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field.push_back(c);
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else {
                field.push_back(c);
            }
        }
        fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

}  // namespace

TEST_CASE("analyze a toy corpus with every output") {
    testing::TempDir dir("toy");
    RunConfig config;
    config.manifest = testing::write_corpus(dir.path(), toy_docs());
    config.output_dir = dir.path() / "out";
    config.context_token = "duty";
    testing::write_file(dir.path() / "words.txt", "we\nthe\na\nduty\nsense\n");
    config.wordlist = dir.path() / "words.txt";
    config.ngram_n = 2;

    std::ostringstream log;
    REQUIRE(cmd_analyze(config, log) == 0);
    const auto files = list_files(config.output_dir);
    CHECK(files == std::vector<std::string>{"author_usage.csv", "core_report.json", "fit_all.json", "fit_core.json",
                                            "fit_removed.json", "hapax_table.csv", "once_ngrams_2.csv",
                                            "out_of_dictionary.csv", "per_document.csv", "plot_all.csv",
                                            "plot_core.csv", "plot_removed.csv", "stats.csv"});

    // sense: hapax in d2, d3, d5; duty: d2, d3 (d1 says it twice)
    const auto rows = read_csv_rows(config.output_dir / files::kHapaxTable);
    REQUIRE(rows.size() > 3);
    CHECK(rows[0] == std::vector<std::string>{"rank", "token", "frequency"});
    std::map<std::string, std::string> freq;
    for (std::size_t i = 1; i < rows.size(); ++i) freq[rows[i][1]] = rows[i][2];
    CHECK(freq.at("sense") == "3");
    CHECK(freq.at("duty") == "2");
    CHECK(freq.at("nation") == "2");
    CHECK(freq.at("the") == "2");  // d2 says "the" twice
    CHECK(freq.count("common") == 0);
    CHECK(freq.count("we") == 1);

    const auto usage = read_csv_rows(config.output_dir / files::kAuthorUsage);
    CHECK(usage[0] == std::vector<std::string>{"speaker", "pct", "hapax_documents", "total_speeches"});
    CHECK(usage[1] == std::vector<std::string>{"George Washington", "50", "1", "2"});
    CHECK(usage[2] == std::vector<std::string>{"John Adams", "50", "1", "2"});
    CHECK(usage[3] == std::vector<std::string>{"Thomas Jefferson", "0", "0", "1"});

    const auto per_doc = read_csv_rows(config.output_dir / files::kPerDocument);
    CHECK(per_doc.size() == 6);
    CHECK(per_doc[0][6] == "hapax_fraction");

    std::ifstream core_in(config.output_dir / files::kCoreReport);
    const auto core = nlohmann::json::parse(core_in);
    CHECK(core["fits"]["all"]["status"] == "ok");
    CHECK(core["h_index"].get<int>() >= 1);
    CHECK(core["core"].size() == core["h_index"].get<std::size_t>());
    CHECK(log.str().find("H = ") != std::string::npos);
}

TEST_CASE("emit selection writes exactly the requested files") {
    testing::TempDir dir("emit");
    RunConfig config;
    config.manifest = testing::write_corpus(dir.path(), toy_docs());
    config.output_dir = dir.path() / "out";
    config.emit = {Emit::Stats};
    std::ostringstream log;
    REQUIRE(cmd_analyze(config, log) == 0);
    CHECK(list_files(config.output_dir) == std::vector<std::string>{"stats.csv"});
    const auto rows = read_csv_rows(config.output_dir / files::kStats);
    CHECK(rows[0][0] == "indicator");
    CHECK(rows[1][0] == "n");
}

TEST_CASE("failures exit non-zero and leave no partial output") {
    testing::TempDir dir("fail");
    RunConfig config;
    config.manifest = testing::write_corpus(dir.path(), toy_docs());
    config.output_dir = dir.path() / "out";
    std::ostringstream log;

    SUBCASE("author usage without a token") {
        config.emit = {Emit::AuthorUsage};
        CHECK(cmd_analyze(config, log) != 0);
    }
    SUBCASE("missing document") {
        fs::remove(dir.path() / "docs" / "d3.txt");
        CHECK(cmd_analyze(config, log) != 0);
        CHECK(log.str().find("d3") != std::string::npos);
    }
    SUBCASE("missing wordlist") {
        config.wordlist = dir.path() / "nope.txt";
        CHECK(cmd_analyze(config, log) != 0);
    }
    CHECK(list_files(config.output_dir).empty());
}

TEST_CASE("plot data round-trips to the reported R^2") {
    testing::TempDir dir("roundtrip");
    RunConfig config;
    config.manifest = testing::write_corpus(dir.path(), testing::synthetic_corpus(200, 3000, 50, 400, 77));
    config.output_dir = dir.path() / "out";
    std::ostringstream log;
    REQUIRE(cmd_analyze(config, log) == 0);

    std::ifstream tin(config.output_dir / files::kHapaxTable);
    std::string line;
    std::getline(tin, line);
    std::vector<std::int64_t> frequencies;
    while (std::getline(tin, line)) frequencies.push_back(std::stoll(line.substr(line.rfind(',') + 1)));
    std::ifstream core_in(config.output_dir / files::kCoreReport);
    CHECK(nlohmann::json::parse(core_in)["h_index"].get<std::int64_t>() == testing::brute_h_index(frequencies));

    for (const auto& [plot, report] : {std::pair{files::kPlotAll, files::kFitAll},
                                       std::pair{files::kPlotRemoved, files::kFitRemoved}}) {
        std::ifstream pin(config.output_dir / plot);
        const auto rows = read_plot_data(pin);
        REQUIRE(rows.size() > 10);
        double mean = 0.0;
        for (const auto& r : rows) mean += r.observed;
        mean /= static_cast<double>(rows.size());
        double ss_res = 0.0;
        double ss_tot = 0.0;
        for (const auto& r : rows) {
            ss_res += (r.observed - r.fitted) * (r.observed - r.fitted);
            ss_tot += (r.observed - mean) * (r.observed - mean);
            CHECK(r.residual == doctest::Approx(r.observed - r.fitted).epsilon(1e-12));
        }
        std::ifstream rin(config.output_dir / report);
        const auto j = nlohmann::json::parse(rin);
        REQUIRE(j["status"] == "ok");
        CHECK(std::abs((1.0 - ss_res / ss_tot) - j["r_squared"].get<double>()) < 1e-9);
    }
}

TEST_CASE("context command") {
    testing::TempDir dir("context");
    auto docs = toy_docs();
    std::swap(docs[0], docs[2]);  // manifest order differs from date order
    RunConfig config;
    config.manifest = testing::write_corpus(dir.path(), docs);
    config.output_dir = dir.path() / "out";
    std::ostringstream log;

    SUBCASE("occurrence based, ordered by date") {
        config.context_token = "Duty";
        REQUIRE(cmd_context(config, log) == 0);
        const auto rows = read_csv_rows(config.output_dir / files::kContext);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0] == std::vector<std::string>{"document_id", "speaker", "date", "sentence_index", "sentence"});
        CHECK(rows[1][0] == "d1");
        CHECK(rows[1][4] == "We owe a duty to the nation, a duty of care.");
        CHECK(rows[2][0] == "d2");
        CHECK(rows[3][0] == "d3");
    }
    SUBCASE("hapax-only keeps documents where the token is said once") {
        config.context_token = "duty";
        config.hapax_only = true;
        REQUIRE(cmd_context(config, log) == 0);
        const auto rows = read_csv_rows(config.output_dir / files::kContext);
        REQUIRE(rows.size() == 3);
        CHECK(rows[1][0] == "d2");
        CHECK(rows[2][0] == "d3");
    }
    SUBCASE("absent token gives a header-only file") {
        config.context_token = "zebra";
        REQUIRE(cmd_context(config, log) == 0);
        CHECK(read_csv_rows(config.output_dir / files::kContext).size() == 1);
    }
    SUBCASE("token required") {
        CHECK(cmd_context(config, log) != 0);
    }
}

TEST_CASE("flag-typos command") {
    testing::TempDir dir("typos");
    RunConfig config;
    config.manifest = testing::write_corpus(dir.path(), {{"d1", "A", "2000-01-01", "Cat dog zzxq zzxq qqq."}});
    config.output_dir = dir.path() / "out";
    testing::write_file(dir.path() / "words.txt", "cat\ndog\n");
    config.wordlist = dir.path() / "words.txt";
    std::ostringstream log;
    REQUIRE(cmd_flag_typos(config, log) == 0);
    const auto first = testing::read_file(config.output_dir / files::kOutOfDictionary);
    CHECK(first == "token,count\nzzxq,2\nqqq,1\n");
    REQUIRE(cmd_flag_typos(config, log) == 0);
    CHECK(testing::read_file(config.output_dir / files::kOutOfDictionary) == first);

    testing::write_file(dir.path() / "words.txt", "cat\ndog\nzzxq\nqqq\n");
    REQUIRE(cmd_flag_typos(config, log) == 0);
    CHECK(testing::read_file(config.output_dir / files::kOutOfDictionary) == "token,count\n");

    config.wordlist.reset();
    CHECK(cmd_flag_typos(config, log) != 0);
}

TEST_CASE("parse_emit") {
    CHECK(parse_emit("plot-data") == Emit::PlotData);
    CHECK(std::string(to_string(Emit::PerDocPercentages)) == "per-doc-percentages");
    CHECK_THROWS_AS(parse_emit("plots"), DomainError);
}

TEST_CASE("csv quoting and number formatting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    for (const double x : {0.1, 1.0 / 3.0, 6.029e8, 1e-300, 35783.9769}) {
        CHECK(std::stod(format_number(x)) == x);
    }
    CHECK(format_human(35783.97688938) == "35784");
}
