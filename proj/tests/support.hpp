#pragma once

// Shared test fixtures and independent oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "hapaxcore/corpus.hpp"

namespace testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("hapaxcore_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct DocFixture {
    std::string id;
    std::string speaker;
    std::string date;
    std::string text;
};

inline std::string manifest_line(const DocFixture& d, const std::string& path) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["title"] = "Speech " + d.id;
    j["speaker"] = d.speaker;
    j["date"] = d.date;
    j["path"] = path;
    return j.dump();
}

/// Writes texts under dir/docs and a manifest at dir/manifest.jsonl.
inline fs::path write_corpus(const fs::path& dir, const std::vector<DocFixture>& docs) {
    std::string manifest;
    for (const auto& d : docs) {
        const std::string rel = "docs/" + d.id + ".txt";
        write_file(dir / rel, d.text);
        manifest += manifest_line(d, rel) + "\n";
    }
    write_file(dir / "manifest.jsonl", manifest);
    return dir / "manifest.jsonl";
}

/// Letters-only word for an index: 0 -> "a", 25 -> "z", 26 -> "ba", ...
inline std::string word_for(std::size_t index) {
    std::string w;
    do {
        w.push_back(static_cast<char>('a' + index % 26));
        index /= 26;
    } while (index > 0);
    return w;
}

/// Deterministic synthetic corpus: Zipf-distributed vocabulary, a handful of
/// speakers, sentences of 5-15 words.
inline std::vector<DocFixture> synthetic_corpus(std::size_t n_docs, std::size_t vocab, std::size_t min_tokens,
                                             std::size_t max_tokens, std::uint32_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> weights(vocab);
    for (std::size_t i = 0; i < vocab; ++i) weights[i] = 1.0 / std::pow(static_cast<double>(i) + 2.7, 1.1);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::uniform_int_distribution<std::size_t> length(min_tokens, max_tokens);
    std::uniform_int_distribution<int> sentence_len(5, 15);
    const std::vector<std::string> speakers{"Ada Lovelace", "Charles Babbage", "Grace Hopper", "Alan Turing",
                                            "Edsger Dijkstra"};
    std::vector<DocFixture> docs;
    for (std::size_t d = 0; d < n_docs; ++d) {
        DocFixture doc;
        doc.id = "doc" + std::to_string(d);
        doc.speaker = speakers[d % speakers.size()];
        char date[16];
        std::snprintf(date, sizeof date, "%04d-%02d-%02d", 1800 + static_cast<int>(d % 200),
                      1 + static_cast<int>(d % 12), 1 + static_cast<int>(d % 28));
        doc.date = date;
        const std::size_t n = length(rng);
        int until_stop = sentence_len(rng);
        bool capital = true;
        for (std::size_t t = 0; t < n; ++t) {
            std::string w = word_for(pick(rng));
            if (capital) w[0] = static_cast<char>(w[0] - 'a' + 'A');
            capital = false;
            doc.text += w;
            if (--until_stop == 0 || t + 1 == n) {
                doc.text += ". ";
                until_stop = sentence_len(rng);
                capital = true;
            } else {
                doc.text += (t % 7 == 3) ? ", " : " ";
            }
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

// ---- oracles -------------------------------------------------------------

/// O(n^2) Hirsch index: try every h and check the count of values >= h.
inline std::int64_t brute_h_index(const std::vector<std::int64_t>& values) {
    std::int64_t best = 0;
    for (std::int64_t h = 1; h <= static_cast<std::int64_t>(values.size()); ++h) {
        std::int64_t at_least = 0;
        for (auto v : values) at_least += v >= h ? 1 : 0;
        if (at_least >= h) best = h;
    }
    return best;
}

/// Token -> number of documents where it occurs exactly once, by linear recount.
inline std::map<std::string, std::int64_t> brute_hapax_frequencies(
    const std::vector<std::vector<std::string>>& docs) {
    std::set<std::string> vocabulary;
    for (const auto& d : docs) vocabulary.insert(d.begin(), d.end());
    std::map<std::string, std::int64_t> out;
    for (const auto& w : vocabulary) {
        std::int64_t f = 0;
        for (const auto& d : docs) {
            std::int64_t count = 0;
            for (const auto& t : d) count += t == w ? 1 : 0;
            f += count == 1 ? 1 : 0;
        }
        if (f > 0) out[w] = f;
    }
    return out;
}

/// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50) {
    auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    };
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid);
            const double rm = 0.5 * (mid + hi);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = simpson(lo, mid, flo, flm, fmid);
            const double right = simpson(mid, hi, fmid, frm, fhi);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
                return left + right + (left + right - whole) / 15.0;
            }
            return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
        };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

}  // namespace testing
