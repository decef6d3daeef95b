#include "hapaxcore/hapax.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "hapaxcore/error.hpp"

namespace hapaxcore {
namespace {

std::string join(const NGram& gram) {
    std::string out;
    for (const auto& t : gram) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

void sort_counts(std::vector<TokenCount>& rows) {
    std::sort(rows.begin(), rows.end(), [](const TokenCount& a, const TokenCount& b) {
        return a.count != b.count ? a.count > b.count : a.token < b.token;
    });
}

}  // namespace

std::vector<std::int64_t> HapaxTable::sizes() const {
    std::vector<std::int64_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.frequency);
    return out;
}

std::set<std::string> doc_hapaxes(const Document& doc) {
    std::unordered_map<std::string_view, int> counts;
    for (const auto& t : doc.tokens) ++counts[t];
    std::set<std::string> out;
    for (const auto& [token, n] : counts) {
        if (n == 1) out.emplace(token);
    }
    return out;
}

HapaxTable make_table(std::vector<HapaxEntry> entries) {
    std::sort(entries.begin(), entries.end(), [](const HapaxEntry& a, const HapaxEntry& b) {
        return a.frequency != b.frequency ? a.frequency > b.frequency : a.token < b.token;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].frequency < 1) {
            throw DomainError("hapax table frequency must be >= 1 for \"" + entries[i].token + "\"");
        }
        if (i > 0 && entries[i].token == entries[i - 1].token) {
            throw DomainError("duplicate token \"" + entries[i].token + "\" in hapax table");
        }
        entries[i].rank = static_cast<std::int64_t>(i) + 1;
        if (entries[i].display.empty()) entries[i].display = entries[i].token;
    }
    return HapaxTable{std::move(entries)};
}

HapaxTable aggregate(const CorpusHandle& corpus) {
    std::unordered_map<std::string, std::int64_t> frequency;
    std::unordered_map<std::string, std::map<std::string, std::int64_t>> surfaces;
    for (const auto& doc : corpus.documents) {
        for (const auto& h : doc_hapaxes(doc)) ++frequency[h];
    }
    for (const auto& doc : corpus.documents) {
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (frequency.contains(doc.tokens[i])) {
                const auto& surface = i < doc.surfaces.size() ? doc.surfaces[i] : doc.tokens[i];
                ++surfaces[doc.tokens[i]][surface];
            }
        }
    }

    std::vector<HapaxEntry> entries;
    entries.reserve(frequency.size());
    for (auto& [token, f] : frequency) {
        // std::map iterates surfaces in ascending order, so the first maximum wins ties.
        std::string display;
        std::int64_t best = 0;
        for (const auto& [surface, n] : surfaces[token]) {
            if (n > best) {
                best = n;
                display = surface;
            }
        }
        entries.push_back({token, display, f, 0});
    }
    return make_table(std::move(entries));
}

double hapax_percentage(const Document& doc) {
    if (doc.tokens.empty()) {
        throw DomainError("hapax percentage undefined for empty document \"" + doc.meta.id + "\"");
    }
    return static_cast<double>(doc_hapaxes(doc).size()) / static_cast<double>(doc.tokens.size());
}

std::vector<AuthorUsageRow> author_usage(const CorpusHandle& corpus, const std::string& token) {
    const auto key = fold_case(token);
    std::map<std::string, AuthorUsageRow> by_speaker;
    for (const auto& doc : corpus.documents) {
        auto& row = by_speaker[doc.meta.speaker];
        row.speaker = doc.meta.speaker;
        ++row.total_speeches;
        if (doc_hapaxes(doc).contains(key)) ++row.hapax_documents;
    }
    std::vector<AuthorUsageRow> rows;
    rows.reserve(by_speaker.size());
    for (auto& [speaker, row] : by_speaker) {
        row.pct = 100.0 * static_cast<double>(row.hapax_documents) /
                  static_cast<double>(row.total_speeches);
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const AuthorUsageRow& a, const AuthorUsageRow& b) {
        return a.pct > b.pct;
    });
    return rows;
}

std::vector<ContextHit> context_search(const CorpusHandle& corpus, const std::string& token) {
    const auto key = fold_case(token);
    std::vector<ContextHit> hits;
    for (const auto& doc : corpus.documents) {
        for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
            const auto tokens = tokenize(doc.sentences[s]);
            if (std::find(tokens.begin(), tokens.end(), key) != tokens.end()) {
                hits.push_back({doc.meta.id, s, doc.sentences[s]});
            }
        }
    }
    return hits;
}

std::set<NGram> once_ngrams(const Document& doc, std::size_t n) {
    if (n == 0) throw DomainError("n-gram length must be >= 1");
    std::set<NGram> out;
    if (doc.tokens.size() < n) return out;
    std::map<NGram, int> counts;
    for (std::size_t i = 0; i + n <= doc.tokens.size(); ++i) {
        ++counts[NGram(doc.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                       doc.tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
    for (auto& [gram, c] : counts) {
        if (c == 1) out.insert(gram);
    }
    return out;
}

HapaxTable aggregate_once_ngrams(const CorpusHandle& corpus, std::size_t n) {
    std::unordered_map<std::string, std::int64_t> frequency;
    for (const auto& doc : corpus.documents) {
        for (const auto& gram : once_ngrams(doc, n)) ++frequency[join(gram)];
    }
    std::vector<HapaxEntry> entries;
    entries.reserve(frequency.size());
    for (auto& [token, f] : frequency) entries.push_back({token, token, f, 0});
    return make_table(std::move(entries));
}

std::set<std::string> load_wordlist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open wordlist " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        words.insert(fold_case(std::string_view(line).substr(first, last - first + 1)));
    }
    return words;
}

std::vector<TokenCount> flag_out_of_dictionary(const CorpusHandle& corpus,
                                               const std::set<std::string>& lexicon) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& doc : corpus.documents) {
        for (const auto& t : doc.tokens) {
            if (!lexicon.contains(t)) ++counts[t];
        }
    }
    std::vector<TokenCount> rows;
    rows.reserve(counts.size());
    for (auto& [token, c] : counts) rows.push_back({token, c});
    sort_counts(rows);
    return rows;
}

std::vector<TokenCount> flag_out_of_dictionary(const CorpusHandle& corpus,
                                               const std::filesystem::path& wordlist) {
    return flag_out_of_dictionary(corpus, load_wordlist(wordlist));
}

}  // namespace hapaxcore
