#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "hapaxcore/corpus.hpp"

namespace hapaxcore {

struct HapaxEntry {
    std::string token;    ///< canonical form
    std::string display;  ///< most frequent surface form across the corpus
    std::int64_t frequency = 0;  ///< number of documents where token is a hapax
    std::int64_t rank = 0;

    friend bool operator==(const HapaxEntry&, const HapaxEntry&) = default;
};

/// Cross-corpus hapax list. Entries are ordered by frequency descending, then
/// token ascending (bytewise); ranks run 1..N without gaps.
struct HapaxTable {
    std::vector<HapaxEntry> entries;

    std::size_t total_tokens() const { return entries.size(); }
    /// Frequencies in rank order.
    std::vector<std::int64_t> sizes() const;
};

struct AuthorUsageRow {
    std::string speaker;
    double pct = 0.0;                 ///< 100 * hapax_documents / total_speeches
    std::int64_t hapax_documents = 0;
    std::int64_t total_speeches = 0;
};

struct ContextHit {
    std::string document_id;
    std::size_t sentence_index = 0;
    std::string sentence;
};

struct TokenCount {
    std::string token;
    std::int64_t count = 0;

    friend bool operator==(const TokenCount&, const TokenCount&) = default;
};

using NGram = std::vector<std::string>;

/// Tokens occurring exactly once in the document.
std::set<std::string> doc_hapaxes(const Document& doc);

/// Builds a ranked table from raw (token, frequency) pairs. Duplicated tokens
/// are rejected; frequencies must be >= 1.
HapaxTable make_table(std::vector<HapaxEntry> entries);

HapaxTable aggregate(const CorpusHandle& corpus);

/// Hapaxes over tokens, i.e. the morphological productivity of the document.
/// Throws DomainError for an empty document.
double hapax_percentage(const Document& doc);

/// One row per speaker, by pct descending then speaker ascending.
std::vector<AuthorUsageRow> author_usage(const CorpusHandle& corpus, const std::string& token);

/// Every sentence containing the token, in document then sentence order.
/// The token is case-folded before matching.
std::vector<ContextHit> context_search(const CorpusHandle& corpus, const std::string& token);

/// Contiguous n-grams occurring exactly once. n = 1 reduces to doc_hapaxes.
/// Throws DomainError for n = 0.
std::set<NGram> once_ngrams(const Document& doc, std::size_t n);

/// Cross-corpus table of n-grams said once per document, ranked like
/// HapaxTable; tokens are n-grams joined by single spaces.
HapaxTable aggregate_once_ngrams(const CorpusHandle& corpus, std::size_t n);

/// Reads a newline-delimited lexicon. Lines are trimmed and case-folded;
/// blank lines are skipped. Throws InputError if the file cannot be opened.
std::set<std::string> load_wordlist(const std::filesystem::path& path);

/// Corpus tokens missing from the lexicon with their total occurrence
/// counts, by count descending then token ascending.
std::vector<TokenCount> flag_out_of_dictionary(const CorpusHandle& corpus,
                                               const std::set<std::string>& lexicon);
std::vector<TokenCount> flag_out_of_dictionary(const CorpusHandle& corpus,
                                               const std::filesystem::path& wordlist);

}  // namespace hapaxcore
