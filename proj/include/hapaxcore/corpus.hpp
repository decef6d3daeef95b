#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hapaxcore {

struct DocumentMeta {
    std::string id;
    std::string title;
    std::string speaker;
    std::chrono::year_month_day date;
    /// Path as written in the manifest, relative to the manifest's directory.
    std::string path;
};

/// One token occurrence: the case-folded form used for counting and the
/// surface form as it appeared in the text.
struct Token {
    std::string canonical;
    std::string surface;

    friend bool operator==(const Token&, const Token&) = default;
};

struct Document {
    DocumentMeta meta;
    std::vector<std::string> tokens;    ///< canonical forms, in text order
    std::vector<std::string> surfaces;  ///< surface forms, parallel to tokens
    std::vector<std::string> sentences;
};

struct CorpusHandle {
    std::vector<Document> documents;
    std::filesystem::path manifest_path;
};

/// Parses a JSON Lines manifest. Each non-blank line is an object with the
/// string fields "id", "title", "speaker", "date" (yyyy-mm-dd) and "path".
/// Throws InputError on a missing file, a malformed line (the message names
/// the line number) or a duplicate id.
std::vector<DocumentMeta> load_manifest(const std::filesystem::path& path);

/// Token rule: maximal runs of Unicode letters (combining marks following a
/// letter stay attached), case-folded to lower case. An apostrophe (U+0027 or
/// U+2019) between two letters stays inside the token and is normalised to
/// U+0027. Everything else, digits and hyphens included, separates tokens.
/// Throws InputError on invalid UTF-8.
std::vector<Token> tokenize_with_surface(std::string_view text);

/// Canonical forms only; see tokenize_with_surface.
std::vector<std::string> tokenize(std::string_view text);

/// Lower-cases every code point (simple case mapping).
std::string fold_case(std::string_view text);

/// Splits after '.', '!' or '?' (optionally followed by closing quotes or
/// brackets) when the next character is whitespace or the end of the text.
/// Returned sentences are trimmed; whitespace-only segments are dropped.
/// Abbreviations such as "Mr." are split like any other full stop.
std::vector<std::string> split_sentences(std::string_view text);

/// Tokenizes one document's text.
Document make_document(DocumentMeta meta, std::string_view text);

/// Loads the manifest and every referenced document. Errors about a document
/// carry its id.
CorpusHandle ingest(const std::filesystem::path& manifest);

/// yyyy-mm-dd
std::string format_date(const std::chrono::year_month_day& date);

}  // namespace hapaxcore
