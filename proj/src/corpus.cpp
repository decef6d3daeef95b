#include "hapaxcore/corpus.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "hapaxcore/error.hpp"

namespace hapaxcore {
namespace {

constexpr UChar32 kApostrophe = 0x27;
constexpr UChar32 kRightSingleQuote = 0x2019;

struct CodePoint {
    UChar32 value;
    std::size_t begin;
    std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
    std::vector<CodePoint> out;
    out.reserve(text.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            throw InputError("invalid UTF-8 at byte offset " + std::to_string(start));
        }
        out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
    }
    return out;
}

void append_utf8(std::string& out, UChar32 c) {
    std::array<uint8_t, U8_MAX_LENGTH> buf{};
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf.data(), n, c);
    out.append(reinterpret_cast<const char*>(buf.data()), static_cast<std::size_t>(n));
}

bool is_letter(UChar32 c) { return u_isalpha(c) != 0; }

bool is_mark(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }

bool is_apostrophe(UChar32 c) { return c == kApostrophe || c == kRightSingleQuote; }

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\n\r\f\v";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Closing quotes and brackets that may trail a sentence terminator.
std::size_t closer_length(std::string_view rest) {
    static constexpr std::array<std::string_view, 8> closers = {
        "\"", "'", ")", "]", "\xE2\x80\x9D", "\xE2\x80\x99", "\xC2\xBB", "}"};
    for (auto c : closers) {
        if (rest.starts_with(c)) return c.size();
    }
    return 0;
}

std::chrono::year_month_day parse_date(const std::string& s) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char tail = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
        throw InputError("date must be yyyy-mm-dd, got \"" + s + "\"");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) throw InputError("invalid calendar date \"" + s + "\"");
    return ymd;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

}  // namespace

std::string format_date(const std::chrono::year_month_day& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::vector<DocumentMeta> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest " + path.string());

    std::vector<DocumentMeta> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto where = path.string() + ":" + std::to_string(lineno) + ": ";
        try {
            const auto record = nlohmann::json::parse(line);
            if (!record.is_object()) throw InputError("record is not an object");
            auto field = [&](const char* name) -> std::string {
                const auto it = record.find(name);
                if (it == record.end() || !it->is_string()) {
                    throw InputError(std::string("missing string field \"") + name + "\"");
                }
                return it->get<std::string>();
            };
            DocumentMeta meta{field("id"), field("title"), field("speaker"),
                              parse_date(field("date")), field("path")};
            if (meta.id.empty()) throw InputError("empty id");
            if (!seen.insert(meta.id).second) throw InputError("duplicate id \"" + meta.id + "\"");
            out.push_back(std::move(meta));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(where + e.what());
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
    }
    return out;
}

std::vector<Token> tokenize_with_surface(std::string_view text) {
    const auto cps = decode(text);
    std::vector<Token> out;
    Token current;
    auto flush = [&] {
        if (!current.canonical.empty()) out.push_back(std::move(current));
        current = {};
    };
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const UChar32 c = cps[i].value;
        const bool in_token = !current.canonical.empty();
        if (is_letter(c) || (in_token && is_mark(c))) {
            append_utf8(current.canonical, u_tolower(c));
            current.surface.append(text.substr(cps[i].begin, cps[i].end - cps[i].begin));
        } else if (in_token && is_apostrophe(c) && i + 1 < cps.size() &&
                   is_letter(cps[i + 1].value)) {
            current.canonical.push_back('\'');
            current.surface.push_back('\'');
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    auto tokens = tokenize_with_surface(text);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (auto& t : tokens) out.push_back(std::move(t.canonical));
    return out;
}

std::string fold_case(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const auto& cp : decode(text)) append_utf8(out, u_tolower(cp.value));
    return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    auto emit = [&](std::string_view segment) {
        const auto t = trim(segment);
        if (!t.empty()) out.emplace_back(t);
    };
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t end = i + 1;
        while (end < text.size()) {
            const auto n = closer_length(text.substr(end));
            if (n == 0) break;
            end += n;
        }
        if (end == text.size() || is_ascii_space(text[end])) {
            emit(text.substr(start, end - start));
            start = end;
        }
        i = end;
    }
    emit(text.substr(start));
    return out;
}

Document make_document(DocumentMeta meta, std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    Document doc;
    doc.meta = std::move(meta);
    for (auto& t : tokenize_with_surface(text)) {
        doc.tokens.push_back(std::move(t.canonical));
        doc.surfaces.push_back(std::move(t.surface));
    }
    doc.sentences = split_sentences(text);
    return doc;
}

CorpusHandle ingest(const std::filesystem::path& manifest) {
    CorpusHandle corpus;
    corpus.manifest_path = manifest;
    const auto base = manifest.parent_path();
    for (auto& meta : load_manifest(manifest)) {
        const auto id = meta.id;
        try {
            const auto text = read_file(base / meta.path);
            corpus.documents.push_back(make_document(std::move(meta), text));
        } catch (const InputError& e) {
            throw InputError("document \"" + id + "\": " + e.what());
        }
    }
    if (corpus.documents.empty()) throw InputError("manifest " + manifest.string() + " lists no documents");
    return corpus;
}

}  // namespace hapaxcore
