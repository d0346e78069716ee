#include "framescore/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "framescore/error.hpp"
#include "framescore/unicode.hpp"

namespace framescore {

namespace {

bool is_handle_prefix(char32_t cp) { return cp == '@' || cp == '#'; }

// Removes URL substrings, replacing each with a space.
std::string strip_urls(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto http = text.find("http://", pos);
        const auto https = text.find("https://", pos);
        const auto hit = std::min(http, https);
        if (hit == std::string_view::npos) {
            out.append(text.substr(pos));
            break;
        }
        out.append(text.substr(pos, hit - pos));
        out.push_back(' ');
        std::size_t end = hit;
        while (end < text.size()) {
            std::size_t next = end;
            if (unicode::is_space(unicode::decode(text, next))) break;
            end = next;
        }
        pos = end;
    }
    return out;
}

std::string encode(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) unicode::append_utf8(out, cps[i]);
    return out;
}

// Trims one whitespace-delimited chunk into a token; empty result means drop.
std::string clean_token(const std::vector<char32_t>& cps) {
    std::size_t begin = 0;
    std::size_t end = cps.size();
    while (begin < end && unicode::is_punctuation(cps[begin]) && !is_handle_prefix(cps[begin]))
        ++begin;
    if (begin == end) return {};
    const bool handle = is_handle_prefix(cps[begin]);
    const std::size_t body = handle ? begin + 1 : begin;
    while (end > body && unicode::is_punctuation(cps[end - 1])) --end;
    if (end == body) return {};
    return encode(cps, begin, end);
}

int parse_int(std::string_view text, std::size_t pos, std::size_t width, std::string_view whole) {
    int value = 0;
    if (pos + width > text.size()) throw ParseError("truncated timestamp '" + std::string(whole) + "'");
    const auto* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + width, value);
    if (ec != std::errc{} || ptr != first + width)
        throw ParseError("invalid timestamp '" + std::string(whole) + "'");
    return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
    if (pos >= text.size() || text[pos] != c)
        throw ParseError("invalid timestamp '" + std::string(whole) + "'");
}

}  // namespace

std::size_t DocumentSet::token_count() const {
    std::size_t n = 0;
    for (const auto& d : documents) n += d.tokens.size();
    return n;
}

std::vector<std::string> tokenize(std::string_view text) {
    const std::string lowered = strip_urls(unicode::to_lower(text));
    std::vector<std::string> tokens;
    std::vector<char32_t> chunk;
    std::size_t pos = 0;
    auto flush = [&] {
        if (chunk.empty()) return;
        if (auto tok = clean_token(chunk); !tok.empty()) tokens.push_back(std::move(tok));
        chunk.clear();
    };
    while (pos < lowered.size()) {
        const char32_t cp = unicode::decode(lowered, pos);
        if (unicode::is_space(cp)) {
            flush();
        } else {
            chunk.push_back(cp);
        }
    }
    flush();
    return tokens;
}

Instant parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    const std::string_view whole = text;
    const int y = parse_int(text, 0, 4, whole);
    expect(text, 4, '-', whole);
    const int mo = parse_int(text, 5, 2, whole);
    expect(text, 7, '-', whole);
    const int d = parse_int(text, 8, 2, whole);
    const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                              day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw ParseError("invalid calendar date '" + std::string(whole) + "'");
    Instant t = time_point_cast<seconds>(sys_days{date});
    if (text.size() == 10) return t;
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ')
        throw ParseError("invalid timestamp '" + std::string(whole) + "'");
    const int h = parse_int(text, 11, 2, whole);
    expect(text, 13, ':', whole);
    const int mi = parse_int(text, 14, 2, whole);
    expect(text, 16, ':', whole);
    const int s = parse_int(text, 17, 2, whole);
    if (h > 23 || mi > 59 || s > 60)
        throw ParseError("time of day out of range in '" + std::string(whole) + "'");
    t += hours{h} + minutes{mi} + seconds{s};
    std::size_t pos = 19;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        const std::size_t digits = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == digits) throw ParseError("empty fraction in '" + std::string(whole) + "'");
    }
    if (pos == text.size()) return t;
    if ((text[pos] == 'Z' || text[pos] == 'z') && pos + 1 == text.size()) return t;
    if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '+' ? 1 : -1;
        const int oh = parse_int(text, pos + 1, 2, whole);
        std::size_t mpos = pos + 3;
        if (mpos < text.size() && text[mpos] == ':') ++mpos;
        const int om = parse_int(text, mpos, 2, whole);
        if (mpos + 2 != text.size() || oh > 23 || om > 59)
            throw ParseError("invalid zone offset in '" + std::string(whole) + "'");
        return t - sign * (hours{oh} + minutes{om});
    }
    throw ParseError("invalid timestamp '" + std::string(whole) + "'");
}

std::string format_timestamp(Instant t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day date{day_start};
    const hh_mm_ss tod{t - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(date.year()),
                  unsigned(date.month()), unsigned(date.day()), int(tod.hours().count()),
                  int(tod.minutes().count()), int(tod.seconds().count()));
    return buf;
}

std::string format_date(Instant t) { return format_timestamp(t).substr(0, 10); }

DocumentSet read_jsonl(std::istream& in, std::string source_path) {
    DocumentSet set;
    set.source_path = std::move(source_path);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);
        auto field = [&](const char* name) -> std::string {
            const auto it = obj.find(name);
            if (it == obj.end()) throw ParseError(std::string("missing field '") + name + "'", line_no);
            if (!it->is_string())
                throw ParseError(std::string("field '") + name + "' is not a string", line_no);
            return it->get<std::string>();
        };
        Document doc;
        doc.id = field("id");
        const std::string created = field("created_at");
        const std::string text = field("text");
        try {
            doc.timestamp = parse_timestamp(created);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!seen.insert(doc.id).second)
            throw ValidationError("duplicate document id '" + doc.id + "' at line " +
                                  std::to_string(line_no));
        doc.tokens = tokenize(text);
        set.documents.push_back(std::move(doc));
    }
    std::stable_sort(set.documents.begin(), set.documents.end(),
                     [](const Document& a, const Document& b) { return a.timestamp < b.timestamp; });
    return set;
}

DocumentSet ingest_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file '" + path.string() + "'");
    return read_jsonl(in, path.string());
}

Instant default_origin(const DocumentSet& set) {
    if (set.documents.empty()) throw DomainError("default origin of an empty document set");
    return std::chrono::floor<std::chrono::days>(set.documents.front().timestamp);
}

std::vector<TimeWindow> window_split(const DocumentSet& set, std::chrono::seconds window_length,
                                     Instant origin) {
    if (window_length.count() <= 0) throw DomainError("window length must be positive");
    std::vector<TimeWindow> windows;
    for (const auto& doc : set.documents) {
        if (doc.timestamp < origin)
            throw ValidationError("document '" + doc.id + "' at " + format_timestamp(doc.timestamp) +
                                  " precedes window origin " + format_timestamp(origin));
        const auto k = static_cast<std::size_t>((doc.timestamp - origin) / window_length);
        while (windows.size() <= k) {
            const auto start = origin + window_length * static_cast<long>(windows.size());
            windows.push_back(TimeWindow{start, start + window_length, {}});
        }
        windows[k].documents.push_back(doc);
    }
    return windows;
}

std::vector<TimeWindow> window_split(const DocumentSet& set, std::chrono::seconds window_length) {
    if (set.documents.empty()) {
        if (window_length.count() <= 0) throw DomainError("window length must be positive");
        return {};
    }
    return window_split(set, window_length, default_origin(set));
}

DocumentSet as_document_set(const TimeWindow& window, std::string source_path) {
    return DocumentSet{window.documents, std::move(source_path)};
}

}  // namespace framescore
