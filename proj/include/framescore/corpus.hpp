#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace framescore {

/// UTC instant at one-second resolution.
using Instant = std::chrono::sys_seconds;

struct Document {
    std::string id;
    Instant timestamp;
    std::vector<std::string> tokens;
};

/// Documents sorted by timestamp (ties keep file order); ids unique.
struct DocumentSet {
    std::vector<Document> documents;
    std::string source_path;

    std::size_t token_count() const;
};

/// Half-open interval [start, end) and the documents that fall inside it.
struct TimeWindow {
    Instant start;
    Instant end;
    std::vector<Document> documents;
};

/// Splits text into lowercase tokens.
///
/// URLs (anything from `http://` or `https://` up to the next whitespace)
/// are dropped. Tokens beginning with `@` or `#` keep the prefix so that
/// handles and hashtags stay single vocabulary items. Other tokens lose
/// leading and trailing punctuation; inner punctuation such as the hyphen
/// in "arco-íris" is kept. Diacritics are preserved.
std::vector<std::string> tokenize(std::string_view text);

/// Parses `YYYY-MM-DDTHH:MM:SS[.frac][Z|±HH:MM|±HHMM]`. A missing zone
/// designator means UTC. A bare date `YYYY-MM-DD` is midnight UTC.
/// Throws ParseError.
Instant parse_timestamp(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Instant t);

/// `YYYY-MM-DD` of the UTC day containing t.
std::string format_date(Instant t);

/// Reads JSON-lines with string fields `id`, `created_at`, `text`. Blank
/// lines are skipped. Throws IoError, ParseError (1-based line number) or
/// ValidationError on a duplicate id.
DocumentSet ingest_jsonl(const std::filesystem::path& path);
DocumentSet read_jsonl(std::istream& in, std::string source_path = {});

/// Timestamp of the earliest document truncated to midnight UTC. The set
/// must be nonempty.
Instant default_origin(const DocumentSet& set);

/// Assigns each document to window k = floor((t - origin) / length).
/// Interior empty windows are kept, trailing ones are not. Throws
/// ValidationError for documents before origin and DomainError for a
/// non-positive length.
std::vector<TimeWindow> window_split(const DocumentSet& set,
                                     std::chrono::seconds window_length,
                                     Instant origin);

/// Window split with the default origin; an empty set yields no windows.
std::vector<TimeWindow> window_split(const DocumentSet& set,
                                     std::chrono::seconds window_length);

/// Wraps one window's documents as a set of its own.
DocumentSet as_document_set(const TimeWindow& window, std::string source_path = {});

}  // namespace framescore
