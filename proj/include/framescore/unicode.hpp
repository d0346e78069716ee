#pragma once

#include <string>
#include <string_view>

namespace framescore::unicode {

/// Lowercases UTF-8 text. Covers ASCII, Latin-1 Supplement, Latin
/// Extended-A, Greek and Cyrillic; other code points pass through.
/// Invalid byte sequences are copied unchanged.
std::string to_lower(std::string_view text);

/// True for code points treated as punctuation when trimming tokens:
/// ASCII punctuation, Latin-1 punctuation/symbols, General Punctuation,
/// and CJK symbols.
bool is_punctuation(char32_t cp);

bool is_space(char32_t cp);

/// Decodes one code point starting at text[pos] and advances pos. Invalid
/// sequences decode as the single byte value.
char32_t decode(std::string_view text, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

}  // namespace framescore::unicode
