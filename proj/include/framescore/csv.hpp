#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace framescore::csv {

/// Splits one RFC 4180 line; quoted fields may contain commas and "".
/// Throws ParseError on an unterminated quote.
std::vector<std::string> split(const std::string& line, std::size_t line_no = 0);

/// Quotes a field only when it contains a comma, quote or newline.
std::string quote(const std::string& field);

}  // namespace framescore::csv
