#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace framescore::svg {

std::string escape(std::string_view text);

/// Fixed-precision coordinate text so output is byte-stable.
std::string num(double x);

void open(std::ostream& out, int width, int height);
void close(std::ostream& out);

/// A categorical color for series/group index i.
std::string_view palette(std::size_t i);

}  // namespace framescore::svg
