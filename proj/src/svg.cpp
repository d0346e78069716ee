#include "svg.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace framescore::svg {

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string num(double x) {
    if (std::fabs(x) < 5e-3) x = 0.0;  // avoid "-0.00"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

void open(std::ostream& out, int width, int height) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void close(std::ostream& out) { out << "</svg>\n"; }

std::string_view palette(std::size_t i) {
    static constexpr std::array<std::string_view, 8> colors{"#1f77b4", "#ff7f0e", "#7f7f7f", "#2ca02c",
                                                            "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    return colors[i % colors.size()];
}

}  // namespace framescore::svg
