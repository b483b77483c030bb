#pragma once

#include <charconv>
#include <string>

namespace eca::detail {

// Shortest representation that parses back to the same double. Integral
// values keep a trailing ".0" so they still read as reals.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

} // namespace eca::detail
