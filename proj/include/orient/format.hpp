#pragma once

#include <charconv>
#include <string>

namespace orient {

// Shortest decimal form with the given number of significant digits.
// Locale-independent; used everywhere a number reaches a file or stdout so
// output stays byte-identical across runs.
inline void append_double(std::string& out, double v, int significant_digits) {
    char buf[48];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, significant_digits);
    (void)ec;
    out.append(buf, ptr);
}

inline std::string format_double(double v, int significant_digits) {
    std::string out;
    append_double(out, v, significant_digits);
    return out;
}

}  // namespace orient
