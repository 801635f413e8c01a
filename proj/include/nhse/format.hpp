#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace nhse {

/// Shortest round-trip decimal representation; locale independent, so CSV
/// output is byte-identical across runs and platforms.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace nhse
