#pragma once

#include <cstdio>
#include <string>

namespace sharpq::detail {

/// Fixed shortest-exact formatting for doubles written to CSV. 17
/// significant digits round-trip any double, keeping files byte-stable
/// across runs.
inline std::string fmt_double(double v, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

} // namespace sharpq::detail
