#pragma once

#include <cstdio>
#include <string>

namespace vrpcs {

// Numeric literal with 12 significant digits, "C" locale independent of iostream state.
inline std::string format_number(double value) {
    if (value == 0.0) {
        return "0";  // also folds -0
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

} // namespace vrpcs
