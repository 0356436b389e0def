#pragma once

#include <cmath>

namespace cgbath {

/// sin(x)/x with sinc(0) = 1.
inline double sinc(double x) noexcept {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

}  // namespace cgbath
