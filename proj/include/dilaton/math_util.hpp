#pragma once

#include <cmath>
#include <stdexcept>

namespace dilaton {

// Thrown when a physical precondition or invariant is violated. The CLI maps
// this to its own exit code, distinct from configuration errors.
struct physics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }

// Unnormalized sinc(x) = sin(x)/x with sinc(0) = 1. Below |x| = 1e-8 the
// quartic Taylor polynomial is exact to double precision and avoids 0/0.
inline double sinc(double x) {
    if (std::abs(x) < 1e-8) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// First derivative of sinc; series below |x| = 0.1 where the closed form
// (cos x - sinc x)/x cancels.
inline double sinc_d1(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 - x2 / 840.0));
    }
    return (std::cos(x) - sinc(x)) / x;
}

// Third derivative of sinc; series below |x| = 0.5.
inline double sinc_d3(double x) {
    if (std::abs(x) < 0.5) {
        const double x2 = x * x;
        return x * (1.0 / 5.0 + x2 * (-1.0 / 42.0 + x2 / 1080.0));
    }
    const double x2 = x * x;
    return ((6.0 - x2) * x * std::cos(x) + (3.0 * x2 - 6.0) * std::sin(x)) /
           (x2 * x2);
}

// sinc(x + d) - sinc(x - d), stable for |d| far below |x| where the direct
// difference would cancel catastrophically.
inline double sinc_diff(double x, double d) {
    if (std::abs(d) >= 1e-3 * std::fmax(1.0, std::abs(x))) {
        return sinc(x + d) - sinc(x - d);
    }
    return 2.0 * d * sinc_d1(x) + (d * d * d / 3.0) * sinc_d3(x);
}

// |a - b| relative to max(|a|, |b|), with an absolute floor below which the
// deviation counts as zero. Used by the validation suites throughout.
inline double relative_deviation(double a, double b, double abs_floor = 0.0) {
    const double diff = std::abs(a - b);
    const double scale = std::fmax(std::abs(a), std::abs(b));
    if (scale <= abs_floor) return 0.0;
    return diff / scale;
}

}  // namespace dilaton
