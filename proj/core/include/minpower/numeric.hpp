#pragma once

#include <algorithm>
#include <cmath>

namespace minpower {

// Comparison policy for energy and cost quantities. All tolerant comparisons
// in the library use a relative epsilon of 1e-9 with an absolute floor of
// 1e-12; with a path-loss exponent of 4 over kilometre-scale fields, cost
// magnitudes reach ~1e13, so relative comparison is the only sane default.
inline constexpr double kRelEps = 1e-9;
inline constexpr double kAbsEps = 1e-12;

inline double comparison_slack(double a, double b) {
    return std::max(kAbsEps, kRelEps * std::max(std::fabs(a), std::fabs(b)));
}

inline bool nearly_equal(double a, double b) {
    return std::fabs(a - b) <= comparison_slack(a, b);
}

// a <= b up to the comparison slack.
inline bool leq_with_slack(double a, double b) {
    return a <= b + comparison_slack(a, b);
}

} // namespace minpower
