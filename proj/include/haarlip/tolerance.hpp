#pragma once

#include <algorithm>
#include <cmath>

namespace haarlip {

/// Float comparison policy shared by the transform and the regularity checks:
/// relative 1e-12 with an absolute floor of 1e-14 near zero.
struct Tolerance {
    double relative = 1e-12;
    double absolute = 1e-14;

    double slack(double a, double b) const { return std::max(absolute, relative * std::max(std::abs(a), std::abs(b))); }

    bool close(double a, double b) const { return std::abs(a - b) <= slack(a, b); }

    /// a <= b up to slack.
    bool less_equal(double a, double b) const { return a <= b + slack(a, b); }
};

}  // namespace haarlip
