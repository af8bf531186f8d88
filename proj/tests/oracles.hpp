#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_cdf(double x, double mean, double sd) { return normal_cdf((x - mean) / sd); }

// Area shared by two discs of radius r whose centres are d apart, over pi r^2.
inline double disc_lens_fraction(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    const double area = 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
    return area / (std::numbers::pi * r * r);
}

// Same for balls in 3-D: lens volume pi (4r + d)(2r - d)^2 / 12.
inline double ball_lens_fraction(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    const double lens = std::numbers::pi * (4.0 * r + d) * (2.0 * r - d) * (2.0 * r - d) / 12.0;
    return lens / (4.0 / 3.0 * std::numbers::pi * r * r * r);
}

// Box [-eps, eps]^n against the same box shifted by s.
inline double box_overlap(double eps, const std::vector<double>& s) {
    double v = 1.0;
    for (double si : s) v *= std::max(0.0, 2.0 * eps - std::abs(si)) / (2.0 * eps);
    return v;
}

// Chi-square upper 1e-3 critical value with 7 degrees of freedom.
inline constexpr double kChi2Crit7 = 24.322;

}  // namespace oracle
