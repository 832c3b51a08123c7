#pragma once

#include <cmath>
#include <numbers>

namespace gbox {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = kPi / 2.0;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wrap an angle into [lower, lower + period).
inline double limit_period(double angle, double lower, double period) {
    return angle - std::floor((angle - lower) / period) * period;
}

/// Wrap into (-pi, pi]. This is the periodicity handler for angle offsets.
inline double wrap_to_pi(double angle) {
    return -limit_period(-angle, -kPi, kTwoPi);
}

/// Wrap into [-pi/2, pi/2); identity-preserving for rectangles (period pi).
inline double wrap_to_half_pi(double angle) {
    return limit_period(angle, -kHalfPi, kPi);
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace gbox
