#pragma once

#include <numbers>

namespace dls {

inline constexpr double kHbar = 1.054571817e-34;   // J s
inline constexpr double kEps0 = 8.8541878128e-12;  // F/m
inline constexpr double kC0 = 2.99792458e8;        // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rb D2 line
inline constexpr double kOmegaL0 = kTwoPi * 384.230e12;

inline constexpr double hz_to_rad(double hz) { return kTwoPi * hz; }
inline constexpr double rad_to_hz(double w) { return w / kTwoPi; }

}  // namespace dls
