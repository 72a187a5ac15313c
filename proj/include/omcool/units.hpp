#pragma once

#include <numbers>

namespace omcool {

// SI constants. Everything inside the library is in angular units (rad/s);
// these only appear when converting to occupations, kelvin or newtons.
inline constexpr double kHbar = 1.0545718e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double hz_to_rad_s(double hz) { return kTwoPi * hz; }
constexpr double rad_s_to_hz(double w) { return w / kTwoPi; }

}  // namespace omcool
