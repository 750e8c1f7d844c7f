#pragma once

// Unit conversions. Everything inside the library is in hartree / bohr;
// conversions happen once at the CLI boundary.

namespace gmqdt::units {

inline constexpr double kDebyeToAu = 0.393430;
inline constexpr double kHartreeToEv = 27.211386245988;
inline constexpr double kEvToHartree = 1.0 / kHartreeToEv;
inline constexpr double kBohr2ToCm2 = 2.8002852e-17;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace gmqdt::units
