#include "gmqdt/special.hpp"

#include <array>
#include <cmath>

#include "gmqdt/error.hpp"

namespace gmqdt::special {

namespace {

// B_{2k} / (2k (2k-1)), k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

constexpr double kShiftTarget = 15.0;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * 3.14159265358979323846);

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw PoleError("log_gamma: pole at non-positive integer");
  }

  // Upward recurrence Gamma(z) = Gamma(z+n) / prod(z+k). Summing principal
  // logs term by term keeps the imaginary part on the standard branch.
  std::complex<double> shift_sum(0.0, 0.0);
  std::complex<double> w = z;
  while (w.real() < kShiftTarget) {
    shift_sum += std::log(w);
    w += 1.0;
  }

  const std::complex<double> inv = 1.0 / w;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series(0.0, 0.0);
  std::complex<double> power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  const std::complex<double> stirling = (w - 0.5) * std::log(w) - w + kHalfLog2Pi + series;
  return stirling - shift_sum;
}

}  // namespace gmqdt::special
