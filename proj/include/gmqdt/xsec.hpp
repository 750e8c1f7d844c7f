#pragma once

#include <string>
#include <vector>

#include "gmqdt/dynamics.hpp"

namespace gmqdt::xsec {

struct CrossSectionCurve {
  std::vector<double> energy_ev;
  std::vector<double> sigma_raw;   // cm^2
  std::vector<double> sigma_conv;  // cm^2, empty until convolved
  bool dipole_on = true;
  std::string config_hash;
};

// Binned capture model with unit dissociation probability:
// sigma(E_b) = (pi / k^2) sum_{a in bin} (pi Gamma_a / 2) / dE, k^2 = 2 E_b.
// `centers_ev` are bin centres, bins [E_b - dE/2, E_b + dE/2). Throws BinError
// if dE <= 3 max Gamma within a bin.
CrossSectionCurve capture_xsec(const std::vector<dynamics::Resonance>& resonances,
                               const std::vector<double>& centers_ev, double bin_ev);

// Uniform bin centres covering [lo, hi].
std::vector<double> bin_centers(double lo_ev, double hi_ev, double bin_ev);

struct Kernel {
  enum class Type { Gaussian, Maxwell } type = Type::Gaussian;
  double sigma_ev = 3e-3;     // Gaussian width
  double kt_par_ev = 1e-4;    // anisotropic Maxwell temperatures
  double kt_perp_ev = 2e-3;
};

// rho_E(E') for a nominal energy E, normalized over E' >= 0.
double kernel_density(const Kernel& kernel, double e_ev, double e_prime_ev);

struct ConvolutionResult {
  std::vector<double> values;
  double max_mass_error = 0.0;  // max |mass - 1| of the kernel on the grid
};

// sigma_conv(E) = int sigma(E') rho_E(E') dE' with sigma linear between grid
// nodes and an E' = 0 node prepended (piecewise-constant extension). The
// Gaussian kernel is integrated exactly per segment; the Maxwell kernel by the
// trapezoidal rule on sub-steps that resolve it. Evaluated at `at_ev`.
// Throws NormalizationError when the kernel mass captured by the grid is
// below 0.999.
ConvolutionResult convolve(const std::vector<double>& energy_ev, const std::vector<double>& sigma,
                           const Kernel& kernel, const std::vector<double>& at_ev);

}  // namespace gmqdt::xsec
