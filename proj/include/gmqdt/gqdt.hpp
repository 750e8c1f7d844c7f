#pragma once

#include <complex>
#include <vector>

namespace gmqdt::gqdt {

using Complex = std::complex<double>;

// Closed-channel energy eps < 0 with nu = (-2 eps)^(-1/2) and kappa = 1/nu.
struct ClosedChannelEnergy {
  double epsilon = -0.5;
  double nu = 1.0;
  double kappa = 1.0;

  static ClosedChannelEnergy from_energy(double epsilon);
  static ClosedChannelEnergy from_nu(double nu);
};

// Long-range phase parameter beta(kappa, lambda) of a closed channel.
struct PhaseParam {
  double beta = 0.0;
  Complex lambda{0.0, 0.0};
  ClosedChannelEnergy energy;

  // d(beta)/dE, analytic (pi nu^3) for real lambda, central difference
  // otherwise.
  double derivative() const;
};

// Real lambda:    beta = pi (nu - lambda).
// Complex lambda: beta = pi (nu - Re lambda) + atan[tanh(pi alpha) tan(x)],
//   x = y - alpha ln(2 kappa),
//   y = arg( Gamma(2 lambda + 2) [Gamma(nu - lambda) / Gamma(lambda + 1 + nu)]^(1/2) ).
// y is taken from continuous imaginary parts of lnGamma, and the arctangent
// branch follows x across every pi/2 crossing, so beta is continuous and
// increasing in the energy.
PhaseParam beta(const ClosedChannelEnergy& energy, Complex lambda);
double beta_value(double epsilon, Complex lambda);

// K = -tan(beta). Throws PoleError when |cos beta| < 1e-12.
double single_channel_K(const PhaseParam& phase);

// Bound energies solving beta(E) + pi mu = (n + 1) pi for n in
// [n_first, n_last]. Bracketed root solve in nu; |dE| <= 1e-10 hartree.
std::vector<double> bound_energies(Complex lambda, double mu, int n_first, int n_last);
double bound_energy(Complex lambda, double mu, int n);

// mu = (n + 1) - beta(E)/pi reduced to [0, 1).
double quantum_defect_from_energy(double energy, int n, Complex lambda);

// (1/pi) d(beta)/dE. nu^3 exactly for real lambda.
double resonance_density(Complex lambda, double energy);

}  // namespace gmqdt::gqdt
