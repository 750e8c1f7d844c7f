#pragma once

#include <Eigen/Core>
#include <vector>

// Model ionic vibrations at fixed R_GH: an isotropic 2D bend oscillator in
// (theta, phi) with a quartic correction, times a harmonic R_CO stretch.
// The bend uses q = theta / theta_scale(R_GH) and the stretch
// x = (R_CO - r_co_eq) / stretch_scale.

namespace gmqdt::vibration {

struct VibrationalModel {
  double r_gh_ref = 3.27;
  double omega_bend = 3.8e-3;      // hartree at r_gh_ref
  double omega_bend_slope = 0.0;   // hartree / bohr
  double theta_scale = 0.12;       // rad, bend length at r_gh_ref
  double quartic = 0.0;            // hartree, coefficient of theta^4
  double omega_stretch = 1.0e-2;   // hartree
  double r_co_eq = 2.00;
  double stretch_scale = 0.07;     // bohr
  double v0_curvature = 0.0;       // hartree / bohr^2, potential along R_GH
  int stretch_quanta = 4;

  double omega_bend_at(double r_gh) const;
  // Harmonic length scales as omega^-1/2 at fixed reduced mass.
  double theta_scale_at(double r_gh) const;
  double v0_at(double r_gh) const;
  void validate() const;
};

struct VibState {
  int m_phi = 0;
  int l = 0;
  double energy = 0.0;     // U_{m,l}(R_GH), hartree
  Eigen::VectorXd bend;    // coefficients over chi_{n,|m|}
  int stretch_v = 0;
};

struct AdiabaticSpectrum {
  double r_gh = 0.0;
  int m_phi = 0;
  int basis_size = 0;          // bend functions used for `states`
  double theta_scale = 0.0;
  std::vector<VibState> states;  // ascending in energy
  double change = 0.0;         // max |dE| against the half-size basis
};

// Normalized 2D radial functions chi_{n,|m|}(q) = N q^|m| e^(-q^2/2) L_n^|m|(q^2),
// with int chi^2 q dq = 1. Fills out[0..n_max].
void bend_functions(int n_max, int abs_m, double q, double* out);
// Harmonic-oscillator functions h_v(x), v = 0..v_max.
void stretch_functions(int v_max, double x, double* out);

// Lowest `n_keep` states for the given m_phi. The bend basis is doubled
// from basis_size until the kept energies move by less than 1e-8.
AdiabaticSpectrum solve_vibrational(const VibrationalModel& model, double r_gh, int basis_size,
                                    int m_phi, int n_keep = 4);

// Bend radial part of a state at q.
double bend_value(const VibState& state, double q);

}  // namespace gmqdt::vibration
