#pragma once

#include <vector>

// Brute-force radial solver used to check the analytic phase parameter:
//   (-1/2 d2/dr2 + c/(2 r^2) - Z/r - E) u = 0
// integrated with Numerov on a logarithmic grid (u = sqrt(r) w, x = ln r).

namespace gmqdt::radial {

enum class InnerBoundary {
  Regular,   // u ~ r^(lambda+1) power-series start; needs c >= -1/4
  HardWall,  // u(r_min) = 0
};

enum class Direction { Outward, Inward, Matched };

struct RadialProblem {
  double c = 0.0;  // lambda(lambda+1), real
  double charge = 1.0;
  double r_min = 1e-5;
  double r_max = 20.0;
  int n_points = 20000;
  double energy = -0.5;
  InnerBoundary inner = InnerBoundary::Regular;

  void validate() const;
};

struct RadialSolution {
  std::vector<double> r;
  std::vector<double> u;   // normalized so max |u| = 1
  std::vector<double> du;  // du/dr on the same scale
  int nodes = 0;           // interior sign changes
};

// Outer boundary that keeps the decaying tail well resolved:
// max(20 nu, 2 nu^2 + 40 nu).
double default_r_max(double nu);

RadialSolution integrate_radial(const RadialProblem& problem, Direction direction);

struct ShootingOptions {
  double r_min = 1e-5;
  InnerBoundary inner = InnerBoundary::Regular;
  double charge = 1.0;
  int n_points = 0;              // 0 picks a starting grid from the window
  double energy_tolerance = 1e-12;
  double grid_tolerance = 1e-8;  // |dE| under grid doubling
  int max_doublings = 6;
};

struct ShootingResult {
  std::vector<double> energies;
  int n_points = 0;         // grid used for the reported energies
  double grid_change = 0.0;  // max |dE| against the half-resolution grid
};

// Eigenenergies in [e_lo, e_hi] (both < 0), ascending.
ShootingResult shoot_bound_states(double c, double e_lo, double e_hi,
                                  const ShootingOptions& options = {});

// Asymptotic solutions f+ ~ exp(-r/nu) r^nu (decaying) and
// f- ~ exp(r/nu) r^-nu (growing), with their 1/r series corrections.
struct AsymptoticValue {
  double f_plus = 0.0, df_plus = 0.0;
  double f_minus = 0.0, df_minus = 0.0;
  double truncation = 0.0;  // smallest retained term relative to the sum
};
AsymptoticValue asymptotic_forms(double c, double energy, double charge, double r);

struct WronskianPair {
  double w_plus = 0.0;   // W(f+, u)
  double w_minus = 0.0;  // W(f-, u)
  // spread across the zone relative to |W(f+, f-)| max(|a_plus|, |a_minus|)
  double variation_plus = 0.0;
  double variation_minus = 0.0;
};

struct AsymptoticDecomposition {
  double a_plus = 0.0;   // u ~ a_plus f+ + a_minus f-
  double a_minus = 0.0;
  WronskianPair wronskians;
  double residual = 0.0;  // max |u - fit| / max |u| over the zone
  double zone_start = 0.0;
};

// Uses the outer `zone_fraction` of the sampled r range. Throws ZoneError
// if that zone is inside the turning point or the series has not converged.
AsymptoticDecomposition asymptotic_decompose(const RadialSolution& solution,
                                             const RadialProblem& problem,
                                             double zone_fraction = 0.2);

}  // namespace gmqdt::radial
