#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "gmqdt/longrange.hpp"

namespace gmqdt::dynamics {

// Channel thresholds and partial waves; the open/closed split follows from
// the total energy.
struct ChannelPartition {
  std::vector<double> thresholds;  // hartree
  std::vector<Complex> lambdas;
  std::vector<std::string> labels;  // optional, used for reporting

  int size() const { return static_cast<int>(thresholds.size()); }
  std::vector<int> open(double energy) const;
  std::vector<int> closed(double energy) const;
};

// K_phys = K_oo - K_oc (K_cc + tan beta_c)^-1 K_co, evaluated as
// K_oo - K_oc C (C K_cc C + diag(sin beta cos beta))^-1 C K_co with
// C = diag(cos beta_c) so tan poles never appear.
// Throws DomainError without open channels, SingularMatrixError on a pole.
Eigen::MatrixXd eliminate_closed(const Eigen::MatrixXd& k, const ChannelPartition& part,
                                 double energy);

// S = (1 + iK)(1 - iK)^-1.
Eigen::MatrixXcd s_matrix(const Eigen::MatrixXd& k_phys);

// sum_i atan(eigenvalue_i), no unwrapping.
double eigenphase_raw(const Eigen::MatrixXd& k_phys);

// Continuous eigenphase sum along a grid of K_phys matrices. Throws
// UndersamplingError when a step, reduced modulo pi, exceeds pi/3.
std::vector<double> eigenphase_sum(const std::vector<Eigen::MatrixXd>& k_grid);

struct Resonance {
  double position = 0.0;  // U_a, hartree
  double width = 0.0;     // Gamma_a, hartree
  int parent = -1;        // closed channel carrying the resonance
  std::string channel;
  double fit_residual = 0.0;
  double pole = 0.0;      // zero of det(K_cc + tan beta) that seeded the fit
  bool overlapping = false;
};

struct SearchOptions {
  double coupling_floor = 1e-24;  // skip poles whose |K_oc v|^2 is below this
  int fit_points = 13;            // dtau/dE samples across the peak (>= 9)
  double pole_tolerance = 1e-14;
};

// Counting function: number of det(K_cc + tan beta) zeros below energy, up
// to an additive constant. Monotone in the energy.
int pole_count(const Eigen::MatrixXd& k, const ChannelPartition& part, double energy);

// Resonances in [e_lo, e_hi], which must not straddle a threshold.
std::vector<Resonance> find_resonances(const Eigen::MatrixXd& k, const ChannelPartition& part,
                                       double e_lo, double e_hi,
                                       const SearchOptions& options = {});

// Perturbative width 2 K^2 / (pi n^3).
double width_estimate(double k_offdiag, double n);

}  // namespace gmqdt::dynamics
