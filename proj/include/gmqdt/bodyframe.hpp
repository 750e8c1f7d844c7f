#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "gmqdt/longrange.hpp"

namespace gmqdt::bodyframe {

using Matrix5 = Eigen::Matrix<double, kNumChannels, kNumChannels>;

// Jacobi coordinates of the triatomic: CO bond, G-H distance, bend angle
// and its azimuth about the CO axis.
struct GeometryQ {
  double r_co = 2.00;
  double r_gh = 3.27;
  double theta = 0.0;
  double phi = 0.0;

  void validate() const;
};

// c * dR_CO^i * dR_GH^j * (theta^2)^k
struct PolyTerm {
  int pow_rco = 0;
  int pow_rgh = 0;
  int pow_theta2 = 0;
  double coef = 0.0;
};

struct DefectSurface {
  std::vector<PolyTerm> terms;
  double eval(double d_rco, double d_rgh, double theta) const;
};

// Pure-Coulomb (dipole-off) defect surfaces, one per channel in basis order.
struct DefectSurfaceSet {
  std::array<DefectSurface, kNumChannels> surfaces;
  double r_co_ref = 2.00;
  double r_gh_ref = 3.27;
};

// gamma = gamma0 theta (sigma-pi), delta = delta0 theta^2 (pi+ - pi-).
struct RennerTellerParams {
  double gamma0 = 0.0;
  double delta0 = 0.0;
  double gamma(double theta) const { return gamma0 * theta; }
  double delta(double theta) const { return delta0 * theta * theta; }
};

struct BodyFrameModel {
  DefectSurfaceSet surfaces;
  RennerTellerParams rt;
  // Diagonal of the electronic coupling matrix (hartree).
  std::array<double, kNumChannels> electronic{};
  longrange::DipoleStrength dipole;
  // Principal quantum numbers used when re-extracting the s~ and p~ defects
  // with the generalized phase.
  int n_s = 4;
  int n_p = 3;
};

// Defects at Q. Dipole off: the surfaces as given. Dipole on: the s~sigma and
// p~sigma values are re-extracted from the same electronic energies with the
// generalized lambda; the other channels are unchanged.
std::array<double, kNumChannels> eval_defects(const BodyFrameModel& model, const GeometryQ& q,
                                              bool dipole_on);

// Model coupling matrix M(Q) in the (s~sigma, ppi-, p~sigma, ppi+, dsigma) basis.
Matrix5 coupling_matrix(const BodyFrameModel& model, const GeometryQ& q);

// Orthogonal U whose row a is the eigenchannel assigned to basis slot a.
// Slots 1 and 3 carry the antisymmetric and symmetric pi combinations once
// the bend couplings are on. U = 1 when gamma = delta = 0.
Matrix5 build_U(const BodyFrameModel& model, const GeometryQ& q);

struct BodyFrameK {
  Matrix5 k;
  std::array<double, kNumChannels> mu{};
  std::array<Complex, kNumChannels> lambda{};
};

// K = U^T diag(tan pi mu) U, evaluated in the bending-plane frame (phi = 0);
// the azimuth only enters through the frame transformation.
// Throws PoleError if some mu sits within 1e-10 of 1/2.
BodyFrameK kmatrix_bodyframe(const BodyFrameModel& model, const GeometryQ& q, bool dipole_on);

// Bend couplings read off a body-frame K: p~sigma with the symmetric
// combination pi' = (pi+ + pi-)/sqrt(2), and pi+ with pi-.
struct BendCouplings {
  double sigma_pi_prime = 0.0;
  double pi_plus_minus = 0.0;
};
BendCouplings bend_couplings(const Matrix5& k);

// lambda per channel for dipole on or off.
std::array<Complex, kNumChannels> channel_lambdas(const BodyFrameModel& model, bool dipole_on);

}  // namespace gmqdt::bodyframe
