#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gmqdt/bodyframe.hpp"
#include "gmqdt/vibration.hpp"

namespace gmqdt::framexform {

// One vibronic channel {m_phi, l, i}.
struct VibChannel {
  int m_phi = 0;
  int l = 0;
  Channel electronic = Channel::SSigma;
  double threshold = 0.0;  // U_{m,l} - U_{0,0}, hartree

  int total_projection() const { return m_phi + channel_projection(electronic); }
  std::string label() const;
};

struct VibronicBasis {
  double r_gh = 0.0;
  double ground_energy = 0.0;  // U_{0,0}
  std::vector<VibChannel> channels;
  std::map<int, vibration::AdiabaticSpectrum> spectra;  // keyed by m_phi

  const vibration::VibState& state(const VibChannel& c) const;
};

struct VibronicBlock {
  Channel electronic = Channel::SSigma;
  int m_phi = 0;
  int n_vib = 1;
};

// All channels with m_phi + Lambda_i = total_m, n_vib[i] states for
// electronic channel i, ordered by electronic label and then l.
VibronicBasis build_vibronic_basis(const vibration::VibrationalModel& model, double r_gh,
                                   int total_m, const std::array<int, kNumChannels>& n_vib,
                                   int basis_size);
VibronicBasis build_vibronic_basis(const vibration::VibrationalModel& model, double r_gh,
                                   const std::vector<VibronicBlock>& blocks, int basis_size);

struct QuadratureOptions {
  int q_order = 40;
  int x_order = 16;
  int phi_points = 16;
  double tolerance = 1e-8;
  int max_doublings = 3;
};

struct VibronicK {
  Eigen::MatrixXd k;
  int q_order = 0;       // orders of the accepted evaluation
  int x_order = 0;
  double change = 0.0;   // max element change against the half-order run
};

// Body-frame K(Q) at phi = 0.
using BodyFrameFunction = std::function<bodyframe::Matrix5(const bodyframe::GeometryQ&)>;

// K_{(m,l,i),(m',l',i')} = < Phi_{m,l} | K_{ii'}(Q) | Phi_{m',l'} >, with the
// azimuthal dependence K_ii'(phi) = K_ii'(0) exp(-i (Lambda_i - Lambda_i') phi).
// Gauss-Legendre in q and x, uniform in phi; orders are doubled until the
// largest element change is below tolerance.
VibronicK vibronic_K(const VibronicBasis& basis, const vibration::VibrationalModel& model,
                     const BodyFrameFunction& body_k, const QuadratureOptions& options = {});

// Single evaluation at fixed orders, no convergence loop.
Eigen::MatrixXd vibronic_K_fixed(const VibronicBasis& basis,
                                 const vibration::VibrationalModel& model,
                                 const BodyFrameFunction& body_k, int q_order, int x_order,
                                 int phi_points);

}  // namespace gmqdt::framexform
