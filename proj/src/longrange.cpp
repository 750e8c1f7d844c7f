#include "gmqdt/longrange.hpp"

#include <cmath>

#include "gmqdt/error.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt {

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::SSigma: return "s_sigma";
    case Channel::PPiMinus: return "ppi_minus";
    case Channel::PSigma: return "p_sigma";
    case Channel::PPiPlus: return "ppi_plus";
    case Channel::DSigma: return "d_sigma";
  }
  return "?";
}

int channel_projection(Channel c) {
  switch (c) {
    case Channel::PPiMinus: return -1;
    case Channel::PPiPlus: return +1;
    default: return 0;
  }
}

}  // namespace gmqdt

namespace gmqdt::longrange {

namespace {
const double kSqrt3 = std::sqrt(3.0);

void require_nonnegative(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw DomainError("dipole strength must be finite and non-negative");
  }
}
}  // namespace

DipoleStrength DipoleStrength::from_debye(double d) {
  require_nonnegative(d);
  const double au = d * units::kDebyeToAu;
  return {d, au, au / kSqrt3};
}

DipoleStrength DipoleStrength::from_au(double d) {
  require_nonnegative(d);
  return {d / units::kDebyeToAu, d, d / kSqrt3};
}

DipoleStrength DipoleStrength::from_reduced(double d_tilde) {
  require_nonnegative(d_tilde);
  const double au = d_tilde * kSqrt3;
  return {au / units::kDebyeToAu, au, d_tilde};
}

SigmaBlock build_sigma_block(const DipoleStrength& dipole) {
  SigmaBlock block;
  block.coefficients << 0.0, dipole.reduced, dipole.reduced, 1.0;
  return block;
}

SigmaEigenchannels diagonalize_block(const SigmaBlock& block) {
  const double d = block.coefficients(0, 1);
  const double root = std::sqrt(1.0 + 4.0 * d * d);
  // Eigenvalues (1 +- root)/2 are the 1/r^2 coefficients, i.e. lambda(lambda+1)/2.
  const double upper = 0.5 * (1.0 + root);

  // Eigenvectors of [[0, d], [d, 1]]: (d, upper) for the upper root and its
  // orthogonal complement (upper, -d) for the lower one.
  const double norm = std::hypot(upper, d);
  Eigen::Matrix2d rot;
  rot.col(0) << upper / norm, -d / norm;
  rot.col(1) << d / norm, upper / norm;
  const double weight = (upper / norm) * (upper / norm);

  SigmaEigenchannels out;
  out.rotation = rot;

  out.p_tilde.label = Channel::PSigma;
  out.p_tilde.centrifugal_coefficient = 1.0 + root;
  out.p_tilde.lambda = Complex(0.5 * (-1.0 + std::sqrt(5.0 + 4.0 * root)), 0.0);
  out.p_tilde.mixing_fraction = weight;

  out.s_tilde.label = Channel::SSigma;
  out.s_tilde.centrifugal_coefficient = 1.0 - root;
  const double delta_minus = 5.0 - 4.0 * root;
  if (delta_minus >= 0.0) {
    out.s_tilde.lambda = Complex(0.5 * (-1.0 + std::sqrt(delta_minus)), 0.0);
  } else {
    out.s_tilde.lambda = Complex(-0.5, 0.5 * std::sqrt(-delta_minus));
  }
  out.s_tilde.mixing_fraction = weight;
  return out;
}

DipoleStrength critical_dipole() { return DipoleStrength::from_reduced(0.375); }

std::array<EffectiveChannel, kNumChannels> effective_channels(const DipoleStrength& dipole) {
  const auto sigma = diagonalize_block(build_sigma_block(dipole));
  std::array<EffectiveChannel, kNumChannels> out;
  out[0] = sigma.s_tilde;
  out[2] = sigma.p_tilde;
  for (Channel c : {Channel::PPiMinus, Channel::PPiPlus}) {
    auto& ch = out[static_cast<int>(c)];
    ch.label = c;
    ch.lambda = Complex(1.0, 0.0);
    ch.centrifugal_coefficient = 2.0;
    ch.mixing_fraction = 1.0;
  }
  auto& d = out[static_cast<int>(Channel::DSigma)];
  d.label = Channel::DSigma;
  d.lambda = Complex(2.0, 0.0);
  d.centrifugal_coefficient = 6.0;
  d.mixing_fraction = 1.0;
  return out;
}

}  // namespace gmqdt::longrange
