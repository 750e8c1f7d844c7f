#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <string_view>

namespace gmqdt {

using Complex = std::complex<double>;

// Electronic channel basis, in the fixed order used throughout the library.
enum class Channel : int { SSigma = 0, PPiMinus = 1, PSigma = 2, PPiPlus = 3, DSigma = 4 };
inline constexpr int kNumChannels = 5;

std::string_view channel_name(Channel c);
// Projection of the electronic angular momentum on the molecular axis.
int channel_projection(Channel c);

}  // namespace gmqdt

namespace gmqdt::longrange {

// Permanent dipole of the ion. `reduced` is the s-p coupling D/sqrt(3).
struct DipoleStrength {
  double debye = 0.0;
  double au = 0.0;
  double reduced = 0.0;

  static DipoleStrength from_debye(double d);
  static DipoleStrength from_au(double d);
  static DipoleStrength from_reduced(double d_tilde);
};

// 1/r^2 coefficients of the (s sigma, p sigma) block, Coulomb charge Z = 1.
struct SigmaBlock {
  Eigen::Matrix2d coefficients;
  double charge = 1.0;
};

struct EffectiveChannel {
  Channel label = Channel::SSigma;
  Complex lambda{0.0, 0.0};
  double centrifugal_coefficient = 0.0;  // lambda(lambda+1), always real
  double mixing_fraction = 1.0;
  double threshold = 0.0;

  bool complex_lambda() const { return lambda.imag() != 0.0; }
};

struct SigmaEigenchannels {
  EffectiveChannel s_tilde;
  EffectiveChannel p_tilde;
  // Columns are the (s sigma, p sigma) components of s~sigma and p~sigma.
  Eigen::Matrix2d rotation;
};

SigmaBlock build_sigma_block(const DipoleStrength& dipole);

// Closed-form diagonalization. The s~sigma branch is continuous with
// lambda = 0 at zero dipole; beyond the critical dipole it is
// lambda = -1/2 + i*alpha with alpha > 0.
SigmaEigenchannels diagonalize_block(const SigmaBlock& block);

// Reduced dipole at which lambda(s~sigma) turns complex (exactly 3/8).
DipoleStrength critical_dipole();

// All five escape channels: s~sigma, p pi-, p~sigma, p pi+, d sigma.
// The pi channels keep lambda = 1 and d sigma stays uncoupled with lambda = 2.
std::array<EffectiveChannel, kNumChannels> effective_channels(const DipoleStrength& dipole);

}  // namespace gmqdt::longrange
