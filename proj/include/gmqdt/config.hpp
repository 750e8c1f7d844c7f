#pragma once

#include <array>
#include <string>
#include <vector>

#include "gmqdt/bodyframe.hpp"
#include "gmqdt/framexform.hpp"
#include "gmqdt/vibration.hpp"
#include "gmqdt/xsec.hpp"

namespace gmqdt::config {

struct Grids {
  double r_gh = 3.27;
  double energy_min_ev = 0.001;
  double energy_max_ev = 1.0;
  double bin_ev = 0.001;
  double nu_cut = 60.0;
  std::vector<double> theta{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> beta_energies{-0.5, -0.125, -0.05, -0.02, -0.005};
  int bound_states = 5;
  double wall_radius = 0.1;
};

struct RunConfig {
  double dipole_debye = 3.9;
  bodyframe::BodyFrameModel body;
  vibration::VibrationalModel vibration;
  int basis_size = 16;
  std::array<int, kNumChannels> vibrational_channels{4, 4, 4, 4, 4};  // per electronic channel
  int total_m = 0;
  framexform::QuadratureOptions quadrature;
  Grids grids;
  xsec::Kernel kernel;
  std::string output_dir = "out";
  std::string hash;  // FNV-1a of the canonical JSON, hex

  // Same config with the dipole switched off.
  RunConfig without_dipole() const;
};

// JSON text -> validated config. Unknown keys, wrong types and non-finite
// numbers raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace gmqdt::config
