#pragma once

#include <string>
#include <vector>

#include "gmqdt/config.hpp"
#include "gmqdt/dynamics.hpp"
#include "gmqdt/framexform.hpp"
#include "gmqdt/xsec.hpp"

// Drivers shared by the CLI and the acceptance checks. Every *_csv function
// returns the full file text, header lines included; numbers use %.8e.

namespace gmqdt::pipeline {

std::string format_number(double x);
std::string header_line(const config::RunConfig& cfg, bool dipole_on);

std::string channels_csv(const config::RunConfig& cfg, bool dipole_on);
std::string beta_csv(const config::RunConfig& cfg, bool dipole_on);

struct BoundReport {
  std::string csv;
  double max_abs_diff = 0.0;  // gqdt vs oracle, oracle mode only
};
BoundReport bound_csv(const config::RunConfig& cfg, bool dipole_on, bool oracle);

std::string defects_csv(const config::RunConfig& cfg, bool dipole_on);
std::string kmatrix_csv(const config::RunConfig& cfg, bool dipole_on);

struct VibronicSystem {
  framexform::VibronicBasis basis;
  framexform::VibronicK k;
  dynamics::ChannelPartition partition;
};
VibronicSystem vibronic_system(const config::RunConfig& cfg, bool dipole_on);
std::string vibronic_csv(const config::RunConfig& cfg, const VibronicSystem& sys, bool dipole_on);

// Resonances in [lo, hi] (hartree), splitting at thresholds and stopping
// 1/(2 nu_cut^2) below each one.
std::vector<dynamics::Resonance> resonances(const config::RunConfig& cfg, const VibronicSystem& sys,
                                            double lo, double hi);
std::string resonances_csv(const config::RunConfig& cfg, const std::vector<dynamics::Resonance>& res,
                           bool dipole_on);

// Raw and convolved curve on bin centres inside [energy_min_ev, energy_max_ev].
xsec::CrossSectionCurve cross_section(const config::RunConfig& cfg, bool dipole_on);
std::string xsec_csv(const config::RunConfig& cfg, const xsec::CrossSectionCurve& curve);
std::string xsec_compare_csv(const config::RunConfig& cfg, const xsec::CrossSectionCurve& on,
                             const xsec::CrossSectionCurve& off);

}  // namespace gmqdt::pipeline
