#include "gmqdt/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gmqdt/error.hpp"
#include "gmqdt/gqdt.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/longrange.hpp"
#include "gmqdt/radial.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::pipeline {

namespace {

longrange::DipoleStrength dipole_of(const config::RunConfig& cfg, bool dipole_on) {
  return longrange::DipoleStrength::from_debye(dipole_on ? cfg.dipole_debye : 0.0);
}

bodyframe::BodyFrameModel body_of(const config::RunConfig& cfg, bool dipole_on) {
  bodyframe::BodyFrameModel m = cfg.body;
  m.dipole = dipole_of(cfg, dipole_on);
  return m;
}

bodyframe::GeometryQ geometry_at(const config::RunConfig& cfg, double theta) {
  bodyframe::GeometryQ q;
  q.r_co = cfg.body.surfaces.r_co_ref;
  q.r_gh = cfg.grids.r_gh;
  q.theta = theta;
  return q;
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

std::string header_line(const config::RunConfig& cfg, bool dipole_on) {
  return "# config_hash=" + cfg.hash + " dipole=" + (dipole_on ? "on" : "off") + "\n";
}

std::string channels_csv(const config::RunConfig& cfg, bool dipole_on) {
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << "channel,lambda_re,lambda_im,centrifugal,mixing_fraction,threshold_hartree\n";
  for (const auto& c : longrange::effective_channels(dipole_of(cfg, dipole_on))) {
    out << channel_name(c.label) << ',' << format_number(c.lambda.real()) << ','
        << format_number(c.lambda.imag()) << ',' << format_number(c.centrifugal_coefficient) << ','
        << format_number(c.mixing_fraction) << ',' << format_number(c.threshold) << '\n';
  }
  return out.str();
}

std::string beta_csv(const config::RunConfig& cfg, bool dipole_on) {
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << "channel,energy_hartree,nu,beta,K,density\n";
  for (const auto& c : longrange::effective_channels(dipole_of(cfg, dipole_on))) {
    for (double e : cfg.grids.beta_energies) {
      const auto phase = gqdt::beta(gqdt::ClosedChannelEnergy::from_energy(e), c.lambda);
      double k = std::nan("");
      try {
        k = gqdt::single_channel_K(phase);
      } catch (const PoleError&) {
      }
      out << channel_name(c.label) << ',' << format_number(e) << ',' << format_number(phase.energy.nu)
          << ',' << format_number(phase.beta) << ',' << format_number(k) << ','
          << format_number(gqdt::resonance_density(c.lambda, e)) << '\n';
    }
  }
  return out.str();
}

BoundReport bound_csv(const config::RunConfig& cfg, bool dipole_on, bool oracle) {
  BoundReport rep;
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << (oracle ? "channel,n,E_gqdt_hartree,E_oracle_hartree\n" : "channel,n,E_gqdt_hartree\n");
  const int n_states = cfg.grids.bound_states;
  for (const auto& c : longrange::effective_channels(dipole_of(cfg, dipole_on))) {
    const auto energies = gqdt::bound_energies(c.lambda, 0.0, 0, n_states - 1);
    if (!oracle) {
      for (int n = 0; n < n_states; ++n) {
        out << channel_name(c.label) << ',' << n << ',' << format_number(energies[n]) << '\n';
      }
      continue;
    }
    // The regular-start oracle covers real lambda only; a complex lambda
    // needs an inner wall and has no mu = 0 counterpart.
    if (c.complex_lambda()) continue;
    const double nu_first = 1.0 / std::sqrt(-2.0 * energies.front());
    const double nu_last = 1.0 / std::sqrt(-2.0 * energies.back());
    const double e_lo = -0.5 / ((nu_first - 0.5) * (nu_first - 0.5));
    const double e_hi = -0.5 / ((nu_last + 0.5) * (nu_last + 0.5));
    const auto shot = radial::shoot_bound_states(c.centrifugal_coefficient, e_lo, e_hi);
    if (static_cast<int>(shot.energies.size()) != n_states) {
      throw ConvergenceError("bound oracle found " + std::to_string(shot.energies.size()) +
                             " states for " + std::string(channel_name(c.label)));
    }
    for (int n = 0; n < n_states; ++n) {
      rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(energies[n] - shot.energies[n]));
      out << channel_name(c.label) << ',' << n << ',' << format_number(energies[n]) << ','
          << format_number(shot.energies[n]) << '\n';
    }
  }
  rep.csv = out.str();
  return rep;
}

std::string defects_csv(const config::RunConfig& cfg, bool dipole_on) {
  const auto model = body_of(cfg, dipole_on);
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << "theta";
  for (int i = 0; i < kNumChannels; ++i) out << ',' << channel_name(static_cast<Channel>(i));
  out << '\n';
  for (double theta : cfg.grids.theta) {
    const auto mu = bodyframe::eval_defects(model, geometry_at(cfg, theta), dipole_on);
    out << format_number(theta);
    for (double m : mu) out << ',' << format_number(m);
    out << '\n';
  }
  return out.str();
}

std::string kmatrix_csv(const config::RunConfig& cfg, bool dipole_on) {
  const auto model = body_of(cfg, dipole_on);
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << "theta,row,col,value\n";
  for (double theta : cfg.grids.theta) {
    const auto k = bodyframe::kmatrix_bodyframe(model, geometry_at(cfg, theta), dipole_on).k;
    for (int i = 0; i < kNumChannels; ++i) {
      for (int j = 0; j < kNumChannels; ++j) {
        out << format_number(theta) << ',' << channel_name(static_cast<Channel>(i)) << ','
            << channel_name(static_cast<Channel>(j)) << ',' << format_number(k(i, j)) << '\n';
      }
    }
  }
  return out.str();
}

VibronicSystem vibronic_system(const config::RunConfig& cfg, bool dipole_on) {
  VibronicSystem sys;
  sys.basis = framexform::build_vibronic_basis(cfg.vibration, cfg.grids.r_gh, cfg.total_m,
                                               cfg.vibrational_channels, cfg.basis_size);
  const auto model = body_of(cfg, dipole_on);
  const auto body_k = [&](const bodyframe::GeometryQ& q) {
    return bodyframe::kmatrix_bodyframe(model, q, dipole_on).k;
  };
  sys.k = framexform::vibronic_K(sys.basis, cfg.vibration, body_k, cfg.quadrature);
  const auto lambdas = bodyframe::channel_lambdas(model, dipole_on);
  for (const auto& c : sys.basis.channels) {
    sys.partition.thresholds.push_back(c.threshold);
    sys.partition.lambdas.push_back(lambdas[static_cast<int>(c.electronic)]);
    sys.partition.labels.push_back(c.label());
  }
  return sys;
}

std::string vibronic_csv(const config::RunConfig& cfg, const VibronicSystem& sys, bool dipole_on) {
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << "row_channel,col_channel,row_threshold_hartree,value\n";
  const auto& ch = sys.basis.channels;
  for (std::size_t a = 0; a < ch.size(); ++a) {
    for (std::size_t b = 0; b < ch.size(); ++b) {
      out << ch[a].label() << ',' << ch[b].label() << ',' << format_number(ch[a].threshold) << ','
          << format_number(sys.k.k(a, b)) << '\n';
    }
  }
  return out.str();
}

std::vector<dynamics::Resonance> resonances(const config::RunConfig& cfg, const VibronicSystem& sys,
                                            double lo, double hi) {
  std::vector<double> cuts = sys.partition.thresholds;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double gap = 0.5 / (cfg.grids.nu_cut * cfg.grids.nu_cut);

  std::vector<dynamics::Resonance> out;
  double a = lo;
  while (a < hi) {
    // next threshold strictly above a
    const auto it = std::upper_bound(cuts.begin(), cuts.end(), a);
    const bool capped = it != cuts.end();
    const double next = capped ? *it : hi;
    const double b = std::min(hi, capped ? next - gap : hi);
    const double start = a + 1e-12;
    if (b > start && !sys.partition.open(start).empty()) {
      auto found = dynamics::find_resonances(sys.k.k, sys.partition, start, b);
      log::info("resonances: [", start, ", ", b, "] hartree -> ", found.size());
      out.insert(out.end(), found.begin(), found.end());
    }
    if (!capped) break;
    a = next;
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.position < y.position; });
  return out;
}

std::string resonances_csv(const config::RunConfig& cfg, const std::vector<dynamics::Resonance>& res,
                           bool dipole_on) {
  std::ostringstream out;
  out << header_line(cfg, dipole_on);
  out << "E_a_hartree,Gamma_hartree,channel,fit_residual\n";
  for (const auto& r : res) {
    out << format_number(r.position) << ',' << format_number(r.width) << ',' << r.channel << ','
        << format_number(r.fit_residual) << '\n';
  }
  return out.str();
}

xsec::CrossSectionCurve cross_section(const config::RunConfig& cfg, bool dipole_on) {
  const auto& g = cfg.grids;
  // Raw bins start at zero and run past the window far enough to hold the
  // kernel of the last output point.
  const double kernel_top = cfg.kernel.type == xsec::Kernel::Type::Gaussian
                                ? g.energy_max_ev + 12.0 * cfg.kernel.sigma_ev
                                : std::pow(std::sqrt(g.energy_max_ev) + 10.0 * std::sqrt(0.5 * cfg.kernel.kt_par_ev), 2) +
                                      45.0 * cfg.kernel.kt_perp_ev;
  const auto centers = xsec::bin_centers(0.0, kernel_top, g.bin_ev);
  const double top = (centers.back() + 0.5 * g.bin_ev) * units::kEvToHartree;

  const VibronicSystem sys = vibronic_system(cfg, dipole_on);
  const auto res = resonances(cfg, sys, 1e-10, top);
  auto raw = xsec::capture_xsec(res, centers, g.bin_ev);

  std::vector<double> at;
  std::vector<double> raw_at;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (centers[i] >= g.energy_min_ev - 1e-12 && centers[i] <= g.energy_max_ev + 1e-12) {
      at.push_back(centers[i]);
      raw_at.push_back(raw.sigma_raw[i]);
    }
  }
  const auto conv = xsec::convolve(centers, raw.sigma_raw, cfg.kernel, at);
  xsec::CrossSectionCurve curve;
  curve.energy_ev = at;
  curve.sigma_raw = raw_at;
  curve.sigma_conv = conv.values;
  curve.dipole_on = dipole_on;
  curve.config_hash = cfg.hash;
  return curve;
}

std::string xsec_csv(const config::RunConfig& cfg, const xsec::CrossSectionCurve& curve) {
  std::ostringstream out;
  out << header_line(cfg, curve.dipole_on);
  out << "energy_eV,sigma_raw_cm2,sigma_conv_cm2\n";
  for (std::size_t i = 0; i < curve.energy_ev.size(); ++i) {
    out << format_number(curve.energy_ev[i]) << ',' << format_number(curve.sigma_raw[i]) << ','
        << format_number(curve.sigma_conv[i]) << '\n';
  }
  return out.str();
}

std::string xsec_compare_csv(const config::RunConfig& cfg, const xsec::CrossSectionCurve& on,
                             const xsec::CrossSectionCurve& off) {
  if (on.energy_ev != off.energy_ev) throw DomainError("xsec_compare: grids differ");
  std::ostringstream out;
  out << "# config_hash=" << cfg.hash << " dipole=on/off\n";
  out << "energy_eV,sigma_on_cm2,sigma_off_cm2,ratio\n";
  for (std::size_t i = 0; i < on.energy_ev.size(); ++i) {
    const double a = on.sigma_conv[i], b = off.sigma_conv[i];
    const double ratio = b > 0.0 ? a / b : std::nan("");
    out << format_number(on.energy_ev[i]) << ',' << format_number(a) << ',' << format_number(b)
        << ',' << format_number(ratio) << '\n';
  }
  return out.str();
}

}  // namespace gmqdt::pipeline
