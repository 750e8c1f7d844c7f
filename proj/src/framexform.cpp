#include "gmqdt/framexform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/numeric.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::framexform {

std::string VibChannel::label() const {
  return std::string(channel_name(electronic)) + ":m=" + std::to_string(m_phi) +
         ":l=" + std::to_string(l);
}

const vibration::VibState& VibronicBasis::state(const VibChannel& c) const {
  const auto it = spectra.find(c.m_phi);
  if (it == spectra.end() || c.l >= static_cast<int>(it->second.states.size())) {
    throw DomainError("vibronic basis has no state " + c.label());
  }
  return it->second.states[c.l];
}

VibronicBasis build_vibronic_basis(const vibration::VibrationalModel& model, double r_gh,
                                   const std::vector<VibronicBlock>& blocks, int basis_size) {
  // states needed per m_phi; m = 0 always supplies the ground energy
  std::map<int, int> keep{{0, 1}};
  for (const auto& b : blocks) {
    if (b.n_vib < 1) throw DomainError("vibronic block needs at least one state");
    keep[b.m_phi] = std::max(keep[b.m_phi], b.n_vib);
  }
  VibronicBasis basis;
  basis.r_gh = r_gh;
  for (const auto& [m, n] : keep) {
    basis.spectra.emplace(m, vibration::solve_vibrational(model, r_gh, basis_size, m, n));
  }
  basis.ground_energy = basis.spectra.at(0).states.front().energy;
  for (const auto& b : blocks) {
    const auto& spec = basis.spectra.at(b.m_phi);
    for (int l = 0; l < b.n_vib; ++l) {
      VibChannel c;
      c.m_phi = b.m_phi;
      c.l = l;
      c.electronic = b.electronic;
      c.threshold = spec.states[l].energy - basis.ground_energy;
      basis.channels.push_back(c);
    }
  }
  return basis;
}

VibronicBasis build_vibronic_basis(const vibration::VibrationalModel& model, double r_gh,
                                   int total_m, const std::array<int, kNumChannels>& n_vib,
                                   int basis_size) {
  std::vector<VibronicBlock> blocks;
  for (int i = 0; i < kNumChannels; ++i) {
    const Channel c = static_cast<Channel>(i);
    blocks.push_back({c, total_m - channel_projection(c), n_vib[i]});
  }
  return build_vibronic_basis(model, r_gh, blocks, basis_size);
}

Eigen::MatrixXd vibronic_K_fixed(const VibronicBasis& basis,
                                 const vibration::VibrationalModel& model,
                                 const BodyFrameFunction& body_k, int q_order, int x_order,
                                 int phi_points) {
  const auto& chans = basis.channels;
  const int n = static_cast<int>(chans.size());
  if (n == 0) return Eigen::MatrixXd(0, 0);

  int l_max = 0, m_max = 0, v_max = 0;
  for (const auto& c : chans) {
    l_max = std::max(l_max, c.l);
    m_max = std::max(m_max, std::abs(c.m_phi));
    v_max = std::max(v_max, basis.state(c).stretch_v);
  }
  const double theta_scale = model.theta_scale_at(basis.r_gh);
  double q_max = std::sqrt(4.0 * (l_max + 1) + 2.0 * m_max + 2.0) + 6.0;
  q_max = std::min(q_max, units::kPi / theta_scale);
  const double x_max = std::sqrt(2.0 * v_max + 1.0) + 6.0;
  const auto qr = numeric::gauss_legendre(q_order, 0.0, q_max);
  const auto xr = numeric::gauss_legendre(x_order, -x_max, x_max);

  // Basis functions on the nodes.
  Eigen::MatrixXd bend(q_order, n), stretch(x_order, n);
  std::vector<double> h(v_max + 1);
  for (int a = 0; a < n; ++a) {
    const auto& s = basis.state(chans[a]);
    for (int iq = 0; iq < q_order; ++iq) bend(iq, a) = vibration::bend_value(s, qr.nodes[iq]);
  }
  for (int ix = 0; ix < x_order; ++ix) {
    vibration::stretch_functions(v_max, xr.nodes[ix], h.data());
    for (int a = 0; a < n; ++a) stretch(ix, a) = h[basis.state(chans[a]).stretch_v];
  }

  // phi integral (1/2pi) int exp(i d phi) on a uniform grid; 1 if d = 0.
  auto phi_factor = [&](int d) {
    double s = 0.0;
    for (int k = 0; k < phi_points; ++k) {
      s += std::cos(d * 2.0 * units::kPi * k / phi_points);
    }
    return s / phi_points;
  };

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int iq = 0; iq < q_order; ++iq) {
    const double q = qr.nodes[iq];
    const double wq = qr.weights[iq] * q;
    for (int ix = 0; ix < x_order; ++ix) {
      bodyframe::GeometryQ geo;
      geo.r_co = model.r_co_eq + model.stretch_scale * xr.nodes[ix];
      geo.r_gh = basis.r_gh;
      geo.theta = theta_scale * q;
      geo.phi = 0.0;
      const bodyframe::Matrix5 kq = body_k(geo);
      const double w = wq * xr.weights[ix];
      for (int a = 0; a < n; ++a) {
        const double fa = w * bend(iq, a) * stretch(ix, a);
        if (fa == 0.0) continue;
        const int i = static_cast<int>(chans[a].electronic);
        for (int b = a; b < n; ++b) {
          const int j = static_cast<int>(chans[b].electronic);
          out(a, b) += fa * bend(iq, b) * stretch(ix, b) * kq(i, j);
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const int d = chans[b].m_phi - chans[a].m_phi -
                    (channel_projection(chans[a].electronic) - channel_projection(chans[b].electronic));
      out(a, b) *= phi_factor(d);
      out(b, a) = out(a, b);
    }
  }
  return out;
}

VibronicK vibronic_K(const VibronicBasis& basis, const vibration::VibrationalModel& model,
                     const BodyFrameFunction& body_k, const QuadratureOptions& options) {
  int nq = options.q_order, nx = options.x_order, np = options.phi_points;
  Eigen::MatrixXd coarse = vibronic_K_fixed(basis, model, body_k, nq, nx, np);
  double last = 0.0;
  for (int doubling = 0; doubling < options.max_doublings; ++doubling) {
    Eigen::MatrixXd fine = vibronic_K_fixed(basis, model, body_k, 2 * nq, 2 * nx, 2 * np);
    const double change = coarse.size() ? (fine - coarse).cwiseAbs().maxCoeff() : 0.0;
    log::debug("vibronic_K: q_order=", 2 * nq, " change=", change);
    if (change <= options.tolerance) return {fine, 2 * nq, 2 * nx, change};
    last = change;
    coarse = std::move(fine);
    nq *= 2;
    nx *= 2;
    np *= 2;
  }
  throw ConvergenceError("vibronic_K: quadrature change " + std::to_string(last) +
                         " above tolerance " + std::to_string(options.tolerance));
}

}  // namespace gmqdt::framexform
