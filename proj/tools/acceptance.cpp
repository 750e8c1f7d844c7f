// Acceptance run: one PASS/FAIL line per criterion, exit 0 when 1-8 pass.
//
//   gmqdt_acceptance [--config PATH]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmqdt/bodyframe.hpp"
#include "gmqdt/config.hpp"
#include "gmqdt/dynamics.hpp"
#include "gmqdt/error.hpp"
#include "gmqdt/gqdt.hpp"
#include "gmqdt/longrange.hpp"
#include "gmqdt/pipeline.hpp"
#include "gmqdt/radial.hpp"
#include "gmqdt/units.hpp"
#include "gmqdt/xsec.hpp"

#ifndef GMQDT_SOURCE_DIR
#define GMQDT_SOURCE_DIR "."
#endif

using namespace gmqdt;

namespace {

constexpr double kPi = units::kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double trapz(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

Outcome coulomb_regression() {
  double worst = 0.0;
  for (int l = 0; l <= 2; ++l) {
    const auto e = gqdt::bound_energies(Complex(l, 0.0), 0.0, 0, 10);
    for (int n = 0; n <= 10; ++n) {
      const double exact = -0.5 / ((n + l + 1.0) * (n + l + 1.0));
      worst = std::max(worst, std::abs(e[n] / exact - 1.0));
    }
  }
  return {worst <= 1e-10, "max rel err " + fmt("%.2e", worst) + " (limit 1e-10)"};
}

Outcome generalized_lambda(const config::RunConfig& cfg) {
  const auto ch = longrange::effective_channels(cfg.body.dipole);
  const auto& s = ch[static_cast<int>(Channel::SSigma)];
  const auto& p = ch[static_cast<int>(Channel::PSigma)];
  const double dp = std::abs(p.lambda.real() - 1.3123119);
  const double ds = std::max(std::abs(s.lambda.real() + 0.5), std::abs(std::abs(s.lambda.imag()) - 0.8857056));
  const double dm = std::abs(p.mixing_fraction - 0.746);
  const bool ok = dp <= 1e-6 && ds <= 1e-6 && dm <= 0.002 && p.lambda.imag() == 0.0;
  return {ok, "lambda_p " + fmt("%.9f", p.lambda.real()) + ", lambda_s -0.5" +
                  fmt("%+.7fi", s.lambda.imag()) + ", mixing " + fmt("%.6f", p.mixing_fraction)};
}

Outcome oracle_equivalence(const config::RunConfig& cfg) {
  const auto ch = longrange::effective_channels(cfg.body.dipole);
  const double lp = ch[static_cast<int>(Channel::PSigma)].lambda.real();
  const Complex ls = ch[static_cast<int>(Channel::SSigma)].lambda;
  const int n_states = cfg.grids.bound_states;
  double worst = 0.0, grid = 0.0;
  for (double lambda : {0.0, 1.0, lp}) {
    const auto gq = gqdt::bound_energies(Complex(lambda, 0.0), 0.0, 0, n_states - 1);
    const double nu_first = 1.0 / std::sqrt(-2.0 * gq.front());
    const double nu_last = 1.0 / std::sqrt(-2.0 * gq.back());
    const auto shot = radial::shoot_bound_states(lambda * (lambda + 1.0),
                                                 -0.5 / ((nu_first - 0.5) * (nu_first - 0.5)),
                                                 -0.5 / ((nu_last + 0.5) * (nu_last + 0.5)));
    if (static_cast<int>(shot.energies.size()) != n_states) {
      return {false, "oracle found " + std::to_string(shot.energies.size()) + " states for lambda " +
                         fmt("%.6f", lambda)};
    }
    for (int n = 0; n < n_states; ++n) worst = std::max(worst, std::abs(shot.energies[n] / gq[n] - 1.0));
    grid = std::max(grid, shot.grid_change);
  }

  // complex lambda: inner wall, top five states below -0.004 hartree
  radial::ShootingOptions opt;
  opt.r_min = cfg.grids.wall_radius;
  opt.inner = radial::InnerBoundary::HardWall;
  const double c = (ls * (ls + 1.0)).real();
  const auto walled = radial::shoot_bound_states(c, -0.05, -0.004, opt);
  if (walled.energies.size() < 5) return {false, "walled oracle found fewer than five states"};
  const double b0 = gqdt::beta_value(walled.energies.back(), ls);
  double spread = 0.0;
  for (std::size_t i = walled.energies.size() - 5; i < walled.energies.size(); ++i) {
    const double d = std::remainder(gqdt::beta_value(walled.energies[i], ls) - b0, kPi);
    spread = std::max(spread, std::abs(d));
  }
  const bool ok = worst <= 1e-6 && grid < 1e-8 && spread <= 2e-3;
  return {ok, "real lambda max rel err " + fmt("%.2e", worst) + " (limit 1e-6, grid change " +
                  fmt("%.1e", grid) + "); complex beta mod pi spread " + fmt("%.2e", spread) +
                  " (limit 2e-3)"};
}

Outcome unitarity() {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 8);
  double worst_u = 0.0, worst_s = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    dynamics::ChannelPartition part;
    for (int i = 0; i < n; ++i) {
      part.thresholds.push_back(i == 0 ? 0.0 : 0.02 * (1.0 + u(rng)));
      part.lambdas.emplace_back(i % 3, 0.0);
    }
    if (trial % 4 == 0) part.lambdas[n - 1] = Complex(-0.5, 0.8857052642170372);
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) k(i, j) = k(j, i) = 0.3 * u(rng);
    }
    const double e = 0.02 * (0.5 + 0.5 * u(rng)) + 1e-6;
    const Eigen::MatrixXd kp = dynamics::eliminate_closed(k, part, e);
    const Eigen::MatrixXcd s = dynamics::s_matrix(kp);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    worst_u = std::max(worst_u, (s.adjoint() * s - id).cwiseAbs().maxCoeff());
    worst_s = std::max(worst_s, (kp - kp.transpose()).cwiseAbs().maxCoeff());
  }
  return {worst_u <= 1e-10 && worst_s <= 1e-10,
          "max |S^+S - 1| " + fmt("%.2e", worst_u) + ", max |K - K^T| " + fmt("%.2e", worst_s) +
              " over 1000 draws (limit 1e-10)"};
}

Outcome two_channel() {
  dynamics::ChannelPartition p;
  p.thresholds = {0.0, 0.01};
  p.lambdas = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
  p.labels = {"open", "closed"};
  auto k2 = [](double koo, double k, double kcc) {
    Eigen::MatrixXd m(2, 2);
    m << koo, k, k, kcc;
    return m;
  };
  // exact S pole at nu = 10 - i atanh(k^2)/pi
  const std::complex<double> nu(10.0, -std::atanh(0.01) / kPi);
  const std::complex<double> pole = 0.01 - 0.5 / (nu * nu);
  const auto r = dynamics::find_resonances(k2(0.0, 0.1, 0.0), p, 0.0049, 0.0051);
  if (r.size() != 1) return {false, "expected one resonance, found " + std::to_string(r.size())};
  const double dpos = std::abs(r[0].position - pole.real());
  const double dwid = std::abs(r[0].width / (-2.0 * pole.imag()) - 1.0);

  double worst_ratio = 1.0;
  for (double k : {0.05, 0.1, 0.2, 0.3}) {
    for (double koo : {0.0, 0.3}) {
      for (const auto& x : dynamics::find_resonances(k2(koo, k, 0.2), p, 0.0001, 0.0095)) {
        const double n = 1.0 / std::sqrt(2.0 * (0.01 - x.position));
        const double ratio = dynamics::width_estimate(k, n) / x.width;
        if (std::abs(std::log(ratio)) > std::abs(std::log(worst_ratio))) worst_ratio = ratio;
      }
    }
  }
  const bool ok = dpos <= 1e-8 && dwid <= 0.01 && worst_ratio <= 2.0 && worst_ratio >= 0.5;
  return {ok, "|dU| " + fmt("%.2e", dpos) + " hartree (limit 1e-8), width rel err " + fmt("%.2e", dwid) +
                  " (limit 1e-2), worst estimate/fit " + fmt("%.3f", worst_ratio)};
}

Outcome density(const config::RunConfig& cfg) {
  const auto ch = longrange::effective_channels(cfg.body.dipole);
  const Complex lp = ch[static_cast<int>(Channel::PSigma)].lambda;
  const Complex ls = ch[static_cast<int>(Channel::SSigma)].lambda;
  double worst_p = 0.0;
  for (double e : cfg.grids.beta_energies) {
    const double ref = gqdt::resonance_density(Complex(1.0, 0.0), e);
    worst_p = std::max(worst_p, std::abs(gqdt::resonance_density(lp, e) / ref - 1.0));
  }
  // The complex-lambda density approaches nu^3 only in the Rydberg region.
  // Check it where the resonance search evaluates closed channels: from the
  // highest threshold below (E >= 0) up to nu_cut.
  const auto sys = pipeline::vibronic_system(cfg, true);
  const double top = *std::max_element(sys.partition.thresholds.begin(), sys.partition.thresholds.end());
  const double nu_lo = 1.0 / std::sqrt(2.0 * top);
  double worst_s = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double nu = nu_lo + (cfg.grids.nu_cut - nu_lo) * i / 200.0;
    const double e = -0.5 / (nu * nu);
    worst_s = std::max(worst_s, std::abs(gqdt::resonance_density(ls, e) / (nu * nu * nu) - 1.0));
  }
  const double at_one = std::abs(gqdt::resonance_density(ls, -0.5) - 1.0);
  return {worst_p <= 1e-10 && worst_s <= 0.01,
          "p~sigma vs lambda=1 rel " + fmt("%.2e", worst_p) + " (limit 1e-10); complex vs nu^3 " +
              fmt("%.2e", worst_s) + " on nu in [" + fmt("%.2f", nu_lo) + ", " + fmt("%.0f", cfg.grids.nu_cut) +
              "] (limit 1e-2; " + fmt("%.3f", at_one) + " at nu = 1)"};
}

Outcome cross_section_properties(const config::RunConfig& cfg) {
  const auto& g = cfg.grids;
  const auto sys = pipeline::vibronic_system(cfg, true);
  const double top_ev = g.energy_max_ev + 20.0 * cfg.kernel.sigma_ev;
  const auto res = pipeline::resonances(cfg, sys, 1e-10, top_ev * units::kEvToHartree);
  const auto centers = xsec::bin_centers(0.0, top_ev, g.bin_ev);
  const auto raw = xsec::capture_xsec(res, centers, g.bin_ev);

  // Lorentzian area: each resonance contributes (pi/k^2)(pi Gamma/2) to the integral
  double binned = 0.0, expected = 0.0;
  for (double s : raw.sigma_raw) binned += s * g.bin_ev * units::kEvToHartree;
  for (const auto& r : res) {
    const double e_ev = r.position * units::kHartreeToEv;
    const double c = (std::floor(e_ev / g.bin_ev) + 0.5) * g.bin_ev;
    if (c > top_ev) continue;
    expected += (kPi / (2.0 * c * units::kEvToHartree)) * 0.5 * kPi * r.width * units::kBohr2ToCm2;
  }
  const double area_err = std::abs(binned / expected - 1.0);

  // area under the convolved curve, kernel fully inside the grid and the
  // raw curve negligible where it is not
  std::vector<double> at;
  for (double c : centers) {
    if (c <= top_ev - 12.0 * cfg.kernel.sigma_ev) at.push_back(c);
  }
  const auto conv = xsec::convolve(centers, raw.sigma_raw, cfg.kernel, at);
  const std::vector<double> raw_at(raw.sigma_raw.begin(), raw.sigma_raw.begin() + at.size());
  const double conv_err = std::abs(trapz(at, conv.values) / trapz(at, raw_at) - 1.0);

  // kernel mass against the trapezoid on a fine grid
  double norm_err = conv.max_mass_error;
  xsec::Kernel maxwell;
  maxwell.type = xsec::Kernel::Type::Maxwell;
  for (const auto& k : {cfg.kernel, maxwell}) {
    for (double e : {0.002, 0.05, 0.5}) {
      std::vector<double> x, y;
      for (int i = 0; i <= 400000; ++i) {
        x.push_back(0.6 * i / 400000.0);
        y.push_back(xsec::kernel_density(k, e, x.back()));
      }
      norm_err = std::max(norm_err, std::abs(trapz(x, y) - 1.0));
    }
  }
  const bool ok = area_err <= 1e-3 && conv_err <= 1e-3 && norm_err <= 1e-8;
  return {ok, std::to_string(res.size()) + " resonances: area identity " + fmt("%.2e", area_err) +
                  ", convolution area " + fmt("%.2e", conv_err) + " (limits 1e-3), kernel mass " +
                  fmt("%.2e", norm_err) + " (limit 1e-8)"};
}

Outcome dipole_mechanism(const config::RunConfig& cfg) {
  const auto off_cfg = cfg.without_dipole();
  double min_ratio = 1e300, max_change = 0.0;
  for (double theta : cfg.grids.theta) {
    if (theta < 0.1 - 1e-12 || theta > 0.5 + 1e-12) continue;
    bodyframe::GeometryQ q;
    q.r_co = cfg.body.surfaces.r_co_ref;
    q.r_gh = cfg.grids.r_gh;
    q.theta = theta;
    const auto on = bodyframe::kmatrix_bodyframe(cfg.body, q, true).k;
    const auto off = bodyframe::kmatrix_bodyframe(off_cfg.body, q, false).k;
    const int p = static_cast<int>(Channel::PSigma), pp = static_cast<int>(Channel::PPiPlus),
              pm = static_cast<int>(Channel::PPiMinus);
    const double sp_on = on(p, pp) * on(p, pp), sp_off = off(p, pp) * off(p, pp);
    min_ratio = std::min(min_ratio, sp_off > 0.0 ? sp_on / sp_off : (sp_on > 0.0 ? 1e300 : 0.0));
    const double pi_on = on(pp, pm) * on(pp, pm), pi_off = off(pp, pm) * off(pp, pm);
    max_change = std::max(max_change, std::abs(pi_on / pi_off - 1.0));
  }

  const auto xon = pipeline::cross_section(cfg, true);
  const auto xoff = pipeline::cross_section(off_cfg, false);
  int below = 0;
  double on_area = 0.0, off_area = 0.0;
  for (std::size_t i = 0; i < xon.energy_ev.size(); ++i) {
    if (xon.sigma_conv[i] < xoff.sigma_conv[i]) ++below;
    on_area += xon.sigma_conv[i];
    off_area += xoff.sigma_conv[i];
  }
  const bool ok = min_ratio > 1.0 && max_change <= 0.05 && below == 0;
  return {ok, "|K_psigma,ppi'|^2 on/off min " + fmt("%.3f", min_ratio) + " (> 1), |K_pi+pi-|^2 change " +
                  fmt("%.2f%%", 100.0 * max_change) + " (<= 5%), " + std::to_string(below) + " of " +
                  std::to_string(xon.energy_ev.size()) + " energies with sigma_on < sigma_off, area ratio " +
                  fmt("%.3f", on_area / off_area)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string config_path = std::string(GMQDT_SOURCE_DIR) + "/config/default.json";
  app.add_option("--config", config_path, "run configuration (JSON)");
  CLI11_PARSE(app, argc, argv);

  config::RunConfig cfg;
  try {
    cfg = config::load_config(config_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  struct Criterion {
    int id;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 1.0, coulomb_regression},
      {2, 1.0, [&] { return generalized_lambda(cfg); }},
      {3, 60.0, [&] { return oracle_equivalence(cfg); }},
      {4, 30.0, unitarity},
      {5, 60.0, two_channel},
      {6, 5.0, [&] { return density(cfg); }},
      {7, 0.0, [&] { return cross_section_properties(cfg); }},
      {8, 0.0, [&] { return dipole_mechanism(cfg); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_s > 0.0) {
      timing += fmt(" (limit %.0f s)", c.limit_s);
      if (secs >= c.limit_s) o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s  [%s]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  // Absolute magnitudes need ab initio surfaces that are not available here;
  // this line is informational and does not affect the exit code.
  std::printf("criterion 9: FAIL  not reproducible: absolute cross sections and the size of the "
              "enhancement depend on unavailable surfaces; see criteria 3-8\n");
  std::printf("%d of 8 checkable criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
