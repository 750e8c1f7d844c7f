#include "gmqdt/xsec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/numeric.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::xsec {

namespace {

constexpr double kPi = units::kPi;

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// Mass and first moment of the unnormalized unit Gaussian over [za, zb].
struct Moments {
  double m0, m1;
};

Moments gauss_moments(double za, double zb) {
  // difference of cdfs taken on the side where it does not cancel
  const double m0 = za > 0.0 ? std_normal_cdf(-za) - std_normal_cdf(-zb) : std_normal_cdf(zb) - std_normal_cdf(za);
  return {m0, std_normal_pdf(za) - std_normal_pdf(zb)};
}

// E' range carrying the kernel mass for nominal energy e.
std::pair<double, double> kernel_support(const Kernel& k, double e) {
  if (k.type == Kernel::Type::Gaussian) {
    return {std::max(0.0, e - 10.0 * k.sigma_ev), e + 10.0 * k.sigma_ev};
  }
  const double sd = std::sqrt(0.5 * k.kt_par_ev);
  const double root = std::sqrt(e);
  const double lo = std::max(0.0, root - 9.0 * sd);
  const double hi = root + 9.0 * sd;
  return {root - 9.0 * sd > 0.0 ? lo * lo : 0.0, hi * hi + 40.0 * k.kt_perp_ev};
}

// Finest structure the kernel has near e, used to pick the sub-step.
double kernel_scale(const Kernel& k, double e) {
  if (k.type == Kernel::Type::Gaussian) return k.sigma_ev;
  const double par = 2.0 * std::sqrt(std::max(e, 0.0) * 0.5 * k.kt_par_ev) + 0.5 * k.kt_par_ev;
  return std::max(std::min(par, k.kt_perp_ev), 1e-7);
}

double maxwell_density(const Kernel& k, double e, double ep) {
  // E' = (sqrt(E) + s)^2 + p with s ~ N(0, kT_par/2) and p ~ Exp(kT_perp).
  if (ep <= 0.0) return 0.0;
  const double sd = std::sqrt(0.5 * k.kt_par_ev);
  const double root = std::sqrt(e);
  const double lo = std::max(-std::sqrt(ep) - root, -9.0 * sd);
  const double hi = std::min(std::sqrt(ep) - root, 9.0 * sd);
  if (!(hi > lo)) return 0.0;
  static const auto rule = numeric::gauss_legendre(48);
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = mid + half * rule.nodes[i];
    const double par = (root + s) * (root + s);
    const double gauss = std::exp(-0.5 * s * s / (sd * sd)) / (sd * std::sqrt(2.0 * kPi));
    sum += rule.weights[i] * gauss * std::exp(-(ep - par) / k.kt_perp_ev) / k.kt_perp_ev;
  }
  return half * sum;
}

}  // namespace

std::vector<double> bin_centers(double lo_ev, double hi_ev, double bin_ev) {
  if (!(bin_ev > 0.0) || !(hi_ev > lo_ev) || !(lo_ev >= 0.0)) {
    throw DomainError("bin_centers: need 0 <= lo < hi and bin > 0");
  }
  const int n = static_cast<int>(std::ceil((hi_ev - lo_ev) / bin_ev - 1e-9));
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo_ev + (i + 0.5) * bin_ev;
  return out;
}

CrossSectionCurve capture_xsec(const std::vector<dynamics::Resonance>& resonances,
                               const std::vector<double>& centers_ev, double bin_ev) {
  if (!(bin_ev > 0.0)) throw DomainError("capture_xsec: bin width must be positive");
  CrossSectionCurve curve;
  curve.energy_ev = centers_ev;
  curve.sigma_raw.assign(centers_ev.size(), 0.0);
  const double bin = bin_ev * units::kEvToHartree;
  for (std::size_t b = 0; b < centers_ev.size(); ++b) {
    if (b > 0 && !(centers_ev[b] > centers_ev[b - 1])) {
      throw DomainError("capture_xsec: energy grid must be strictly increasing");
    }
    if (!(centers_ev[b] > 0.0)) throw DomainError("capture_xsec: bin centres must be positive");
    const double lo = (centers_ev[b] - 0.5 * bin_ev) * units::kEvToHartree;
    const double hi = lo + bin;
    double area = 0.0, widest = 0.0;
    for (const auto& r : resonances) {
      if (r.position >= lo && r.position < hi) {
        area += 0.5 * kPi * r.width;
        widest = std::max(widest, r.width);
      }
    }
    if (widest > 0.0 && bin <= 3.0 * widest) {
      throw BinError("capture_xsec: bin of " + std::to_string(bin_ev) + " eV at " +
                     std::to_string(centers_ev[b]) + " eV is not wider than 3 Gamma = " +
                     std::to_string(3.0 * widest * units::kHartreeToEv) + " eV");
    }
    const double k2 = 2.0 * centers_ev[b] * units::kEvToHartree;
    curve.sigma_raw[b] = (kPi / k2) * area / bin * units::kBohr2ToCm2;
  }
  return curve;
}

double kernel_density(const Kernel& kernel, double e_ev, double e_prime_ev) {
  if (e_prime_ev < 0.0) return 0.0;
  if (kernel.type == Kernel::Type::Gaussian) {
    const double s = kernel.sigma_ev;
    if (!(s > 0.0)) throw DomainError("Gaussian kernel width must be positive");
    const double z = (e_prime_ev - e_ev) / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * kPi) * std_normal_cdf(e_ev / s));
  }
  if (!(kernel.kt_par_ev > 0.0) || !(kernel.kt_perp_ev > 0.0)) {
    throw DomainError("Maxwell kernel temperatures must be positive");
  }
  return maxwell_density(kernel, e_ev, e_prime_ev);
}

ConvolutionResult convolve(const std::vector<double>& energy_ev, const std::vector<double>& sigma,
                           const Kernel& kernel, const std::vector<double>& at_ev) {
  if (energy_ev.size() != sigma.size() || energy_ev.size() < 2) {
    throw DomainError("convolve: need matching energy and sigma arrays of length >= 2");
  }
  for (std::size_t i = 1; i < energy_ev.size(); ++i) {
    if (!(energy_ev[i] > energy_ev[i - 1])) throw DomainError("convolve: grid must be increasing");
  }
  if (!(energy_ev.front() >= 0.0)) throw DomainError("convolve: grid must be non-negative");

  // Grid with the E' = 0 node carrying the first value.
  std::vector<double> xs, ys;
  if (energy_ev.front() > 0.0) {
    xs.push_back(0.0);
    ys.push_back(sigma.front());
  }
  xs.insert(xs.end(), energy_ev.begin(), energy_ev.end());
  ys.insert(ys.end(), sigma.begin(), sigma.end());

  ConvolutionResult out;
  out.values.reserve(at_ev.size());
  for (double e : at_ev) {
    const auto [lo, hi] = kernel_support(kernel, e);
    if (kernel.type == Kernel::Type::Gaussian) {
      // sigma is linear between nodes, so each segment integrates in closed form
      const double s = kernel.sigma_ev;
      if (!(s > 0.0)) throw DomainError("Gaussian kernel width must be positive");
      double integral = 0.0, mass = 0.0;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double a = xs[i], b = xs[i + 1];
        if (b < lo || a > hi) continue;
        const auto m = gauss_moments((a - e) / s, (b - e) / s);
        const double slope = (ys[i + 1] - ys[i]) / (b - a);
        integral += (ys[i] + slope * (e - a)) * m.m0 + slope * s * m.m1;
        mass += m.m0;
      }
      mass /= std_normal_cdf(e / s);
      integral /= std_normal_cdf(e / s);
      if (mass < 0.999) {
        throw NormalizationError("convolve: kernel mass " + std::to_string(mass) + " at E = " +
                                 std::to_string(e) + " eV is not covered by the grid");
      }
      out.max_mass_error = std::max(out.max_mass_error, std::abs(mass - 1.0));
      out.values.push_back(integral / mass);
      continue;
    }
    const double step = kernel_scale(kernel, e) / 10.0;
    double integral = 0.0, mass = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double a = xs[i], b = xs[i + 1];
      if (b < lo || a > hi) continue;
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
      const double h = (b - a) / pieces;
      for (int p = 0; p < pieces; ++p) {
        const double x0 = a + p * h, x1 = x0 + h;
        const double s0 = ys[i] + (ys[i + 1] - ys[i]) * (x0 - a) / (b - a);
        const double s1 = ys[i] + (ys[i + 1] - ys[i]) * (x1 - a) / (b - a);
        const double r0 = kernel_density(kernel, e, x0);
        const double r1 = kernel_density(kernel, e, x1);
        integral += 0.5 * h * (s0 * r0 + s1 * r1);
        mass += 0.5 * h * (r0 + r1);
      }
    }
    if (mass < 0.999) {
      throw NormalizationError("convolve: kernel mass " + std::to_string(mass) + " at E = " +
                               std::to_string(e) + " eV is not covered by the grid");
    }
    out.max_mass_error = std::max(out.max_mass_error, std::abs(mass - 1.0));
    out.values.push_back(integral / mass);
  }
  return out;
}

}  // namespace gmqdt::xsec
