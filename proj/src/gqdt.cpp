#include "gmqdt/gqdt.hpp"

#include <cmath>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/numeric.hpp"
#include "gmqdt/special.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::gqdt {

namespace {

constexpr double kPi = units::kPi;

void require_closed(double epsilon) {
  if (!(epsilon < 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("closed-channel energy must be negative, got " + std::to_string(epsilon));
  }
}

// atan(t tan x) continued across the poles of tan: with x = m pi + r,
// r in [-pi/2, pi/2), the value is m pi + atan(t tan r).
double unwrapped_atan_tan(double t, double x) {
  const double m = std::floor((x + 0.5 * kPi) / kPi);
  const double r = x - m * kPi;
  return m * kPi + std::atan(t * std::tan(r));
}

double complex_phase(double nu, Complex lambda) {
  using special::log_gamma;
  const double alpha = lambda.imag();
  const double kappa = 1.0 / nu;
  const double y = log_gamma(2.0 * lambda + 2.0).imag() +
                   0.5 * (log_gamma(nu - lambda).imag() - log_gamma(lambda + 1.0 + nu).imag());
  const double x = y - alpha * std::log(2.0 * kappa);
  return kPi * (nu - lambda.real()) + unwrapped_atan_tan(std::tanh(kPi * alpha), x);
}

double beta_of_nu(double nu, Complex lambda) {
  if (lambda.imag() == 0.0) return kPi * (nu - lambda.real());
  return complex_phase(nu, lambda);
}

double fd_step(double energy) { return std::max(1e-8, 1e-6 * std::abs(energy)); }

}  // namespace

ClosedChannelEnergy ClosedChannelEnergy::from_energy(double epsilon) {
  require_closed(epsilon);
  const double nu = 1.0 / std::sqrt(-2.0 * epsilon);
  return {epsilon, nu, 1.0 / nu};
}

ClosedChannelEnergy ClosedChannelEnergy::from_nu(double nu) {
  if (!(nu > 0.0)) throw DomainError("effective quantum number must be positive");
  return {-0.5 / (nu * nu), nu, 1.0 / nu};
}

PhaseParam beta(const ClosedChannelEnergy& energy, Complex lambda) {
  return {beta_of_nu(energy.nu, lambda), lambda, energy};
}

double beta_value(double epsilon, Complex lambda) {
  return beta(ClosedChannelEnergy::from_energy(epsilon), lambda).beta;
}

double PhaseParam::derivative() const {
  return kPi * resonance_density(lambda, energy.epsilon);
}

double single_channel_K(const PhaseParam& phase) {
  if (std::abs(std::cos(phase.beta)) < 1e-12) {
    throw PoleError("single_channel_K: cos(beta) vanishes");
  }
  return -std::tan(phase.beta);
}

double bound_energy(Complex lambda, double mu, int n) {
  // beta ~ pi (nu - Re lambda) up to a bounded correction; expand the
  // bracket around that guess until the target phase is enclosed.
  const double target = (n + 1) * kPi - kPi * mu;
  auto f = [&](double nu) { return beta_of_nu(nu, lambda) - target; };
  const double guess = n + 1.0 + lambda.real() - mu;
  double lo = std::max(guess - 1.5, 1e-3);
  double hi = std::max(guess + 1.5, lo + 1.0);
  for (int expand = 0; expand < 40 && f(lo) > 0.0; ++expand) {
    if (lo <= 1e-3) break;
    lo = std::max(lo - 1.0, 1e-3);
  }
  for (int expand = 0; expand < 40 && f(hi) < 0.0; ++expand) hi += 1.0;
  if (!(f(lo) <= 0.0 && f(hi) >= 0.0)) {
    throw NoRootError("bound_energies: no bracket for n = " + std::to_string(n));
  }
  // dE = nu^-3 dnu, so 1e-13 in nu is far below the 1e-10 hartree target.
  const double nu = numeric::bracketed_root(f, lo, hi, 1e-13);
  return -0.5 / (nu * nu);
}

std::vector<double> bound_energies(Complex lambda, double mu, int n_first, int n_last) {
  if (n_last < n_first) throw DomainError("bound_energies: empty n range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_last - n_first + 1));
  for (int n = n_first; n <= n_last; ++n) out.push_back(bound_energy(lambda, mu, n));
  return out;
}

double quantum_defect_from_energy(double energy, int n, Complex lambda) {
  const double b = beta_value(energy, lambda);
  return numeric::wrap_unit((n + 1) - b / kPi);
}

double resonance_density(Complex lambda, double energy) {
  const auto e = ClosedChannelEnergy::from_energy(energy);
  if (lambda.imag() == 0.0) return e.nu * e.nu * e.nu;
  const double h = fd_step(energy);
  if (!(energy + h < 0.0)) throw DomainError("resonance_density: energy too close to threshold");
  const double up = beta_value(energy + h, lambda);
  const double down = beta_value(energy - h, lambda);
  return (up - down) / (2.0 * h * kPi);
}

}  // namespace gmqdt::gqdt
