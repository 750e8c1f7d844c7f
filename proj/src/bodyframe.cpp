#include "gmqdt/bodyframe.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/gqdt.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/numeric.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::bodyframe {

namespace {

constexpr int kS = static_cast<int>(Channel::SSigma);
constexpr int kPiM = static_cast<int>(Channel::PPiMinus);
constexpr int kP = static_cast<int>(Channel::PSigma);
constexpr int kPiP = static_cast<int>(Channel::PPiPlus);

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Defect of a channel with generalized lambda, re-extracted from the energy
// of the level that the Coulomb defect mu_off puts at principal number n.
double regeneralize(double mu_off, int n, Complex lambda) {
  const double nu = n - mu_off;
  if (!(nu > 0.0)) throw DomainError("defect too large for principal number " + std::to_string(n));
  const double energy = -0.5 / (nu * nu);
  const double mu = gqdt::quantum_defect_from_energy(energy, n, lambda);
  return mu_off + numeric::wrap_centered(mu - mu_off);
}

// Fixed rotation taking (pi-, pi+) to (pi'', pi') in slots 1 and 3.
Matrix5 pi_rotation() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix5 t = Matrix5::Identity();
  t(kPiM, kPiM) = -s;
  t(kPiM, kPiP) = s;
  t(kPiP, kPiM) = s;
  t(kPiP, kPiP) = s;
  return t;
}

}  // namespace

void GeometryQ::validate() const {
  if (!(r_co > 0.0) || !(r_gh > 0.0)) throw DomainError("geometry needs R_CO, R_GH > 0");
  if (!(theta >= 0.0 && theta <= units::kPi)) throw DomainError("geometry needs theta in [0, pi]");
  if (!(phi >= 0.0 && phi < 2.0 * units::kPi)) throw DomainError("geometry needs phi in [0, 2pi)");
}

double DefectSurface::eval(double d_rco, double d_rgh, double theta) const {
  const double t2 = theta * theta;
  double s = 0.0;
  for (const auto& t : terms) {
    s += t.coef * ipow(d_rco, t.pow_rco) * ipow(d_rgh, t.pow_rgh) * ipow(t2, t.pow_theta2);
  }
  return s;
}

std::array<Complex, kNumChannels> channel_lambdas(const BodyFrameModel& model, bool dipole_on) {
  const auto dipole = dipole_on ? model.dipole : longrange::DipoleStrength::from_debye(0.0);
  const auto channels = longrange::effective_channels(dipole);
  std::array<Complex, kNumChannels> out;
  for (const auto& c : channels) out[static_cast<int>(c.label)] = c.lambda;
  return out;
}

std::array<double, kNumChannels> eval_defects(const BodyFrameModel& model, const GeometryQ& q,
                                              bool dipole_on) {
  q.validate();
  const double d_rco = q.r_co - model.surfaces.r_co_ref;
  const double d_rgh = q.r_gh - model.surfaces.r_gh_ref;
  std::array<double, kNumChannels> mu;
  for (int i = 0; i < kNumChannels; ++i) {
    mu[i] = model.surfaces.surfaces[i].eval(d_rco, d_rgh, q.theta);
  }
  if (dipole_on && model.dipole.reduced > 0.0) {
    const auto lambda = channel_lambdas(model, true);
    mu[kS] = regeneralize(mu[kS], model.n_s, lambda[kS]);
    mu[kP] = regeneralize(mu[kP], model.n_p, lambda[kP]);
  }
  return mu;
}

Matrix5 coupling_matrix(const BodyFrameModel& model, const GeometryQ& q) {
  Matrix5 m = Matrix5::Zero();
  for (int i = 0; i < kNumChannels; ++i) m(i, i) = model.electronic[i];
  const double g = model.rt.gamma(q.theta) / std::sqrt(2.0);
  const double d = model.rt.delta(q.theta);
  m(kP, kPiM) = m(kPiM, kP) = g;
  m(kP, kPiP) = m(kPiP, kP) = g;
  m(kPiM, kPiP) = m(kPiP, kPiM) = d;
  return m;
}

Matrix5 build_U(const BodyFrameModel& model, const GeometryQ& q) {
  q.validate();
  if (model.rt.gamma(q.theta) == 0.0 && model.rt.delta(q.theta) == 0.0) {
    return Matrix5::Identity();
  }
  const Matrix5 t = pi_rotation();
  const Matrix5 m = t * coupling_matrix(model, q) * t.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix5> solver(m);
  if (solver.info() != Eigen::Success) throw ConvergenceError("build_U: eigensolver failed");
  const auto& values = solver.eigenvalues();
  const Matrix5 vecs = solver.eigenvectors();
  for (int i = 0; i + 1 < kNumChannels; ++i) {
    if (std::abs(values[i + 1] - values[i]) < 1e-12) {
      // once per run; quadrature grids hit near-linear geometries many times
      static std::atomic<bool> warned{false};
      if (!warned.exchange(true)) {
        log::warn("build_U: degenerate eigenvalues at theta=", q.theta, "; keeping prior order");
      } else {
        log::debug("build_U: degenerate eigenvalues at theta=", q.theta);
      }
    }
  }

  // Assign each eigenvector to the slot it overlaps most; eigenvectors are
  // visited in eigenvalue order, so ties go to the earlier one.
  std::array<int, kNumChannels> slot_of{};
  std::array<bool, kNumChannels> taken{};
  for (int col = 0; col < kNumChannels; ++col) {
    int best = -1;
    double best_w = -1.0;
    for (int s = 0; s < kNumChannels; ++s) {
      if (taken[s]) continue;
      const double w = std::abs(vecs(s, col));
      if (w > best_w + 1e-12) {
        best_w = w;
        best = s;
      }
    }
    taken[best] = true;
    slot_of[col] = best;
  }
  Matrix5 v = Matrix5::Zero();
  for (int col = 0; col < kNumChannels; ++col) {
    const int s = slot_of[col];
    const double sign = vecs(s, col) < 0.0 ? -1.0 : 1.0;
    v.col(s) = sign * vecs.col(col);
  }
  return v.transpose() * t;
}

BodyFrameK kmatrix_bodyframe(const BodyFrameModel& model, const GeometryQ& q, bool dipole_on) {
  BodyFrameK out;
  out.mu = eval_defects(model, q, dipole_on);
  out.lambda = channel_lambdas(model, dipole_on);
  Eigen::Matrix<double, kNumChannels, 1> tans;
  for (int i = 0; i < kNumChannels; ++i) {
    const double off = numeric::wrap_unit(out.mu[i] - 0.5);
    if (off < 1e-10 || off > 1.0 - 1e-10) {
      throw PoleError("kmatrix_bodyframe: defect of " + std::string(channel_name(Channel(i))) +
                      " sits on the tan pole");
    }
    tans[i] = std::tan(units::kPi * out.mu[i]);
  }
  const Matrix5 u = build_U(model, q);
  out.k = u.transpose() * tans.asDiagonal() * u;
  out.k = 0.5 * (out.k + out.k.transpose()).eval();
  return out;
}

BendCouplings bend_couplings(const Matrix5& k) {
  return {(k(kP, kPiP) + k(kP, kPiM)) / std::sqrt(2.0), k(kPiP, kPiM)};
}

}  // namespace gmqdt::bodyframe
