#include "gmqdt/vibration.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::vibration {

namespace {

// q^2 in the chi_{n,|m|} basis (tridiagonal), size n x n.
Eigen::MatrixXd q2_matrix(int n, int abs_m) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    t(k, k) = 2.0 * k + abs_m + 1.0;
    if (k + 1 < n) t(k, k + 1) = t(k + 1, k) = -std::sqrt((k + 1.0) * (k + 1.0 + abs_m));
  }
  return t;
}

struct BendSolution {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
};

BendSolution solve_bend(const VibrationalModel& model, double r_gh, int n, int abs_m) {
  const double omega = model.omega_bend_at(r_gh);
  const double ts = model.theta_scale_at(r_gh);
  // q^4 exactly: square the q^2 matrix one size up, then truncate.
  const Eigen::MatrixXd t = q2_matrix(n + 1, abs_m);
  const Eigen::MatrixXd q4 = (t * t).topLeftCorner(n, n);
  Eigen::MatrixXd h = model.quartic * std::pow(ts, 4) * q4;
  for (int k = 0; k < n; ++k) h(k, k) += omega * (2.0 * k + abs_m + 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw ConvergenceError("solve_vibrational: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct Product {
  double energy;
  int bend;
  int v;
};

std::vector<Product> lowest_products(const VibrationalModel& model, const BendSolution& bend,
                                     double shift, int n_keep) {
  std::vector<Product> all;
  const int nb = std::min<int>(bend.energies.size(), n_keep);
  for (int k = 0; k < nb; ++k) {
    for (int v = 0; v < model.stretch_quanta; ++v) {
      all.push_back({bend.energies[k] + model.omega_stretch * (v + 0.5) + shift, k, v});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Product& a, const Product& b) { return a.energy < b.energy; });
  if (static_cast<int>(all.size()) < n_keep) {
    throw DomainError("solve_vibrational: basis holds fewer than " + std::to_string(n_keep) +
                      " states");
  }
  all.resize(n_keep);
  return all;
}

}  // namespace

double VibrationalModel::omega_bend_at(double r_gh) const {
  const double w = omega_bend + omega_bend_slope * (r_gh - r_gh_ref);
  if (!(w > 0.0)) throw DomainError("bend frequency is not positive at R_GH = " + std::to_string(r_gh));
  return w;
}

double VibrationalModel::theta_scale_at(double r_gh) const {
  return theta_scale * std::sqrt(omega_bend / omega_bend_at(r_gh));
}

double VibrationalModel::v0_at(double r_gh) const {
  const double d = r_gh - r_gh_ref;
  return v0_curvature * d * d;
}

void VibrationalModel::validate() const {
  if (!(omega_bend > 0.0) || !(omega_stretch > 0.0)) throw DomainError("vibrational frequencies must be positive");
  if (!(theta_scale > 0.0) || !(stretch_scale > 0.0)) throw DomainError("vibrational length scales must be positive");
  if (!(quartic >= 0.0)) throw DomainError("quartic bend coefficient must be non-negative");
  if (stretch_quanta < 1) throw DomainError("need at least one stretch state");
}

void bend_functions(int n_max, int abs_m, double q, double* out) {
  const double t = q * q;
  // sqrt(2 / |m|!) q^|m| e^(-t/2), in logs for large |m|
  const double log0 = 0.5 * std::log(2.0) - 0.5 * std::lgamma(abs_m + 1.0) - 0.5 * t +
                      (abs_m > 0 ? abs_m * std::log(q) : 0.0);
  out[0] = (q == 0.0 && abs_m > 0) ? 0.0 : std::exp(log0);
  if (n_max == 0) return;
  out[1] = (abs_m + 1.0 - t) * out[0] / std::sqrt(abs_m + 1.0);
  for (int k = 1; k < n_max; ++k) {
    out[k + 1] = ((2.0 * k + 1.0 + abs_m - t) * out[k] - std::sqrt(k * (k + abs_m + 0.0)) * out[k - 1]) /
                 std::sqrt((k + 1.0) * (k + 1.0 + abs_m));
  }
}

void stretch_functions(int v_max, double x, double* out) {
  out[0] = std::pow(units::kPi, -0.25) * std::exp(-0.5 * x * x);
  if (v_max == 0) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (int v = 1; v < v_max; ++v) {
    out[v + 1] = std::sqrt(2.0 / (v + 1.0)) * x * out[v] - std::sqrt(v / (v + 1.0)) * out[v - 1];
  }
}

AdiabaticSpectrum solve_vibrational(const VibrationalModel& model, double r_gh, int basis_size,
                                    int m_phi, int n_keep) {
  model.validate();
  if (basis_size < 4) throw DomainError("solve_vibrational: basis_size must be >= 4");
  if (n_keep < 1) throw DomainError("solve_vibrational: need at least one state");
  const int abs_m = std::abs(m_phi);
  const double shift = model.v0_at(r_gh);

  int n = basis_size;
  BendSolution coarse = solve_bend(model, r_gh, n, abs_m);
  auto coarse_states = lowest_products(model, coarse, shift, n_keep);
  for (int doubling = 0; doubling < 6; ++doubling) {
    const BendSolution fine = solve_bend(model, r_gh, 2 * n, abs_m);
    const auto fine_states = lowest_products(model, fine, shift, n_keep);
    double change = 0.0;
    for (int i = 0; i < n_keep; ++i) {
      change = std::max(change, std::abs(fine_states[i].energy - coarse_states[i].energy));
    }
    if (change < 1e-8) {
      AdiabaticSpectrum out;
      out.r_gh = r_gh;
      out.m_phi = m_phi;
      out.basis_size = 2 * n;
      out.theta_scale = model.theta_scale_at(r_gh);
      out.change = change;
      for (int i = 0; i < n_keep; ++i) {
        VibState s;
        s.m_phi = m_phi;
        s.l = i;
        s.energy = fine_states[i].energy;
        s.bend = fine.vectors.col(fine_states[i].bend);
        // Fix the overall sign by the largest coefficient.
        Eigen::Index arg = 0;
        s.bend.cwiseAbs().maxCoeff(&arg);
        if (s.bend[arg] < 0.0) s.bend = -s.bend;
        s.stretch_v = fine_states[i].v;
        out.states.push_back(std::move(s));
      }
      log::debug("solve_vibrational: m=", m_phi, " basis=", 2 * n, " change=", change);
      return out;
    }
    coarse = fine;
    coarse_states = fine_states;
    n *= 2;
  }
  throw ConvergenceError("solve_vibrational: basis doubling did not converge for m = " +
                         std::to_string(m_phi));
}

double bend_value(const VibState& state, double q) {
  const int n = static_cast<int>(state.bend.size());
  std::vector<double> chi(n);
  bend_functions(n - 1, std::abs(state.m_phi), q, chi.data());
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += state.bend[k] * chi[k];
  return s;
}

}  // namespace gmqdt::vibration
