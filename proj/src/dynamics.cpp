#include "gmqdt/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/gqdt.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/units.hpp"

namespace gmqdt::dynamics {

namespace {

constexpr double kPi = units::kPi;

Eigen::MatrixXd sub(const Eigen::MatrixXd& k, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = k(rows[i], cols[j]);
  }
  return out;
}

double reduce_pi(double d) {
  // into (-pi/2, pi/2]
  return d - kPi * std::ceil(d / kPi - 0.5);
}

void check_square(const Eigen::MatrixXd& k, const ChannelPartition& part) {
  if (k.rows() != k.cols() || k.rows() != part.size() ||
      static_cast<int>(part.lambdas.size()) != part.size()) {
    throw DomainError("K matrix and channel partition sizes disagree");
  }
}

struct ClosedPhases {
  std::vector<int> open, closed;
  Eigen::VectorXd beta;
};

ClosedPhases phases(const ChannelPartition& part, double energy) {
  ClosedPhases p;
  p.open = part.open(energy);
  p.closed = part.closed(energy);
  p.beta.resize(p.closed.size());
  for (std::size_t j = 0; j < p.closed.size(); ++j) {
    const int c = p.closed[j];
    p.beta[j] = gqdt::beta_value(energy - part.thresholds[c], part.lambdas[c]);
  }
  return p;
}

// K_cc + tan(beta) and its energy derivative diagonal.
Eigen::MatrixXd pole_matrix(const Eigen::MatrixXd& k, const ClosedPhases& p) {
  Eigen::MatrixXd f = sub(k, p.closed, p.closed);
  for (std::size_t j = 0; j < p.closed.size(); ++j) f(j, j) += std::tan(p.beta[j]);
  return f;
}

}  // namespace

std::vector<int> ChannelPartition::open(double energy) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (energy >= thresholds[i]) out.push_back(i);
  }
  return out;
}

std::vector<int> ChannelPartition::closed(double energy) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (energy < thresholds[i]) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd eliminate_closed(const Eigen::MatrixXd& k, const ChannelPartition& part,
                                 double energy) {
  check_square(k, part);
  const ClosedPhases p = phases(part, energy);
  if (p.open.empty()) throw DomainError("eliminate_closed: no open channel at this energy");
  Eigen::MatrixXd k_oo = sub(k, p.open, p.open);
  if (p.closed.empty()) return k_oo;

  // (K_cc + tan b)^-1 = C (K_cc C + S)^-1 with C = cos b, S = sin b.
  const int nc = static_cast<int>(p.closed.size());
  Eigen::VectorXd c(nc), s(nc);
  for (int j = 0; j < nc; ++j) {
    c[j] = std::cos(p.beta[j]);
    s[j] = std::sin(p.beta[j]);
  }
  Eigen::MatrixXd a = sub(k, p.closed, p.closed) * c.asDiagonal();
  a.diagonal() += s;
  const Eigen::MatrixXd k_oc = sub(k, p.open, p.closed);
  const Eigen::MatrixXd k_co = sub(k, p.closed, p.open);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-300)) {
    throw SingularMatrixError("eliminate_closed: closed-channel matrix singular at E = " +
                              std::to_string(energy));
  }
  Eigen::MatrixXd out = k_oo - k_oc * c.asDiagonal() * lu.solve(k_co);
  out = 0.5 * (out + out.transpose()).eval();
  if (!out.allFinite()) throw SingularMatrixError("eliminate_closed: non-finite K at a pole");
  return out;
}

Eigen::MatrixXcd s_matrix(const Eigen::MatrixXd& k_phys) {
  const int n = static_cast<int>(k_phys.rows());
  const Eigen::MatrixXcd ik = std::complex<double>(0.0, 1.0) * k_phys.cast<std::complex<double>>();
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(n, n);
  return (one + ik) * (one - ik).inverse();
}

double eigenphase_raw(const Eigen::MatrixXd& k_phys) {
  if (k_phys.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k_phys, Eigen::EigenvaluesOnly);
  double t = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) t += std::atan(solver.eigenvalues()[i]);
  return t;
}

std::vector<double> eigenphase_sum(const std::vector<Eigen::MatrixXd>& k_grid) {
  std::vector<double> tau;
  tau.reserve(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (i > 0 && k_grid[i].rows() != k_grid[0].rows()) {
      throw DomainError("eigenphase_sum: open-channel count changes along the grid");
    }
    const double raw = eigenphase_raw(k_grid[i]);
    if (i == 0) {
      tau.push_back(raw);
      continue;
    }
    const double step = reduce_pi(raw - tau.back());
    if (std::abs(step) > kPi / 3.0) {
      throw UndersamplingError("eigenphase_sum: phase step " + std::to_string(step) +
                               " at grid index " + std::to_string(i));
    }
    tau.push_back(tau.back() + step);
  }
  return tau;
}

int pole_count(const Eigen::MatrixXd& k, const ChannelPartition& part, double energy) {
  check_square(k, part);
  const ClosedPhases p = phases(part, energy);
  if (p.closed.empty()) return 0;
  int passed = 0;
  for (Eigen::Index j = 0; j < p.beta.size(); ++j) {
    passed += static_cast<int>(std::floor((p.beta[j] - 0.5 * kPi) / kPi));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pole_matrix(k, p), Eigen::EigenvaluesOnly);
  int negative = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    if (solver.eigenvalues()[i] < 0.0) ++negative;
  }
  return passed - negative;
}

double width_estimate(double k_offdiag, double n) {
  if (!(n > 0.0)) throw DomainError("width_estimate: n must be positive");
  return 2.0 * k_offdiag * k_offdiag / (kPi * n * n * n);
}

namespace {

class Fitter {
 public:
  Fitter(const Eigen::MatrixXd& k, const ChannelPartition& part, double lo, double hi)
      : k_(k), part_(part), lo_(lo), hi_(hi) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  double tau(double e) const {
    for (int attempt = 0; attempt < 4; ++attempt) {
      try {
        return eigenphase_raw(eliminate_closed(k_, part_, e));
      } catch (const SingularMatrixError&) {
        e += 1e-12 * std::max(1.0, std::abs(e));
      }
    }
    throw SingularMatrixError("resonance fit: energy sits on a pole");
  }

  double dtau(double e, double h) const {
    return reduce_pi(tau(e + h) - tau(e - h)) / (2.0 * h);
  }

 private:
  const Eigen::MatrixXd& k_;
  const ChannelPartition& part_;
  double lo_, hi_;
};

struct Lorentz {
  double center = 0.0;
  double width = 0.0;
  double residual = 0.0;
  bool ok = false;
};

// Least-squares quadratic through 1/(dtau/dE) sampled on center + g*[-1.5, 1.5],
// with g narrowed so the samples stay inside the search window.
Lorentz fit_once(const Fitter& fit, double center, double g_in, int points) {
  Lorentz out;
  const double room = std::min(center - fit.lo(), fit.hi() - center) / 1.6;
  const double g = std::min(g_in, room);
  if (!(g > 1e-3 * g_in)) return out;
  const double h = std::max(1e-4 * g, 1e-15 * std::max(1.0, std::abs(center)));
  Eigen::MatrixXd a(points, 3);
  Eigen::VectorXd y(points), d(points), u(points);
  for (int i = 0; i < points; ++i) {
    u[i] = -1.5 + 3.0 * i / (points - 1);
    d[i] = fit.dtau(center + g * u[i], h);
    y[i] = 1.0 / d[i];
    a(i, 0) = u[i] * u[i];
    a(i, 1) = u[i];
    a(i, 2) = 1.0;
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(y);
  if (!(coef[0] > 0.0)) return out;
  const double u_star = -coef[1] / (2.0 * coef[0]);
  const double y_star = coef[2] - coef[1] * coef[1] / (4.0 * coef[0]);
  if (!(y_star > 0.0) || !std::isfinite(u_star)) return out;
  out.center = center + g * u_star;
  out.width = 2.0 * y_star;
  const double peak = 1.0 / y_star;
  double res = 0.0;
  for (int i = 0; i < points; ++i) {
    const double e = g * (u[i] - u_star);
    const double model = (0.5 * out.width) / (e * e + 0.25 * out.width * out.width);
    res = std::max(res, std::abs(d[i] - model) / peak);
  }
  out.residual = res;
  out.ok = true;
  return out;
}

Lorentz fit_resonance(const Fitter& fit, double center, double seed, int points) {
  double c = center, g = seed;
  Lorentz last;
  for (int iter = 0; iter < 12; ++iter) {
    const Lorentz l = fit_once(fit, c, g, points);
    if (!l.ok) {
      g *= 4.0;
      continue;
    }
    const bool done = std::abs(l.center - c) < 1e-3 * l.width && std::abs(l.width - g) < 1e-4 * g;
    c = l.center;
    g = l.width;
    last = l;
    if (done) break;
  }
  if (last.ok) {
    // Report the residual of a fit sampled on the converged window.
    const Lorentz final_fit = fit_once(fit, c, g, points);
    if (final_fit.ok) return final_fit;
  }
  return last;
}

}  // namespace

std::vector<Resonance> find_resonances(const Eigen::MatrixXd& k, const ChannelPartition& part,
                                       double e_lo, double e_hi, const SearchOptions& options) {
  check_square(k, part);
  if (!(e_lo < e_hi)) throw DomainError("find_resonances: empty window");
  if (options.fit_points < 9) throw DomainError("find_resonances: need at least 9 fit points");
  const auto closed = part.closed(e_lo);
  if (closed != part.closed(e_hi)) {
    throw DomainError("find_resonances: window straddles a channel threshold");
  }
  if (part.open(e_lo).empty()) throw DomainError("find_resonances: no open channel in window");
  if (closed.empty()) return {};

  // Isolate every zero of det(K_cc + tan beta) by bisection on the count.
  std::vector<double> poles;
  struct Interval {
    double a, b;
    int pa, pb;
  };
  std::vector<Interval> stack{{e_lo, e_hi, pole_count(k, part, e_lo), pole_count(k, part, e_hi)}};
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.pb <= iv.pa) continue;
    if (iv.b - iv.a < options.pole_tolerance) {
      for (int i = iv.pa; i < iv.pb; ++i) poles.push_back(0.5 * (iv.a + iv.b));
      continue;
    }
    const double mid = 0.5 * (iv.a + iv.b);
    const int pm = pole_count(k, part, mid);
    stack.push_back({mid, iv.b, pm, iv.pb});
    stack.push_back({iv.a, mid, iv.pa, pm});
  }
  std::sort(poles.begin(), poles.end());

  const Fitter fitter(k, part, e_lo, e_hi);
  std::vector<Resonance> out;
  for (double e_p : poles) {
    const ClosedPhases p = phases(part, e_p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pole_matrix(k, p));
    Eigen::Index arg = 0;
    solver.eigenvalues().cwiseAbs().minCoeff(&arg);
    const Eigen::VectorXd v = solver.eigenvectors().col(arg);
    const Eigen::VectorXd w = sub(k, p.open, p.closed) * v;
    const double coupling = w.squaredNorm();
    if (coupling < options.coupling_floor) continue;

    double slope = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const int c = p.closed[j];
      const double t = std::tan(p.beta[j]);
      const double db = kPi * gqdt::resonance_density(part.lambdas[c], e_p - part.thresholds[c]);
      slope += v[j] * v[j] * (1.0 + t * t) * db;
    }
    const double seed = 2.0 * coupling / slope;
    Eigen::Index parent_j = 0;
    v.cwiseAbs().maxCoeff(&parent_j);

    Resonance r;
    r.pole = e_p;
    r.parent = p.closed[parent_j];
    r.channel = r.parent < static_cast<int>(part.labels.size()) ? part.labels[r.parent]
                                                                : std::to_string(r.parent);
    const Lorentz l = fit_resonance(fitter, e_p, seed, options.fit_points);
    // A fit far from the perturbative seed means the peak was below the
    // resolution of the phase derivative.
    const bool plausible = l.ok && l.residual <= 0.05 && l.width >= 1e-2 * seed &&
                           l.width <= 1e2 * seed && std::abs(l.center - e_p) <= 10.0 * l.width;
    if (plausible) {
      r.position = l.center;
      r.width = l.width;
      r.fit_residual = l.residual;
    } else {
      log::debug("find_resonances: fit failed near E=", e_p, "; using perturbative width");
      r.position = e_p;
      r.width = seed;
      r.fit_residual = 1.0;
    }
    out.push_back(r);
  }

  std::sort(out.begin(), out.end(),
            [](const Resonance& a, const Resonance& b) { return a.position < b.position; });
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    const double gap = out[i + 1].position - out[i].position;
    if (gap < 3.0 * std::max(out[i].width, out[i + 1].width)) {
      out[i].overlapping = out[i + 1].overlapping = true;
      log::info("find_resonances: overlapping resonances near E=", out[i].position);
    }
  }
  return out;
}

}  // namespace gmqdt::dynamics
