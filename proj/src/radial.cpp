#include "gmqdt/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmqdt/error.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/numeric.hpp"

namespace gmqdt::radial {

namespace {

constexpr double kRescale = 1e120;

struct Grid {
  double x0 = 0.0;
  double h = 0.0;
  int n = 0;
  double r(int i) const { return std::exp(x0 + h * i); }
};

Grid make_grid(const RadialProblem& p) {
  Grid g;
  g.n = p.n_points;
  g.x0 = std::log(p.r_min);
  g.h = (std::log(p.r_max) - g.x0) / (p.n_points - 1);
  return g;
}

// w'' = F w in x = ln r for w = u / sqrt(r).
double big_f(const RadialProblem& p, double r) {
  return p.c + 0.25 - 2.0 * p.charge * r - 2.0 * p.energy * r * r;
}

void check_step(const RadialProblem& p, const Grid& g) {
  double f_max = std::max(std::abs(big_f(p, p.r_min)), std::abs(big_f(p, p.r_max)));
  // interior extremum of F at r = -Z/(2E)
  if (p.energy < 0.0) {
    const double r_star = -p.charge / (2.0 * p.energy);
    if (r_star > p.r_min && r_star < p.r_max) f_max = std::max(f_max, std::abs(big_f(p, r_star)));
  }
  const double est = std::pow(g.h * g.h * f_max, 3) / 240.0;
  if (est > 1e-9) {
    throw StepSizeError("integrate_radial: local truncation estimate " + std::to_string(est) +
                        " exceeds 1e-9; increase n_points");
  }
}

// Values on the log grid together with a per-point log scale, so that
// w_true(i) = w(i) * exp(scale(i)).
struct Raw {
  std::vector<double> w;
  std::vector<double> scale;
};

Raw numerov(const RadialProblem& p, const Grid& g, int from, int to, double w_from,
            double w_next) {
  const int step = to >= from ? 1 : -1;
  Raw out;
  out.w.assign(g.n, 0.0);
  out.scale.assign(g.n, 0.0);
  const double h2 = g.h * g.h / 12.0;
  auto t = [&](int i) { return 1.0 - h2 * big_f(p, g.r(i)); };

  double prev = w_from, cur = w_next, s = 0.0;
  out.w[from] = prev;
  out.w[from + step] = cur;
  double t_prev = t(from), t_cur = t(from + step);
  for (int i = from + step; i != to; i += step) {
    const int next = i + step;
    const double t_next = t(next);
    const double val = ((12.0 - 10.0 * t_cur) * cur - t_prev * prev) / t_next;
    prev = cur;
    cur = val;
    t_prev = t_cur;
    t_cur = t_next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      s += std::log(kRescale);
    }
    out.w[next] = cur;
    out.scale[next] = s;
  }
  return out;
}

// Regular series start u = r^(lambda+1) sum a_k r^k, returned as w = u/sqrt(r).
double series_start(const RadialProblem& p, double r) {
  const double lambda = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * p.c));
  double a_prev2 = 0.0, a_prev = 1.0, sum = 1.0, rk = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double a = (-2.0 * p.charge * a_prev - 2.0 * p.energy * a_prev2) /
                     (k * (2.0 * lambda + 1.0 + k));
    rk *= r;
    const double term = a * rk;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    a_prev2 = a_prev;
    a_prev = a;
  }
  return std::pow(r, lambda + 0.5) * sum;
}

std::pair<double, double> inner_start(const RadialProblem& p, const Grid& g) {
  if (p.inner == InnerBoundary::HardWall) return {0.0, g.h};
  const double w0 = series_start(p, g.r(0));
  const double w1 = series_start(p, g.r(1));
  const double norm = std::max(std::abs(w0), std::abs(w1));
  return {w0 / norm, w1 / norm};
}

// log|w_true| and sign, for recombining pieces with different scales.
double log_abs(const Raw& raw, int i) {
  return std::log(std::abs(raw.w[i])) + raw.scale[i];
}

RadialSolution finish(const RadialProblem& p, const Grid& g, const std::vector<double>& w,
                      const std::vector<double>& scale) {
  // Bring everything onto a common scale with max |u| = 1.
  double log_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n; ++i) {
    if (w[i] == 0.0) continue;
    const double lu = std::log(std::abs(w[i])) + scale[i] + 0.5 * (g.x0 + g.h * i);
    log_max = std::max(log_max, lu);
  }
  std::vector<double> wn(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    if (w[i] == 0.0) continue;
    // w_true / exp(log_max), underflows harmlessly to 0 deep in the tails
    const double lw = std::log(std::abs(w[i])) + scale[i] - log_max;
    wn[i] = std::copysign(std::exp(lw), w[i]);
  }

  // Numerov-consistent derivative; the end points use a ghost value one
  // step outside the grid, continued with the same recurrence.
  const double h2 = g.h * g.h / 6.0;
  auto r_at = [&](int i) { return std::exp(g.x0 + g.h * i); };
  auto t12 = [&](int i) { return 1.0 - g.h * g.h / 12.0 * big_f(p, r_at(i)); };
  auto value = [&](int i) {
    if (i < 0) return ((12.0 - 10.0 * t12(0)) * wn[0] - t12(1) * wn[1]) / t12(-1);
    if (i >= g.n) {
      const int l = g.n - 1;
      return ((12.0 - 10.0 * t12(l)) * wn[l] - t12(l - 1) * wn[l - 1]) / t12(g.n);
    }
    return wn[i];
  };
  std::vector<double> dw(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double up = value(i + 1) * (1.0 - h2 * big_f(p, r_at(i + 1)));
    const double dn = value(i - 1) * (1.0 - h2 * big_f(p, r_at(i - 1)));
    dw[i] = (up - dn) / (2.0 * g.h);
  }

  RadialSolution sol;
  sol.r.resize(g.n);
  sol.u.resize(g.n);
  sol.du.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double r = g.r(i);
    const double sr = std::sqrt(r);
    sol.r[i] = r;
    sol.u[i] = sr * wn[i];
    sol.du[i] = (dw[i] + 0.5 * wn[i]) / sr;
  }
  int nodes = 0;
  double last = 0.0;
  for (int i = 1; i + 1 < g.n; ++i) {
    if (w[i] == 0.0) continue;
    if (last != 0.0 && (w[i] > 0.0) != (last > 0.0)) ++nodes;
    last = w[i];
  }
  sol.nodes = nodes;
  return sol;
}

int turning_index(const RadialProblem& p, const Grid& g) {
  // Outer classical turning point of c/(2r^2) - Z/r = E.
  double rt = 0.5 * (p.r_min + p.r_max);
  if (p.energy < 0.0) {
    const double disc = p.charge * p.charge + 2.0 * p.energy * p.c;
    if (disc >= 0.0) rt = (p.charge + std::sqrt(disc)) / (-2.0 * p.energy);
  }
  int i = static_cast<int>(std::lround((std::log(rt) - g.x0) / g.h));
  return std::clamp(i, g.n / 10, g.n - g.n / 10);
}

// Outward and inward pieces glued at index m, with the inward piece scaled
// to match the outward value there.
RadialSolution matched(const RadialProblem& p, const Grid& g, int m) {
  const auto [w0, w1] = inner_start(p, g);
  const Raw out = numerov(p, g, 0, m + 1, w0, w1);
  const Raw in = numerov(p, g, g.n - 1, m - 1, 0.0, 1.0);
  std::vector<double> w(g.n), scale(g.n);
  for (int i = 0; i <= m; ++i) {
    w[i] = out.w[i];
    scale[i] = out.scale[i];
  }
  // Match at m if the outward value is not a node, else at m - 1.
  int k = (out.w[m] != 0.0 && in.w[m] != 0.0) ? m : m - 1;
  const double shift = log_abs(out, k) - log_abs(in, k);
  const double sign = ((out.w[k] > 0.0) == (in.w[k] > 0.0)) ? 1.0 : -1.0;
  for (int i = m + 1; i < g.n; ++i) {
    w[i] = sign * in.w[i];
    scale[i] = in.scale[i] + shift;
  }
  return finish(p, g, w, scale);
}

}  // namespace

void RadialProblem::validate() const {
  if (!(r_min > 0.0 && r_min < r_max)) throw DomainError("radial problem needs 0 < r_min < r_max");
  if (n_points < 1000) throw DomainError("radial problem needs n_points >= 1000");
  if (!std::isfinite(c) || !std::isfinite(energy) || !std::isfinite(charge)) {
    throw DomainError("radial problem parameters must be finite");
  }
  if (inner == InnerBoundary::Regular && c < -0.25) {
    throw DomainError("c < -1/4 falls to the centre; use an inner hard wall");
  }
}

double default_r_max(double nu) { return std::max(20.0 * nu, 2.0 * nu * nu + 40.0 * nu); }

RadialSolution integrate_radial(const RadialProblem& problem, Direction direction) {
  problem.validate();
  const Grid g = make_grid(problem);
  check_step(problem, g);
  switch (direction) {
    case Direction::Outward: {
      const auto [w0, w1] = inner_start(problem, g);
      const Raw raw = numerov(problem, g, 0, g.n - 1, w0, w1);
      return finish(problem, g, raw.w, raw.scale);
    }
    case Direction::Inward: {
      const Raw raw = numerov(problem, g, g.n - 1, 0, 0.0, 1.0);
      return finish(problem, g, raw.w, raw.scale);
    }
    case Direction::Matched:
      return matched(problem, g, turning_index(problem, g));
  }
  throw DomainError("integrate_radial: unknown direction");
}

namespace {

class Shooter {
 public:
  Shooter(RadialProblem base) : base_(std::move(base)), grid_(make_grid(base_)) {
    check_step(base_, grid_);
  }

  int count(double energy) const {
    RadialProblem p = base_;
    p.energy = energy;
    const auto [w0, w1] = inner_start(p, grid_);
    const Raw raw = numerov(p, grid_, 0, grid_.n - 1, w0, w1);
    int nodes = 0;
    double last = 0.0;
    for (int i = 1; i < grid_.n; ++i) {
      if (raw.w[i] == 0.0) continue;
      if (last != 0.0 && (raw.w[i] > 0.0) != (last > 0.0)) ++nodes;
      last = raw.w[i];
    }
    return nodes;
  }

  // Normalized Wronskian of the outward and inward pieces at index m.
  double mismatch(double energy, int m) const {
    RadialProblem p = base_;
    p.energy = energy;
    const auto [w0, w1] = inner_start(p, grid_);
    const Raw out = numerov(p, grid_, 0, m + 1, w0, w1);
    const Raw in = numerov(p, grid_, grid_.n - 1, m - 1, 0.0, 1.0);
    // The values at m +- 1 of one piece share a scale unless a rescale
    // landed exactly there; divide it out per piece.
    auto unit = [&](const Raw& raw, double& v, double& d) {
      const double a = raw.w[m - 1] * std::exp(raw.scale[m - 1] - raw.scale[m]);
      const double b = raw.w[m + 1] * std::exp(raw.scale[m + 1] - raw.scale[m]);
      v = raw.w[m];
      d = (b - a) / (2.0 * grid_.h);
      const double n = std::hypot(v, d);
      v /= n;
      d /= n;
    };
    double vo, dout, vi, din;
    unit(out, vo, dout);
    unit(in, vi, din);
    return dout * vi - din * vo;
  }

  int match_index(double energy) const {
    RadialProblem p = base_;
    p.energy = energy;
    return turning_index(p, grid_);
  }

  std::vector<double> solve(double e_lo, double e_hi, double tol) const {
    const int n_lo = count(e_lo);
    const int n_hi = count(e_hi);
    std::vector<double> out;
    for (int k = n_lo; k < n_hi; ++k) {
      double a = e_lo, b = e_hi;
      int ca = n_lo, cb = n_hi;
      int guard = 0;
      while (!(ca == k && cb == k + 1)) {
        if (++guard > 200) throw ConvergenceError("shoot_bound_states: node bracketing failed");
        const double mid = 0.5 * (a + b);
        const int cm = count(mid);
        if (cm > k) {
          b = mid;
          cb = cm;
        } else {
          a = mid;
          ca = cm;
        }
      }
      const int m = match_index(0.5 * (a + b));
      auto f = [&](double e) { return mismatch(e, m); };
      double fa = f(a), fb = f(b);
      if (fa == 0.0) {
        out.push_back(a);
        continue;
      }
      if (fb == 0.0) {
        out.push_back(b);
        continue;
      }
      if ((fa > 0.0) == (fb > 0.0)) {
        // Mismatch zero sits on the node-count boundary; fall back to it.
        while (b - a > tol) {
          const double mid = 0.5 * (a + b);
          if (count(mid) > k) b = mid; else a = mid;
        }
        out.push_back(0.5 * (a + b));
        continue;
      }
      out.push_back(numeric::bracketed_root(f, a, b, tol));
    }
    return out;
  }

 private:
  RadialProblem base_;
  Grid grid_;
};

int initial_points(double c, double r_min, double r_max, double e_lo) {
  const double span = std::log(r_max) - std::log(r_min);
  const double f_max = std::max(std::abs(c + 0.25 - 2.0 * r_min - 2.0 * e_lo * r_min * r_min),
                                std::abs(c + 0.25 - 2.0 * r_max - 2.0 * e_lo * r_max * r_max));
  // Truncation estimate below 1e-9 with a margin, and at least ~30 points
  // per local wavelength.
  const double h_trunc = 0.5 * std::sqrt(std::cbrt(240e-9) / f_max);
  const double h_wave = 0.2 / std::sqrt(f_max);
  const double h = std::min(h_trunc, h_wave);
  return std::max(1000, static_cast<int>(std::ceil(span / h)) + 1);
}

}  // namespace

ShootingResult shoot_bound_states(double c, double e_lo, double e_hi,
                                  const ShootingOptions& options) {
  if (!(e_lo < e_hi && e_hi < 0.0)) {
    throw DomainError("shoot_bound_states: window must satisfy e_lo < e_hi < 0");
  }
  RadialProblem base;
  base.c = c;
  base.charge = options.charge;
  base.r_min = options.r_min;
  base.inner = options.inner;
  base.energy = e_hi;
  const double nu_hi = 1.0 / std::sqrt(-2.0 * e_hi);
  base.r_max = default_r_max(nu_hi);
  base.n_points = options.n_points > 0
                      ? options.n_points
                      : initial_points(c, base.r_min, base.r_max, e_lo);
  base.validate();

  auto run = [&](int n) {
    RadialProblem p = base;
    p.n_points = n;
    return Shooter(p).solve(e_lo, e_hi, options.energy_tolerance);
  };

  int n = base.n_points;
  std::vector<double> coarse = run(n);
  for (int doubling = 0; doubling < options.max_doublings; ++doubling) {
    const int n_fine = 2 * n - 1;
    std::vector<double> fine = run(n_fine);
    double change = std::numeric_limits<double>::infinity();
    if (fine.size() == coarse.size()) {
      change = 0.0;
      for (std::size_t i = 0; i < fine.size(); ++i) {
        change = std::max(change, std::abs(fine[i] - coarse[i]));
      }
    }
    log::debug("shoot_bound_states: n=", n_fine, " states=", fine.size(), " change=", change);
    if (change < options.grid_tolerance) return {fine, n_fine, change};
    coarse = std::move(fine);
    n = n_fine;
  }
  throw ConvergenceError("shoot_bound_states: grid doubling did not converge to " +
                         std::to_string(options.grid_tolerance));
}

AsymptoticValue asymptotic_forms(double c, double energy, double charge, double r) {
  if (!(energy < 0.0)) throw DomainError("asymptotic_forms: energy must be negative");
  const double kappa = std::sqrt(-2.0 * energy);
  AsymptoticValue v;
  v.truncation = 0.0;
  for (int branch = 0; branch < 2; ++branch) {
    const double s = branch == 0 ? -kappa : kappa;
    const double p = -charge / s;
    // u = e^(s r) r^p sum a_n r^-n; asymptotic, truncated at its smallest term
    double a = 1.0, sum = 1.0, dsum = s + p / r, prev_term = 1.0;
    double smallest = 1.0;
    for (int n = 1; n < 400; ++n) {
      a *= ((p - n + 1.0) * (p - n) - c) / (2.0 * s * n);
      const double term = a * std::pow(r, -n);
      if (term == 0.0) {
        smallest = 0.0;
        break;
      }
      if (std::abs(term) > std::abs(prev_term)) break;
      sum += term;
      dsum += term * (s + (p - n) / r);
      smallest = std::abs(term);
      prev_term = term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    const double pre = std::exp(s * r + p * std::log(r));
    if (branch == 0) {
      v.f_plus = pre * sum;
      v.df_plus = pre * dsum;
    } else {
      v.f_minus = pre * sum;
      v.df_minus = pre * dsum;
    }
    v.truncation = std::max(v.truncation, smallest / std::abs(sum));
  }
  return v;
}

AsymptoticDecomposition asymptotic_decompose(const RadialSolution& solution,
                                             const RadialProblem& problem,
                                             double zone_fraction) {
  const std::size_t n = solution.r.size();
  if (n < 10 || solution.u.size() != n || solution.du.size() != n) {
    throw DomainError("asymptotic_decompose: malformed solution");
  }
  if (!(zone_fraction > 0.0 && zone_fraction < 1.0)) {
    throw DomainError("asymptotic_decompose: zone fraction must lie in (0, 1)");
  }
  const double r_first = solution.r.front();
  const double r_last = solution.r.back();
  const double r_zone = r_last - zone_fraction * (r_last - r_first);
  const double disc = problem.charge * problem.charge + 2.0 * problem.energy * problem.c;
  const double r_turn =
      disc >= 0.0 ? (problem.charge + std::sqrt(disc)) / (-2.0 * problem.energy) : 0.0;
  if (r_zone <= r_turn) {
    throw ZoneError("asymptotic zone starts at r = " + std::to_string(r_zone) +
                    " inside the turning point r = " + std::to_string(r_turn));
  }

  std::vector<double> wp, wm, wpm, fp, fm, u;
  double u_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (solution.r[i] < r_zone) continue;
    const auto f = asymptotic_forms(problem.c, problem.energy, problem.charge, solution.r[i]);
    if (f.truncation > 1e-10) {
      throw ZoneError("asymptotic series not converged at r = " + std::to_string(solution.r[i]));
    }
    const double ui = solution.u[i], dui = solution.du[i];
    wp.push_back(f.f_plus * dui - ui * f.df_plus);
    wm.push_back(f.f_minus * dui - ui * f.df_minus);
    wpm.push_back(f.f_plus * f.df_minus - f.f_minus * f.df_plus);
    fp.push_back(f.f_plus);
    fm.push_back(f.f_minus);
    u.push_back(ui);
    u_max = std::max(u_max, std::abs(ui));
  }
  if (wp.size() < 2) throw ZoneError("asymptotic zone holds fewer than two points");

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  AsymptoticDecomposition d;
  d.zone_start = r_zone;
  d.wronskians.w_plus = mean(wp);
  d.wronskians.w_minus = mean(wm);
  const double w_pm = mean(wpm);  // 2 kappa
  d.a_minus = d.wronskians.w_plus / w_pm;
  d.a_plus = -d.wronskians.w_minus / w_pm;
  // Spread against the Wronskian scale of u, so a vanishing W(f+, u) of a
  // bound state is not measured relative to its own round-off.
  const double scale = std::abs(w_pm) * std::max(std::abs(d.a_plus), std::abs(d.a_minus));
  auto spread = [&](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return scale > 0.0 ? (*hi - *lo) / scale : std::numeric_limits<double>::infinity();
  };
  d.wronskians.variation_plus = spread(wp);
  d.wronskians.variation_minus = spread(wm);
  double res = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    res = std::max(res, std::abs(u[i] - d.a_plus * fp[i] - d.a_minus * fm[i]));
  }
  d.residual = u_max > 0.0 ? res / u_max : 0.0;
  return d;
}

}  // namespace gmqdt::radial
