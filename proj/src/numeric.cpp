#include "gmqdt/numeric.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>

#include "gmqdt/error.hpp"

namespace gmqdt::numeric {

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int k = 0; k < order; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.nodes[k] = mid + half * es.eigenvalues()[k];
    rule.weights[k] = 2.0 * v0 * v0 * half;
  }
  return rule;
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double x_tolerance) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoRootError("bracketed_root: endpoints do not bracket a sign change");
  }
  auto tol = [x_tolerance](double x0, double x1) { return std::abs(x1 - x0) <= x_tolerance; };
  std::uintmax_t max_iter = 400;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

double wrap_centered(double x) {
  double r = x - std::floor(x + 0.5);
  if (r <= -0.5) r += 1.0;
  return r;
}

}  // namespace gmqdt::numeric
