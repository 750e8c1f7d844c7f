#pragma once

#include <functional>
#include <vector>

namespace gmqdt::numeric {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b] (Golub-Welsch).
QuadratureRule gauss_legendre(int order, double a = -1.0, double b = 1.0);

// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign, solved to an
// absolute tolerance in x. Throws NoRootError if the bracket is invalid.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double x_tolerance);

// Reduce x into [0, 1).
double wrap_unit(double x);
// Reduce x into (-1/2, 1/2].
double wrap_centered(double x);

}  // namespace gmqdt::numeric
