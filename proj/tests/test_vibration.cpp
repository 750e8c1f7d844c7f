#include <cmath>

#include "doctest.h"
#include "gmqdt/error.hpp"
#include "gmqdt/numeric.hpp"
#include "gmqdt/vibration.hpp"

using namespace gmqdt;
using doctest::Approx;

namespace {

vibration::VibrationalModel harmonic() {
  vibration::VibrationalModel m;
  m.omega_bend = 3.8e-3;
  m.omega_stretch = 1.0;  // keeps stretch excitations out of the low states
  return m;
}

}  // namespace

TEST_CASE("bend functions are orthonormal with weight q") {
  const auto rule = numeric::gauss_legendre(200, 0.0, 14.0);
  for (int m : {0, 1, 3}) {
    double g[8][8] = {};
    double chi[8];
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      vibration::bend_functions(7, m, rule.nodes[i], chi);
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) g[a][b] += rule.weights[i] * rule.nodes[i] * chi[a] * chi[b];
    }
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) CHECK(g[a][b] == Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("stretch functions are orthonormal") {
  const auto rule = numeric::gauss_legendre(200, -12.0, 12.0);
  double g[6][6] = {};
  double h[6];
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    vibration::stretch_functions(5, rule.nodes[i], h);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) g[a][b] += rule.weights[i] * h[a] * h[b];
  }
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) CHECK(g[a][b] == Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("harmonic limit of the 2D bend") {
  const auto m = harmonic();
  const double w = m.omega_bend, zero = 0.5 * m.omega_stretch;
  const auto s0 = vibration::solve_vibrational(m, 3.27, 8, 0, 4);
  for (int l = 0; l < 4; ++l) CHECK(s0.states[l].energy - zero == Approx(w * (2 * l + 1)).epsilon(1e-12));
  const auto s1 = vibration::solve_vibrational(m, 3.27, 8, 1, 2);
  CHECK(s1.states[0].energy - zero == Approx(2.0 * w).epsilon(1e-12));
  const auto sm = vibration::solve_vibrational(m, 3.27, 8, -1, 2);
  CHECK(sm.states[0].energy == s1.states[0].energy);
}

TEST_CASE("anharmonic bend against a dense-grid oracle") {
  auto m = harmonic();
  m.quartic = 0.05;
  // finite-volume grid diagonalization with Richardson extrapolation
  const double expect[3][4] = {
      {3.820488022136778e-03, 1.154167787378388e-02, 1.937941037561689e-02, 2.732906042263575e-02},
      {7.661144384295550e-03, 1.544132865089908e-02, 2.333567455354350e-02, 3.133979129640425e-02},
      {1.152166227434071e-02, 1.935983454258303e-02, 2.730989554576212e-02, 3.536767177411373e-02},
  };
  for (int mphi = 0; mphi < 3; ++mphi) {
    const auto s = vibration::solve_vibrational(m, 3.27, 16, mphi, 4);
    CHECK(s.change < 1e-8);
    for (int l = 0; l < 4; ++l) {
      const double e = s.states[l].energy - 0.5 * m.omega_stretch;
      CHECK(std::abs(e / expect[mphi][l] - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("states are orthonormal and ordered") {
  auto m = harmonic();
  m.quartic = 0.05;
  m.omega_stretch = 1e-2;
  const auto s = vibration::solve_vibrational(m, 3.27, 16, 1, 6);
  for (std::size_t a = 0; a < s.states.size(); ++a) {
    if (a > 0) CHECK(s.states[a].energy >= s.states[a - 1].energy);
    for (std::size_t b = 0; b < s.states.size(); ++b) {
      const double bend = s.states[a].bend.dot(s.states[b].bend);
      const double stretch = s.states[a].stretch_v == s.states[b].stretch_v ? 1.0 : 0.0;
      CHECK(bend * stretch == Approx(a == b ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("frequency and length scale follow R_GH") {
  auto m = harmonic();
  m.omega_bend_slope = -1e-3;
  CHECK(m.omega_bend_at(4.27) == Approx(2.8e-3));
  CHECK(m.theta_scale_at(4.27) == Approx(0.12 * std::sqrt(3.8 / 2.8)));
  m.omega_bend_slope = -1e-2;
  CHECK_THROWS_AS(m.omega_bend_at(4.27), DomainError);
}

TEST_CASE("basis size guard") {
  CHECK_THROWS_AS(vibration::solve_vibrational(harmonic(), 3.27, 2, 0, 2), DomainError);
}
