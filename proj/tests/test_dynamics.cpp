#include <cmath>
#include <random>

#include "doctest.h"
#include "gmqdt/dynamics.hpp"
#include "gmqdt/error.hpp"
#include "gmqdt/gqdt.hpp"
#include "gmqdt/units.hpp"

using namespace gmqdt;
using doctest::Approx;

namespace {

constexpr double kPi = units::kPi;

// one open channel at 0, one closed lambda = 1 channel at 0.01 hartree
dynamics::ChannelPartition two_channel() {
  dynamics::ChannelPartition p;
  p.thresholds = {0.0, 0.01};
  p.lambdas = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
  p.labels = {"open", "closed"};
  return p;
}

Eigen::MatrixXd k2(double koo, double k, double kcc) {
  Eigen::MatrixXd m(2, 2);
  m << koo, k, k, kcc;
  return m;
}

}  // namespace

TEST_CASE("two-channel elimination in closed form") {
  const auto p = two_channel();
  const double k = 0.1;
  for (double e : {0.001, 0.0043, 0.0071, 0.0093}) {
    const double b = gqdt::beta_value(e - 0.01, Complex(1.0, 0.0));
    const auto kp = dynamics::eliminate_closed(k2(0.0, k, 0.0), p, e);
    REQUIRE(kp.rows() == 1);
    CHECK(kp(0, 0) == Approx(-k * k / std::tan(b)).epsilon(1e-12));
  }
  // above the upper threshold nothing is eliminated
  const auto all = dynamics::eliminate_closed(k2(0.1, 0.2, 0.3), p, 0.02);
  CHECK(all.rows() == 2);
  CHECK((all - k2(0.1, 0.2, 0.3)).norm() == 0.0);
}

TEST_CASE("no open channel") {
  const auto p = two_channel();
  CHECK_THROWS_AS(dynamics::eliminate_closed(k2(0, 0.1, 0), p, -0.001), DomainError);
}

TEST_CASE("random K: S unitary and K_phys symmetric") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 8);
  double worst_unitarity = 0.0, worst_symmetry = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    dynamics::ChannelPartition p;
    for (int i = 0; i < n; ++i) {
      p.thresholds.push_back(i == 0 ? 0.0 : 0.02 * (1.0 + u(rng)));
      p.lambdas.emplace_back(i % 3, 0.0);
    }
    if (trial % 4 == 0) p.lambdas[n - 1] = Complex(-0.5, 0.8857052642170372);
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) k(i, j) = k(j, i) = 0.3 * u(rng);
    const double e = 0.02 * (0.5 + 0.5 * u(rng)) + 1e-6;
    const auto kp = dynamics::eliminate_closed(k, p, e);
    const auto s = dynamics::s_matrix(kp);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    worst_unitarity = std::max(worst_unitarity, (s.adjoint() * s - id).cwiseAbs().maxCoeff());
    worst_symmetry = std::max(worst_symmetry, (kp - kp.transpose()).cwiseAbs().maxCoeff());
  }
  CHECK(worst_unitarity <= 1e-10);
  CHECK(worst_symmetry <= 1e-10);
}

TEST_CASE("eigenphase sum rises by pi across an isolated resonance") {
  const auto p = two_channel();
  const auto k = k2(0.0, 0.1, 0.0);
  std::vector<Eigen::MatrixXd> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(dynamics::eliminate_closed(k, p, 0.0049 + 0.0002 * i / 400.0));
  const auto tau = dynamics::eigenphase_sum(grid);
  CHECK(tau.back() - tau.front() == Approx(kPi).epsilon(0.02));
  for (std::size_t i = 1; i < tau.size(); ++i) CHECK(tau[i] >= tau[i - 1] - 1e-12);
}

TEST_CASE("coarse sampling across a resonance is flagged") {
  const auto p = two_channel();
  const auto k = k2(0.0, 0.1, 0.0);
  std::vector<Eigen::MatrixXd> grid;
  for (double e : {0.00499, 0.004997, 0.005003, 0.00501}) grid.push_back(dynamics::eliminate_closed(k, p, e));
  CHECK_THROWS_AS(dynamics::eigenphase_sum(grid), UndersamplingError);
}

TEST_CASE("two-channel analytic resonance") {
  const auto p = two_channel();
  const double lo = 0.0049, hi = 0.0051;
  const auto r1 = dynamics::find_resonances(k2(0.0, 0.1, 0.0), p, lo, hi);
  REQUIRE(r1.size() == 1);
  // S pole at nu = 10 - i atanh(k^2)/pi
  CHECK(std::abs(r1[0].position - 0.00500000151991883) <= 1e-8);
  CHECK(std::abs(r1[0].width / 6.36640865280971e-06 - 1.0) <= 0.01);
  CHECK(r1[0].channel == "closed");

  const auto r2 = dynamics::find_resonances(k2(0.0, 0.2, 0.0), p, lo, hi);
  REQUIRE(r2.size() == 1);
  CHECK(std::abs(r2[0].position - 0.00500002434298831) <= 1e-8);
  CHECK(std::abs(r2[0].width / 2.54783024733791e-05 - 1.0) <= 0.01);
  CHECK(std::abs(r2[0].width / r1[0].width / 4.0 - 1.0) <= 0.02);
}

TEST_CASE("perturbative width estimate within a factor of two") {
  const auto p = two_channel();
  for (double k : {0.05, 0.1, 0.2, 0.3}) {
    for (double koo : {0.0, 0.3}) {
      const auto r = dynamics::find_resonances(k2(koo, k, 0.2), p, 0.0001, 0.0095);
      REQUIRE_FALSE(r.empty());
      for (const auto& x : r) {
        const double nu = 1.0 / std::sqrt(2.0 * (0.01 - x.position));
        const double est = dynamics::width_estimate(k, nu);
        CHECK(est / x.width <= 2.0);
        CHECK(est / x.width >= 0.5);
      }
    }
  }
}

TEST_CASE("pole count is monotone") {
  const auto p = two_channel();
  const auto k = k2(0.1, 0.2, -0.4);
  int prev = dynamics::pole_count(k, p, 0.0001);
  for (int i = 1; i <= 2000; ++i) {
    const int c = dynamics::pole_count(k, p, 0.0001 + 0.0094 * i / 2000.0);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("window may not straddle a threshold") {
  CHECK_THROWS_AS(dynamics::find_resonances(k2(0, 0.1, 0), two_channel(), 0.005, 0.02), DomainError);
}

TEST_CASE("width estimate formula") {
  CHECK(dynamics::width_estimate(0.1, 10.0) == Approx(2.0 * 0.01 / (kPi * 1000.0)));
  CHECK_THROWS_AS(dynamics::width_estimate(0.1, 0.0), DomainError);
}
