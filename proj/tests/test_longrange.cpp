#include "doctest.h"
#include "gmqdt/longrange.hpp"

using namespace gmqdt;
using doctest::Approx;

namespace {
const auto kD39 = longrange::DipoleStrength::from_debye(3.9);
}

TEST_CASE("zero dipole keeps the Coulomb partial waves") {
  const auto ch = longrange::effective_channels(longrange::DipoleStrength::from_debye(0.0));
  const double expect[] = {0, 1, 1, 1, 2};
  for (int i = 0; i < kNumChannels; ++i) {
    CHECK(ch[i].lambda.real() == Approx(expect[i]).epsilon(1e-14));
    CHECK(ch[i].lambda.imag() == 0.0);
    CHECK(ch[i].mixing_fraction == Approx(1.0));
  }
}

TEST_CASE("reduced dipole of 3.9 debye") {
  CHECK(kD39.reduced == Approx(0.8858729739883704).epsilon(1e-14));
}

TEST_CASE("sigma block eigenchannels at 3.9 debye") {
  const auto ch = longrange::effective_channels(kD39);
  const auto& p = ch[static_cast<int>(Channel::PSigma)];
  const auto& s = ch[static_cast<int>(Channel::SSigma)];
  CHECK(p.lambda.real() == Approx(1.312311732308151).epsilon(1e-13));
  CHECK(p.lambda.imag() == 0.0);
  CHECK(s.lambda.real() == Approx(-0.5).epsilon(1e-14));
  CHECK(s.lambda.imag() == Approx(0.8857052642170372).epsilon(1e-13));
  CHECK(s.complex_lambda());
  CHECK(p.centrifugal_coefficient == Approx(3.034473815061772).epsilon(1e-13));
  CHECK(s.centrifugal_coefficient == Approx(-1.034473815061772).epsilon(1e-13));
  CHECK(p.mixing_fraction == Approx(0.745763792238741).epsilon(1e-12));
  // pi and d channels are untouched
  CHECK(ch[1].lambda.real() == 1.0);
  CHECK(ch[3].lambda.real() == 1.0);
  CHECK(ch[4].lambda.real() == 2.0);
}

TEST_CASE("centrifugal coefficient is lambda(lambda+1) and real") {
  for (double d : {0.0, 0.1, 0.3, 0.375, 0.5, 0.8858729739883704, 2.0}) {
    const auto ch = longrange::effective_channels(longrange::DipoleStrength::from_reduced(d));
    for (const auto& c : ch) {
      const Complex ll = c.lambda * (c.lambda + 1.0);
      CHECK(ll.real() == Approx(c.centrifugal_coefficient).epsilon(1e-12));
      CHECK(std::abs(ll.imag()) < 1e-12);
    }
  }
}

TEST_CASE("critical dipole") {
  CHECK(longrange::critical_dipole().reduced == Approx(0.375).epsilon(1e-15));
  const auto below = longrange::effective_channels(longrange::DipoleStrength::from_reduced(0.375 - 1e-6));
  const auto above = longrange::effective_channels(longrange::DipoleStrength::from_reduced(0.375 + 1e-6));
  CHECK_FALSE(below[0].complex_lambda());
  CHECK(above[0].complex_lambda());
  CHECK(below[0].centrifugal_coefficient == Approx(-0.25).epsilon(1e-5));
  CHECK(above[0].centrifugal_coefficient == Approx(-0.25).epsilon(1e-5));
}

TEST_CASE("sigma block rotation is orthogonal and diagonalizes the block") {
  for (double d : {0.05, 0.3, 0.8858729739883704}) {
    const auto block = longrange::build_sigma_block(longrange::DipoleStrength::from_reduced(d));
    const auto eig = longrange::diagonalize_block(block);
    const Eigen::Matrix2d r = eig.rotation;
    CHECK((r.transpose() * r - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    const Eigen::Matrix2d diag = r.transpose() * block.coefficients * r;
    CHECK(std::abs(diag(0, 1)) < 1e-13);
    // the block holds lambda(lambda+1)/2
    CHECK(2.0 * diag(0, 0) == Approx(eig.s_tilde.centrifugal_coefficient).epsilon(1e-13));
    CHECK(2.0 * diag(1, 1) == Approx(eig.p_tilde.centrifugal_coefficient).epsilon(1e-13));
  }
}
