#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gmqdt/bodyframe.hpp"
#include "gmqdt/error.hpp"
#include "gmqdt/gqdt.hpp"
#include "gmqdt/units.hpp"

using namespace gmqdt;
using bodyframe::Matrix5;
using doctest::Approx;

namespace {

bodyframe::DefectSurface constant(double mu, double theta2 = 0.0) {
  bodyframe::DefectSurface s;
  s.terms.push_back({0, 0, 0, mu});
  if (theta2 != 0.0) s.terms.push_back({0, 0, 1, theta2});
  return s;
}

bodyframe::BodyFrameModel model(double gamma0 = 0.01, double delta0 = 0.02) {
  bodyframe::BodyFrameModel m;
  m.surfaces.surfaces = {constant(0.35, 0.02), constant(0.70, -0.08), constant(0.85, -0.05),
                         constant(0.70, 0.08), constant(0.05, 0.01)};
  m.electronic = {-0.30, 0.0, -0.10, 0.0, 0.20};
  m.rt = {gamma0, delta0};
  m.dipole = longrange::DipoleStrength::from_debye(3.9);
  return m;
}

bodyframe::GeometryQ at(double theta) {
  bodyframe::GeometryQ q;
  q.theta = theta;
  return q;
}

// Cyclic Jacobi rotations for a symmetric matrix; columns of v are eigenvectors.
void jacobi(Matrix5 a, Eigen::Matrix<double, 5, 1>& w, Matrix5& v) {
  v = Matrix5::Identity();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 5; ++p)
      for (int q = p + 1; q < 5; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-34) break;
    for (int p = 0; p < 5; ++p) {
      for (int q = p + 1; q < 5; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < 5; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 5; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < 5; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  w = a.diagonal();
}

}  // namespace

TEST_CASE("defect surfaces evaluate the polynomial") {
  bodyframe::DefectSurface s;
  s.terms = {{0, 0, 0, 0.3}, {1, 0, 0, 0.5}, {0, 1, 0, -0.2}, {1, 1, 1, 2.0}};
  CHECK(s.eval(0.1, -0.2, 0.3) == Approx(0.3 + 0.05 + 0.04 + 2.0 * 0.1 * -0.2 * 0.09).epsilon(1e-15));
}

TEST_CASE("dipole off returns the surfaces unchanged") {
  const auto mu = bodyframe::eval_defects(model(), at(0.2), false);
  CHECK(mu[2] == Approx(0.85 - 0.05 * 0.04).epsilon(1e-15));
  CHECK(mu[1] == Approx(0.70 - 0.08 * 0.04).epsilon(1e-15));
}

TEST_CASE("dipole on re-extracts the sigma defects") {
  const auto mu = bodyframe::eval_defects(model(), at(0.0), true);
  CHECK(mu[2] == Approx(1.162311732308151).epsilon(1e-12));
  CHECK(mu[0] == Approx(0.05440126654254698).epsilon(1e-9));
  CHECK(mu[1] == 0.70);
  CHECK(mu[4] == 0.05);
}

TEST_CASE("round trip of the p~sigma level energy") {
  // The level carried by the dipole-on defect is the Coulomb 3p level of
  // the dipole-off defect.
  const auto m = model();
  const double mu_on = bodyframe::eval_defects(m, at(0.0), true)[2];
  const auto lambda_p = bodyframe::channel_lambdas(m, true)[2];
  const double energy = gqdt::bound_energy(lambda_p, mu_on - std::floor(mu_on), 0);
  CHECK(energy == Approx(-0.5 / (2.15 * 2.15)).epsilon(1e-10));
  const double mu_off = gqdt::quantum_defect_from_energy(energy, 3, gqdt::Complex(1.0, 0.0));
  CHECK(std::abs(mu_off - 0.85) <= 1e-9);
}

TEST_CASE("U is the identity without bend couplings") {
  auto m = model(0.0, 0.0);
  CHECK(bodyframe::build_U(m, at(0.3)) == Matrix5::Identity());
  const auto k = bodyframe::kmatrix_bodyframe(m, at(0.3), false);
  for (int i = 0; i < 5; ++i) {
    CHECK(k.k(i, i) == Approx(std::tan(units::kPi * k.mu[i])).epsilon(1e-14));
  }
  CHECK((k.k - Matrix5(k.k.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("U against a Jacobi eigensolver") {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix5 t = Matrix5::Identity();
  t(1, 1) = -s;
  t(1, 3) = s;
  t(3, 1) = s;
  t(3, 3) = s;
  for (double theta : {0.05, 0.2, 0.5, 1.0}) {
    const auto m = model(0.3, 0.4);
    const Matrix5 u = bodyframe::build_U(m, at(theta));
    CHECK((u * u.transpose() - Matrix5::Identity()).norm() < 1e-13);
    const Matrix5 mm = bodyframe::coupling_matrix(m, at(theta));
    const Matrix5 d = u * mm * u.transpose();
    CHECK((d - Matrix5(d.diagonal().asDiagonal())).norm() < 1e-12);

    Eigen::Matrix<double, 5, 1> w;
    Matrix5 v;
    jacobi(t * mm * t.transpose(), w, v);
    const Matrix5 rows = u * t.transpose();  // eigenvectors in the rotated basis
    for (int a = 0; a < 5; ++a) {
      // find the Jacobi vector with the same eigenvalue
      int best = 0;
      for (int b = 1; b < 5; ++b) {
        if (std::abs(w[b] - d(a, a)) < std::abs(w[best] - d(a, a))) best = b;
      }
      CHECK(w[best] == Approx(d(a, a)).epsilon(1e-12));
      const double overlap = std::abs(rows.row(a).dot(v.col(best)));
      CHECK(overlap == Approx(1.0).epsilon(1e-12));
      // sign convention: positive component in its own slot
      CHECK(rows(a, a) > 0.0);
    }
  }
}

TEST_CASE("K is symmetric and equals U^T tan U") {
  const auto m = model();
  for (double theta : {0.0, 0.1, 0.3, 0.5}) {
    for (bool on : {false, true}) {
      const auto k = bodyframe::kmatrix_bodyframe(m, at(theta), on);
      CHECK((k.k - k.k.transpose()).norm() == 0.0);
      const Matrix5 u = bodyframe::build_U(m, at(theta));
      Eigen::Matrix<double, 5, 1> tans;
      for (int i = 0; i < 5; ++i) tans[i] = std::tan(units::kPi * k.mu[i]);
      CHECK((k.k - u.transpose() * tans.asDiagonal() * u).norm() < 1e-13);
    }
  }
}

TEST_CASE("pole of tan pi mu is reported") {
  auto m = model(0.0, 0.0);
  m.surfaces.surfaces[4] = constant(0.5);
  CHECK_THROWS_AS(bodyframe::kmatrix_bodyframe(m, at(0.1), false), PoleError);
}

TEST_CASE("geometry validation") {
  bodyframe::GeometryQ q;
  q.theta = -0.1;
  CHECK_THROWS_AS(q.validate(), DomainError);
  q.theta = 0.1;
  q.phi = 7.0;
  CHECK_THROWS_AS(q.validate(), DomainError);
}

TEST_CASE("bend couplings read the symmetric pi combination") {
  Matrix5 k = Matrix5::Zero();
  k(2, 1) = k(1, 2) = 0.3;
  k(2, 3) = k(3, 2) = 0.5;
  k(1, 3) = k(3, 1) = -0.2;
  const auto b = bodyframe::bend_couplings(k);
  CHECK(b.sigma_pi_prime == Approx(0.8 / std::sqrt(2.0)));
  CHECK(b.pi_plus_minus == Approx(-0.2));
}
