#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/normal.hpp"
#include "simplexstab/random.hpp"
#include "simplexstab/transport.hpp"

using namespace simplexstab;
using namespace simplexstab::transport;

TEST_CASE("tail constants sit in their brackets") {
  const TailConstants t = tail_constants();
  CHECK(t.delta > 0.77);
  CHECK(t.delta < 0.78);
  CHECK(t.xi > 0.68);
  CHECK(t.xi < 0.69);
  CHECK(t.alpha > 0.67);
  CHECK(t.alpha < 0.68);
  CHECK(t.beta > 0.57);
  CHECK(t.beta < 0.58);
  CHECK(t.gamma > 0.15);
  CHECK(t.gamma < 0.16);
  CHECK(std::abs(normal::survival(t.alpha) - 0.25) < 1e-13);
}

TEST_CASE("psi at zero shift reproduces alpha and delta") {
  const TailConstants t = tail_constants();
  CHECK(std::abs(psi(0.0, 0.0) - t.alpha) < 1e-12);
  CHECK(std::abs(psi(0.0, t.gamma) - t.delta) < 1e-12);
  // psi_gamma(0) = gamma + beta and psi_gamma(gamma) = gamma + xi.
  CHECK(std::abs(psi(t.gamma, 0.0) - (t.gamma + t.beta)) < 1e-12);
  CHECK(std::abs(psi(t.gamma, t.gamma) - (t.gamma + t.xi)) < 1e-12);
}

TEST_CASE("phi and psi are inverse") {
  for (double s : {0.0, 0.1, 0.15}) {
    for (int i = 0; i < 100; ++i) {
      const double y = -3.0 + 6.0 * i / 99;
      CHECK(std::abs(phi(s, psi(s, y)) - y) < 1e-9);
    }
  }
  CHECK_THROWS_AS(phi(0.1, 0.0), Error);
  CHECK_THROWS_AS(phi(0.1, -1.0), Error);
}

TEST_CASE("truncated density integrates to one") {
  const double inf = std::numeric_limits<double>::infinity();
  for (double s : {-1.0, 0.0, 0.15, 2.0}) {
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [s](double x) { return truncated_density(s, x); }, 0.0, inf, 15, 1e-14);
    CHECK(std::abs(total - 1.0) < 1e-12);
    const double raw = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [s](double x) { return std::exp(-0.5 * (x - s) * (x - s)); }, 0.0, inf, 15, 1e-14);
    CHECK(std::abs(raw - unnormalized_mass(s)) < 1e-12 * raw);
    if (s >= 0) CHECK(raw >= normal::kSqrt2Pi / 2);
  }
}

TEST_CASE("mass transport identity") {
  for (double s : {0.0, 0.07, 0.15, 1.0}) {
    for (int i = 1; i <= 50; ++i) {
      const double x = 0.05 * i;
      const Derivs d = phi_derivs(s, x);
      const double lhs = truncated_density(s, x);
      const double rhs = normal::pdf(d.value) * d.first;
      CHECK(std::abs(lhs - rhs) <= 1e-9 * lhs);
      const double y = -2.5 + 0.1 * i;
      const Derivs e = psi_derivs(s, y);
      CHECK(std::abs(normal::pdf(y) - truncated_density(s, e.value) * e.first) <=
            1e-9 * normal::pdf(y));
    }
  }
}

TEST_CASE("derivatives against finite differences") {
  for (double s : {0.0, 0.1, 0.15}) {
    for (double x : {0.3, 0.74, 0.755, 0.77, 1.5}) {
      const Derivs d = phi_derivs(s, x);
      const double h1 = 1e-5;
      const double fd1 = (phi(s, x + h1) - phi(s, x - h1)) / (2 * h1);
      CHECK(std::abs(fd1 - d.first) < 1e-6 * std::abs(d.first));
      const double h2 = 1e-4;
      const double fd2 = (phi(s, x + h2) - 2 * phi(s, x) + phi(s, x - h2)) / (h2 * h2);
      CHECK(std::abs(fd2 - d.second) / std::max(1.0, std::abs(d.second)) < 1e-5);
    }
    for (double y : {-1.0, 0.0, 0.075, 0.15, 2.0}) {
      const Derivs d = psi_derivs(s, y);
      const double h1 = 1e-5;
      const double fd1 = (psi(s, y + h1) - psi(s, y - h1)) / (2 * h1);
      CHECK(std::abs(fd1 - d.first) < 1e-6 * std::abs(d.first));
      const double h2 = 1e-4;
      const double fd2 = (psi(s, y + h2) - 2 * psi(s, y) + psi(s, y - h2)) / (h2 * h2);
      CHECK(std::abs(fd2 - d.second) / std::max(1.0, std::abs(d.second)) < 1e-5);
    }
  }
  CHECK(psi_derivs(0.1, 9.0).tail_warning);
  CHECK_FALSE(psi_derivs(0.1, 1.0).tail_warning);
}

TEST_CASE("lemma boxes on the full grid") {
  const Lemma61Report r = verify_lemma61(200);
  REQUIRE(r.checks.size() == 10);
  for (const BoundCheck& b : r.checks) {
    INFO(b.quantity << " " << b.relation << " " << b.bound << " extreme " << b.extreme);
    CHECK(b.violations == 0);
    CHECK(b.margin > 0);
  }
  CHECK(r.passed());
}

TEST_CASE("psi shift monotonicity") {
  const std::vector<double> s_grid{0.0, 0.05, 0.1, 0.15};
  const MonotonicityReport zero = psi_shift_monotonicity_check({0.0}, s_grid);
  CHECK(zero.pairs == 6);
  CHECK(zero.passed());
  CHECK(psi_shift_monotonicity_check({0.1}, s_grid).passed());
  std::vector<double> ys;
  for (int i = 0; i <= 20; ++i) ys.push_back(0.1 * i);
  CHECK(psi_shift_monotonicity_check(ys, s_grid).passed());
  for (double s : s_grid) CHECK(psi(s, 0.0) - s > 0);
}

TEST_CASE("fields for the orthonormal lifted simplex") {
  const LiftedMeasure l = lift(simplex_measure(2), 1);
  const RandomSource rng{3, 0};
  for (int i = 0; i < 20; ++i) {
    // Points in the positive cone of the orthonormal basis.
    Vector coef(3);
    for (int j = 0; j < 3; ++j) coef[j] = 0.1 + 2 * rng.uniforms(i, j)[0];
    const Vector x = l.points * coef;
    const FieldValue t = theta_field(l, 0.0, x);
    const Matrix diag = l.points.transpose() * t.jacobian * l.points;
    CHECK((diag - Matrix(diag.diagonal().asDiagonal())).norm() < 1e-12);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(l.points.col(j).dot(t.value) - phi(0.0, coef[j])) < 1e-12);
    const FieldValue back = psi_field(l, 0.0, t.value);
    CHECK((back.value - x).norm() < 1e-7);
  }
  Vector bad = l.points.col(0) + l.points.col(1) - 0.1 * l.points.col(2);
  CHECK_THROWS_AS(theta_field(l, 0.0, bad), Error);
}

TEST_CASE("field jacobians dominate the weighted geometric mean") {
  const RandomSource rng{4, 0};
  for (int trial = 0; trial < 5; ++trial) {
    const DiscreteMeasure mu = random_isotropic_measure(2 + trial % 2, 12, 100 + trial);
    const LiftedMeasure l = lift(mu, 1);
    const int d = l.dim();
    int tested = 0;
    for (int i = 0; tested < 20 && i < 2000; ++i) {
      const Vector x = rng.normal_vector(1000 * trial + i, d) + 2.0 * l.pole;
      if (((l.points.transpose() * x).array() <= 0).any()) continue;
      ++tested;
      const FieldValue t = theta_field(l, 0.1, x);
      double log_rhs = 0;
      for (int k = 0; k < l.size(); ++k) {
        log_rhs += l.weights[k] * std::log(phi_derivs(0.1, l.points.col(k).dot(x)).first);
      }
      CHECK(std::log(t.jacobian.determinant()) >= log_rhs - 1e-9);
      const Vector y = rng.normal_vector(50000 + 1000 * trial + i, d);
      const FieldValue p = psi_field(l, 0.1, y);
      CHECK((p.jacobian - p.jacobian.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      double log_psi = 0;
      for (int k = 0; k < l.size(); ++k) {
        log_psi += l.weights[k] * std::log(psi_derivs(0.1, l.points.col(k).dot(y)).first);
      }
      CHECK(std::log(p.jacobian.determinant()) >= log_psi - 1e-9);
    }
    CHECK(tested == 20);
  }
}
