#include <doctest.h>

#include <cmath>
#include <limits>

#include "simplexstab/brascamp_lieb.hpp"
#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/transport.hpp"

using namespace simplexstab;

namespace {

// Minimum of 1/2 sum c (theta - s)^2 over A theta = x, theta >= 0 by trying
// every free set.
double brute_force_objective(const BLInstance& inst, const Vector& x) {
  const Matrix& u = inst.lifted.points;
  const Vector& c = inst.lifted.weights;
  const int k = static_cast<int>(u.cols());
  const Matrix a = u * c.asDiagonal();
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::vector<int> free;
    for (int i = 0; i < k; ++i) {
      if (mask & (1 << i)) free.push_back(i);
    }
    const int f = static_cast<int>(free.size());
    // KKT system for the equality problem on the free set.
    Matrix kkt = Matrix::Zero(f + a.rows(), f + a.rows());
    Vector rhs = Vector::Zero(f + a.rows());
    for (int j = 0; j < f; ++j) {
      kkt(j, j) = c[free[j]];
      kkt.block(f, j, a.rows(), 1) = a.col(free[j]);
      kkt.block(j, f, 1, a.rows()) = a.col(free[j]).transpose();
      rhs[j] = c[free[j]] * inst.s;
    }
    rhs.tail(a.rows()) = x;
    const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    Vector theta = Vector::Zero(k);
    for (int j = 0; j < f; ++j) theta[free[j]] = sol[j];
    if (theta.minCoeff() < -1e-12) continue;
    if ((a * theta - x).norm() > 1e-9) continue;
    best = std::min(best, 0.5 * (c.array() * (theta.array() - inst.s).square()).sum());
  }
  return best;
}

}  // namespace

TEST_CASE("bound is the power of the one-dimensional mass") {
  BLInstance inst{lift(simplex_measure(2), 1), 0.1};
  CHECK(bl_bound(inst) == doctest::Approx(std::pow(transport::unnormalized_mass(0.1), 3)));
}

TEST_CASE("orthonormal lifts give equality on both sides") {
  for (int sign : {1, -1}) {
    BLInstance inst{lift(simplex_measure(2), sign), 0.1};
    const RandomSource src{7, 1};
    const FunctionalEstimate bl = bl_lhs(inst, 40000, src);
    // Orthonormal lift: the integrand is a product and importance weights are constant.
    CHECK(bl.value == doctest::Approx(bl_bound(inst)).epsilon(0.02));
    const RblEstimate rbl = rbl_lhs(inst, 40000, src);
    CHECK(rbl.kkt_failures == 0);
    CHECK(rbl.estimate.value == doctest::Approx(bl_bound(inst)).epsilon(0.02));
  }
}

TEST_CASE("random isotropic measure sits between the two sides") {
  const DiscreteMeasure mu = random_isotropic_measure(2, 5, 11);
  BLInstance inst{lift(mu, -1), 0.1};
  const RandomSource src{3, 2};
  const FunctionalEstimate bl = bl_lhs(inst, 100000, src);
  const RblEstimate rbl = rbl_lhs(inst, 100000, src);
  const double bound = bl_bound(inst);
  CHECK(bl.value <= bound + 3 * bl.std_error);
  CHECK(rbl.estimate.value >= bound - 3 * rbl.estimate.std_error);
  CHECK(rbl.kkt_failures == 0);
}

TEST_CASE("active-set maximizer matches exhaustive free sets") {
  const DiscreteMeasure mu = random_isotropic_measure(3, 6, 5);
  BLInstance inst{lift(mu, 1), 0.12};
  RblSolver solver(inst);
  const RandomSource src{21, 0};
  int feasible = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Vector x = src.normal_vector(i, 4) + 0.7 * inst.lifted.pole;
    const RblPoint p = solver.solve(x);
    const double oracle = brute_force_objective(inst, x);
    if (!std::isfinite(oracle)) {
      CHECK_FALSE(p.feasible);
      continue;
    }
    ++feasible;
    REQUIRE(p.feasible);
    CHECK(p.kkt_residual < 1e-8);
    CHECK(-p.log_value == doctest::Approx(oracle).epsilon(1e-9));
  }
  CHECK(feasible > 20);
}

TEST_CASE("simplex identities hold to sampling accuracy") {
  for (auto variant : {IdentityVariant::kSimplex, IdentityVariant::kPolar}) {
    for (double s : {0.0, 0.1, 0.15}) {
      const IdentityCheck c = simplex_identity_check(2, s, variant, 200000, RandomSource{5, 3});
      CHECK(std::abs(c.relative_gap) < 4 * c.relative_error + 1e-3);
    }
  }
}

TEST_CASE("smoothing inequalities on a random measure") {
  const DiscreteMeasure mu = random_isotropic_measure(2, 5, 17);
  const auto rows = smoothing_inequality_check(mu, {0.0, 0.5, 1.0, 2.0}, 50000, RandomSource{9, 4});
  CHECK(rows.size() == 8);
  for (const auto& r : rows) CHECK(r.margin >= -3 * r.std_error);
}

TEST_CASE("smoothing margins vanish for the simplex itself") {
  const auto rows =
      smoothing_inequality_check(simplex_measure(2), {0.0, 1.0}, 20000, RandomSource{9, 4});
  for (const auto& r : rows) CHECK(std::abs(r.margin) < 1e-9);
}
