#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplexstab/gaussian_functionals.hpp"
#include "simplexstab/stability.hpp"

using namespace simplexstab;

namespace {

Matrix rotation_from(std::uint64_t seed, int n) {
  const RandomSource src{seed, 3};
  Matrix g(n, n);
  src.normals(0, g.data(), n * n);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

// Rotates u towards a random orthogonal direction by the given angle.
Vector tilt(const Vector& u, double angle, const RandomSource& src, std::uint64_t i) {
  Vector d = src.normal_vector(i, static_cast<int>(u.size()));
  d -= d.dot(u) * u;
  d.normalize();
  return std::cos(angle) * u + std::sin(angle) * d;
}

}  // namespace

TEST_CASE("assignment matches exhaustive permutations") {
  const RandomSource src{4, 8};
  for (std::uint64_t t = 0; t < 20; ++t) {
    Matrix c(4, 4);
    src.normals(t, c.data(), 16);
    const std::vector<int> a = assign_min_cost(c);
    double got = 0;
    for (int i = 0; i < 4; ++i) got += c(i, a[i]);
    std::vector<int> perm{0, 1, 2, 3};
    double best = 1e300;
    do {
      double v = 0;
      for (int i = 0; i < 4; ++i) v += c(i, perm[i]);
      best = std::min(best, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("rotated and reflected simplices are recovered") {
  for (int n : {2, 3}) {
    const Polytope s = regular_simplex(n);
    const Polytope k = s.linear_image(rotation_from(5 + n, n));
    CHECK(align_to_simplex(k, s).delta_H < 1e-8);
    Matrix flip = Matrix::Identity(n, n);
    flip(0, 0) = -1;
    const Polytope r = s.linear_image(flip * rotation_from(9, n));
    const Alignment a = align_to_simplex(r, s);
    CHECK(a.delta_H < 1e-8);
    CHECK(a.delta_vol < 1e-8);
    CHECK(std::abs(std::abs(a.rotation.determinant()) - 1.0) < 1e-10);
  }
}

TEST_CASE("refinement trace never increases") {
  const Polytope k = family_member(FamilyKind::kVertexAdded, 2, 0.05);
  const Alignment a = align_to_simplex(k, regular_simplex(2));
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i] <= a.trace[i - 1]);
  CHECK(a.delta_H > 0);
  CHECK(a.delta_H < 0.2);
  const Alignment b = align_to_simplex(k, regular_simplex(2));
  CHECK(a.delta_H == b.delta_H);
}

TEST_CASE("family members keep their normalization") {
  for (int n : {2, 3}) {
    for (FamilyKind kind : {FamilyKind::kVertexAdded, FamilyKind::kCornerCut,
                            FamilyKind::kPolarVertexAdded, FamilyKind::kStretchedVertex}) {
      const Polytope k = family_member(kind, n, 0.05);
      CHECK(normalization_residual(k, family_side(kind)) < 1e-9);
    }
  }
  const Polytope va = family_member(FamilyKind::kVertexAdded, 2, 0.01);
  CHECK(va.vertex_count() == 4);
  CHECK(contains(va, regular_simplex(2)));
  CHECK(va.vertices().colwise().norm().maxCoeff() <= 1 + 1e-12);
  CHECK(contains(polar(regular_simplex(2)).with_vertices(),
                 family_member(FamilyKind::kCornerCut, 2, 0.2)));
  CHECK_THROWS_AS(family_member(FamilyKind::kCornerCut, 2, 3.0), Error);
  CHECK_THROWS_AS(make_family(FamilyKind::kCornerCut, 2, {0.2}), Error);
  // A body whose Loewner ellipsoid is not B^n.
  CHECK(normalization_residual(regular_simplex(2).scaled(0.9), Side::kLowner) > 1e-3);
  CHECK_THROWS_AS(measure_deficit(regular_simplex(2).scaled(0.9), Side::kLowner, 1000,
                                  RandomSource{1, 1}),
                  Error);
}

TEST_CASE("deficits of the simplex and the ball") {
  const RandomSource src{2, 5};
  const Deficit d = measure_deficit(regular_simplex(2), Side::kLowner, 20000, src);
  CHECK(std::abs(d.value) <= 3 * d.std_error + 1e-12);
  // Loewner side value for B^2 in closed form: 1 - l(B^2)/l(Delta_2).
  const double want = 1 - ell_ball(2) / simplex_ell(2);
  CHECK(want == doctest::Approx(0.3954).epsilon(1e-3));
  // Fine polygon inscribed in B^2 approximates the ball from inside.
  Matrix v(2, 720);
  for (int j = 0; j < 720; ++j) v.col(j) << std::cos(2 * M_PI * j / 720), std::sin(2 * M_PI * j / 720);
  const Polytope disk = Polytope::from_vertices(v).with_halfspaces();
  const Deficit b = measure_deficit(disk, Side::kLowner, 100000, src);
  CHECK(b.value == doctest::Approx(want).epsilon(0.01));
}

TEST_CASE("vertex-added deficit decreases to zero along the grid") {
  const Matrix id = Matrix::Identity(2, 2);
  double last = 1;
  for (double angle : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    const Deficit d = measure_deficit(family_member(FamilyKind::kVertexAdded, 2, angle),
                                      Side::kLowner, 100000, RandomSource{3, 3}, &id);
    CHECK(d.value > 0);
    CHECK(d.value < last);
    last = d.value;
  }
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x{1e-4, 1e-3, 1e-2, 1e-1}, y;
  for (double v : x) y.push_back(3 * std::pow(v, 0.5));
  const SlopeFit f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("literal bound exponents") {
  CHECK(bound_vol(Side::kLowner, 2, 1.0) == doctest::Approx(52 * std::log10(2.0)));
  CHECK(bound_H(Side::kJohn, 3, 1.0) == doctest::Approx(27 * std::log10(3.0)));
  CHECK(bound_H(Side::kJohn, 2, 1e-8) == doctest::Approx(27 * std::log10(2.0) - 1.0));
}

TEST_CASE("sandwich of perturbed contacts") {
  const int n = 2;
  const Matrix w = regular_simplex(n).vertices();
  const DiscreteMeasure exact = simplex_measure(n);
  const SandwichReport e = sandwich_check(exact.points(), w, 0.0);
  CHECK(e.passed());
  const RandomSource src{6, 6};
  Matrix u(n, n + 1);
  for (int j = 0; j <= n; ++j) u.col(j) = tilt(w.col(j), 1e-3, src, j);
  const SandwichReport p = sandwich_check(u, w, 1e-3);
  CHECK(p.hypothesis_holds);
  CHECK(p.passed());
  // Far atom.
  Matrix far(n, n + 2);
  far << u, Vector::Unit(n, 0);
  const SandwichReport f = sandwich_check(far, w, 1e-3);
  CHECK_FALSE(f.hypothesis_holds);
  CHECK_FALSE(f.passed());
  // Fitted directions on the exact measure.
  CHECK(sandwich_check(exact, 1e-9).passed());
}

TEST_CASE("centroid of a perturbed circumscribed simplex") {
  const int n = 2;
  const Polytope d0 = polar(regular_simplex(n)).with_vertices();
  const CentroidReport c0 = centroid_bound_check(d0, 0.0);
  CHECK(c0.centroid.norm() < 1e-12);
  CHECK(c0.holds);
  const Matrix w = regular_simplex(n).vertices();
  const RandomSource src{8, 1};
  Matrix u(n, n + 1);
  for (int j = 0; j <= n; ++j) u.col(j) = tilt(w.col(j), 1e-2, src, j);
  const Polytope s1 = Polytope::from_halfspaces(u.transpose(), Vector::Ones(n + 1));
  const CentroidReport c = centroid_bound_check(s1, 1e-2);
  CHECK(c.max_angle <= 1e-2 * (1 + 1e-6));
  CHECK(c.holds);
}

TEST_CASE("extremality on the simplex measure and a random measure") {
  const ExtremalityReport s = extremality_check(simplex_measure(2), 20000, RandomSource{1, 2});
  CHECK(std::abs(s.lowner.value) < 1e-12);
  CHECK(std::abs(s.john.value) < 1e-12);
  CHECK(s.support_distance < 1e-8);
  const ExtremalityReport r =
      extremality_check(random_isotropic_measure(2, 6, 3), 50000, RandomSource{1, 2});
  CHECK(r.lowner.value > -3 * r.lowner.std_error);
  CHECK(r.john.value > -3 * r.john.std_error);
  CHECK(r.margin_support > 0);
}

TEST_CASE("exact symmetric difference of a rotated polar simplex and a corner cut") {
  // Configuration where the intersection LP once hit a tiny pivot.
  Matrix r(3, 3);
  r << 0.58075591893368173, 0.80109290618561391, -0.14481960600202817,
      0.34445360895363419, -0.080625671001548674, 0.93533481302385313,
      0.7376139057137624, -0.59308486478297384, -0.32276317829493872;
  const Polytope k = family_member(FamilyKind::kCornerCut, 3, 0.76834198661082564);
  const Polytope t = polar(regular_simplex(3)).with_vertices().linear_image(r);
  REQUIRE(intersect(k, t).has_value());
  const VolumeEstimate mc = symdiff_volume(k, t, RandomSource{1, 1}, 200000);
  CHECK(std::abs(symdiff_volume_exact(k, t) - mc.estimate) < 4 * mc.std_error);
}

TEST_CASE("centroid margin is first-order scale invariant in eta") {
  for (int n : {2, 3}) {
    const Matrix w = regular_simplex(n).vertices();
    const RandomSource src{3, 4};
    std::vector<double> margins;
    for (double eta : {1e-3, 5e-3, 2e-2}) {
      Matrix u(n, n + 1);
      for (int j = 0; j <= n; ++j) u.col(j) = tilt(w.col(j), eta, src, j);
      const CentroidReport c =
          centroid_bound_check(Polytope::from_halfspaces(u.transpose(), Vector::Ones(n + 1)), eta);
      CHECK(c.holds);
      margins.push_back(c.margin);
    }
    const auto [lo, hi] = std::minmax_element(margins.begin(), margins.end());
    CHECK(*hi - *lo < 0.02);
  }
}
