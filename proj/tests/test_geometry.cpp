#include <doctest.h>

#include <cmath>
#include <numbers>

#include "simplexstab/polytope.hpp"

using namespace simplexstab;

namespace {

// Smallest distance from each column of a to some column of b.
double vertex_set_gap(const Matrix& a, const Matrix& b) {
  double worst = 0;
  for (int i = 0; i < a.cols(); ++i) {
    double best = INFINITY;
    for (int j = 0; j < b.cols(); ++j) best = std::min(best, (a.col(i) - b.col(j)).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("regular simplex coordinates in the plane") {
  const Polytope s = regular_simplex(2);
  const Matrix& v = s.vertices();
  CHECK(v(0, 0) == doctest::Approx(0.0));
  CHECK(v(1, 0) == doctest::Approx(1.0));
  CHECK(v(0, 1) == doctest::Approx(-std::sqrt(3.0) / 2));
  CHECK(v(1, 1) == doctest::Approx(-0.5));
  CHECK(v(0, 2) == doctest::Approx(std::sqrt(3.0) / 2));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(v.col(i).dot(v.col(j)) == doctest::Approx(-0.5));
}

TEST_CASE("regular simplex gram matrix and centroid") {
  for (int n = 2; n <= 8; ++n) {
    const Matrix v = regular_simplex(n).vertices();
    const Matrix gram = v.transpose() * v;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : -1.0 / n)) < 1e-12);
      }
    }
    CHECK(v.rowwise().sum().norm() < 1e-12);
  }
  CHECK_THROWS_AS(regular_simplex(1), Error);
}

TEST_CASE("support function examples") {
  const Polytope s = regular_simplex(2);
  CHECK(support_function(s, Vector::Unit(2, 1)) == doctest::Approx(1.0));
  CHECK(support_function(s, -Vector::Unit(2, 1)) == doctest::Approx(0.5));
  const Polytope h = Polytope::from_halfspaces(s.halfspaces().normals, s.halfspaces().offsets);
  CHECK(support_function(h, -Vector::Unit(2, 1)) == doctest::Approx(0.5));
  Vector u(2);
  u << 3.0, 4.0;
  CHECK(support_function(Ball{2, 1.0}, u) == doctest::Approx(5.0));
  // Halfplane wedge is unbounded upward.
  Matrix a(3, 2);
  a << 1, 0, -1, 0, 0, -1;
  Vector b = Vector::Ones(3);
  const Polytope strip = Polytope::from_halfspaces(a, b);
  try {
    support_function(strip, Vector::Unit(2, 1));
    FAIL("expected an unbounded-support error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnboundedSupport);
  }
}

TEST_CASE("gauge norm examples") {
  const Polytope s = regular_simplex(2);
  const Vector v1 = s.vertices().col(0);
  CHECK(gauge_norm(s, v1) == doctest::Approx(1.0));
  CHECK(gauge_norm(s, Vector::Zero(2)) == 0.0);
  CHECK(gauge_norm(s, Vector(-v1)) == doctest::Approx(2.0));
  const Polytope vonly = Polytope::from_vertices(s.vertices());
  CHECK(gauge_norm(vonly, Vector(-v1)) == doctest::Approx(2.0));
  const Polytope shifted = s.translated(Vector::Constant(2, 3.0));
  CHECK_THROWS_AS(gauge_norm(shifted, v1), Error);
  const Polytope vshift = vonly.translated(Vector::Constant(2, 3.0));
  CHECK_THROWS_AS(gauge_norm(vshift, v1), Error);
}

TEST_CASE("polar of simplex and cube") {
  for (int n = 2; n <= 5; ++n) {
    const Polytope s = regular_simplex(n);
    const Polytope p = polar(s);
    CHECK(vertex_set_gap(p.vertices(), -n * s.vertices()) < 1e-10);
    CHECK(vertex_set_gap(-n * s.vertices(), p.vertices()) < 1e-10);
  }
  const Polytope c = polar(cube(3));
  CHECK(vertex_set_gap(c.vertices(), cross_polytope(3).vertices()) < 1e-12);
  const Polytope s3 = Polytope::from_vertices(regular_simplex(3).vertices());
  const Polytope bipolar = polar(polar(s3).with_vertices());
  CHECK(vertex_set_gap(bipolar.with_vertices().vertices(), s3.vertices()) < 1e-10);
}

TEST_CASE("gauge equals support of polar") {
  RandomSource rng{11, 0};
  const Polytope k = Polytope::from_vertices(cube(3).vertices() * 0.7).complete();
  const Polytope kp = polar(k);
  for (int i = 0; i < 100; ++i) {
    const Vector x = rng.normal_vector(i, 3);
    CHECK(std::abs(gauge_norm(k, x) - support_function(kp, x)) < 1e-10);
  }
}

TEST_CASE("enumeration round trip") {
  const Polytope s = Polytope::from_vertices(regular_simplex(3).vertices());
  const Polytope h = s.with_halfspaces();
  CHECK(h.halfspaces().count() == 4);
  const Polytope back =
      Polytope::from_halfspaces(h.halfspaces().normals, h.halfspaces().offsets).with_vertices();
  CHECK(back.vertex_count() == 4);
  CHECK(vertex_set_gap(back.vertices(), s.vertices()) < 1e-10);
  const Polytope c4 = Polytope::from_vertices(cube(4).vertices()).with_halfspaces();
  CHECK(c4.halfspaces().count() == 8);
}

TEST_CASE("degenerate input is rejected") {
  Matrix flat(2, 3);
  flat << 0, 1, 2, 0, 1, 2;
  CHECK_THROWS_AS(Polytope::from_vertices(flat), Error);
  Matrix a(2, 2);
  a << 1, 0, -1, 0;
  CHECK_THROWS_AS(Polytope::from_halfspaces(a, Vector::Ones(2)), Error);
}

TEST_CASE("hausdorff distance") {
  const Polytope s = regular_simplex(3);
  CHECK(hausdorff_distance(s, s) < 1e-12);
  CHECK(hausdorff_distance(s, s.scaled(1.25)) == doctest::Approx(0.25));
  // Triangle inequality on random triples.
  RandomSource rng{5, 0};
  for (int t = 0; t < 20; ++t) {
    PointList a, b, c;
    for (int i = 0; i < 6; ++i) {
      a.push_back(rng.normal_vector(60 * t + i, 2));
      b.push_back(rng.normal_vector(60 * t + 20 + i, 2));
      c.push_back(rng.normal_vector(60 * t + 40 + i, 2));
    }
    const Polytope pa = Polytope::from_vertices(a), pb = Polytope::from_vertices(b),
                   pc = Polytope::from_vertices(c);
    CHECK(hausdorff_distance(pa, pc) <=
          hausdorff_distance(pa, pb) + hausdorff_distance(pb, pc) + 1e-9);
  }
}

TEST_CASE("distance to hull") {
  Matrix square = cube(2).vertices();
  Vector x(2);
  x << 3.0, 0.5;
  CHECK(distance_to_hull(x, square) == doctest::Approx(2.0));
  x << 3.0, 5.0;
  CHECK(distance_to_hull(x, square) == doctest::Approx(std::hypot(2.0, 4.0)));
  x << 0.2, 0.1;
  CHECK(distance_to_hull(x, square) < 1e-9);
}

TEST_CASE("volumes") {
  CHECK(std::abs(simplex_volume(2) - 3 * std::sqrt(3.0) / 4) < 1e-12);
  CHECK(simplex_volume(2) <= 1.3);
  CHECK(simplex_volume(3) == doctest::Approx(std::pow(4.0 / 3.0, 1.5) * 2.0 / 6.0));
  for (int n = 2; n <= 8; ++n) {
    CHECK(std::abs(simplex_volume(n) - simplex_volume_from_vertices(regular_simplex(n).vertices())) <
          1e-10);
  }
  for (int n = 2; n <= 4; ++n) {
    CHECK(polytope_volume(regular_simplex(n)) == doctest::Approx(simplex_volume(n)).epsilon(1e-10));
    CHECK(polytope_volume(cube(n)) == doctest::Approx(std::pow(2.0, n)).epsilon(1e-10));
  }
}

TEST_CASE("symmetric difference volume") {
  const Polytope s = regular_simplex(2);
  RandomSource rng{3, 0};
  const VolumeEstimate same = symdiff_volume(s, s, rng, 10000);
  CHECK(same.estimate == 0.0);
  CHECK(same.std_error == 0.0);
  const double t = 0.2;
  const VolumeEstimate grow = symdiff_volume(s, s.scaled(1 + t), rng, 200000);
  const double exact = ((1 + t) * (1 + t) - 1) * simplex_volume(2);
  CHECK(std::abs(grow.estimate - exact) < 3 * grow.std_error);
  CHECK(symdiff_volume_exact(s, s.scaled(1 + t)) == doctest::Approx(exact).epsilon(1e-10));

  const Polytope s3 = regular_simplex(3);
  const Polytope r3 = s3.scaled(1.0).linear_image(-Matrix::Identity(3, 3));
  const double oracle = symdiff_volume_exact(s3, r3);
  CHECK(oracle > 0);
  const VolumeEstimate mc = symdiff_volume(s3, r3, rng.with_stream(1), 200000);
  CHECK(std::abs(mc.estimate - oracle) < 3 * mc.std_error);
}

TEST_CASE("containment") {
  for (int n = 2; n <= 5; ++n) {
    const Polytope s = regular_simplex(n);
    CHECK(contains(polar(s), s));
    CHECK_FALSE(contains(s, polar(s)));
  }
}

TEST_CASE("pruned drops interior points") {
  Matrix pts(2, 5);
  pts << 1, -1, -1, 1, 0.1, 1, 1, -1, -1, 0.2;
  const Polytope p = Polytope::from_vertices(pts).pruned();
  CHECK(p.vertex_count() == 4);
}
