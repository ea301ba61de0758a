#pragma once

#include <optional>
#include <variant>

#include "simplexstab/common.hpp"
#include "simplexstab/random.hpp"

namespace simplexstab {

// Rows are unit outer normals a_j; the body is {x : <a_j, x> <= b_j}.
struct Halfspaces {
  Matrix normals;
  Vector offsets;

  int count() const { return static_cast<int>(normals.rows()); }
};

// Full-dimensional convex polytope held in V-representation, H-representation
// or both. Immutable once built; lower-dimensional input is rejected.
class Polytope {
 public:
  // Vertices are the columns of `vertices` (n x m). Non-extreme points are
  // allowed; they do not change the body.
  static Polytope from_vertices(Matrix vertices);
  static Polytope from_vertices(const PointList& vertices);
  static Polytope from_halfspaces(Matrix normals, Vector offsets);
  // Caller guarantees both describe the same set.
  static Polytope from_both(Matrix vertices, Matrix normals, Vector offsets);

  int dim() const { return dim_; }
  bool has_vertices() const { return vertices_.has_value(); }
  bool has_halfspaces() const { return halfspaces_.has_value(); }

  const Matrix& vertices() const;
  const Halfspaces& halfspaces() const;
  int vertex_count() const { return has_vertices() ? static_cast<int>(vertices_->cols()) : 0; }

  // Fill in the missing representation by enumeration (n <= 4 only).
  Polytope with_vertices() const;
  Polytope with_halfspaces() const;
  Polytope complete() const { return with_vertices().with_halfspaces(); }

  // Keeps only the extreme points of the V-representation.
  Polytope pruned() const;

  // Image under x -> m x (m invertible) and under x -> x + shift.
  Polytope linear_image(const Matrix& m) const;
  Polytope translated(const Vector& shift) const;
  Polytope scaled(double factor) const;

  // Mean of the V-representation points (an interior point).
  Vector vertex_mean() const;

  bool contains_point(const Vector& x, double tol = 1e-9) const;

 private:
  Polytope() = default;

  int dim_ = 0;
  std::optional<Matrix> vertices_;
  std::optional<Halfspaces> halfspaces_;
};

// Euclidean ball of given radius about the origin (exact path, no polytope
// approximation).
struct Ball {
  int dim = 2;
  double radius = 1.0;
};

using Body = std::variant<Polytope, Ball>;

int body_dim(const Body& body);

// Vertices v_1..v_{n+1} on the unit sphere with <v_i, v_j> = -1/n, v_1 = e_n.
// Returned with both representations.
Polytope regular_simplex(int n);

// Cube [-1,1]^n and cross-polytope conv{+-e_i}, both representations.
Polytope cube(int n);
Polytope cross_polytope(int n);

double support_function(const Polytope& k, const Vector& u);
double support_function(const Ball& b, const Vector& u);
double support_function(const Body& k, const Vector& u);

double gauge_norm(const Polytope& k, const Vector& x);
double gauge_norm(const Ball& b, const Vector& x);
double gauge_norm(const Body& k, const Vector& x);

// Precomputed gauge for repeated Monte-Carlo evaluation:
// ||x||_K = max(0, max_j <a_j, x> / b_j).
class GaugeEvaluator {
 public:
  explicit GaugeEvaluator(const Body& body);
  double operator()(const Vector& x) const;
  int dim() const { return dim_; }

 private:
  int dim_ = 0;
  std::optional<double> ball_radius_;
  Matrix scaled_normals_;
};

Polytope polar(const Polytope& k);
Ball polar(const Ball& b);

// Distance from x to conv(columns of points); Wolfe's minimum-norm-point
// active-set method.
double distance_to_hull(const Vector& x, const Matrix& points, double tol = 1e-9,
                        int max_iterations = 500);

double hausdorff_distance(const Polytope& k, const Polytope& c);

struct VolumeEstimate {
  double estimate = 0;
  double std_error = 0;
};

// Monte-Carlo estimate of V(K \ C) + V(C \ K) over a common bounding box.
VolumeEstimate symdiff_volume(const Polytope& k, const Polytope& c,
                              const RandomSource& source, std::uint64_t samples);

// Exact volume of a polytope (n <= 4) by recursive facet decomposition.
double polytope_volume(const Polytope& k);
// Exact symmetric-difference volume by half-space clipping (n <= 4).
double symdiff_volume_exact(const Polytope& k, const Polytope& c);
// Intersection as a polytope (H-rep concatenation); nullopt if not
// full-dimensional.
std::optional<Polytope> intersect(const Polytope& k, const Polytope& c);

// Closed-form volume of the regular simplex inscribed in the unit ball.
double simplex_volume(int n);
// Volume of the simplex spanned by n+1 points (columns), via determinant.
double simplex_volume_from_vertices(const Matrix& vertices);

// True iff every vertex of C satisfies every halfspace of K within tol.
bool contains(const Polytope& k, const Polytope& c, double tol = 1e-9);
// Largest violation max_{v,j} <a_j,v> - b_j (negative means strict containment).
double containment_violation(const Polytope& k, const Polytope& c);

// Vertex enumeration of {x : A x <= b} by n-subset intersection (n <= 4).
Matrix enumerate_vertices(const Halfspaces& h, int n);
// Facets of conv(points) for full-dimensional point sets (n <= 4).
Halfspaces enumerate_facets(const Matrix& points);

}  // namespace simplexstab
