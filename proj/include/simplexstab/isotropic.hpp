#pragma once

#include <vector>

#include "simplexstab/common.hpp"

namespace simplexstab {

// Finite measure on S^{n-1}: unit columns u_i of `points` with weights c_i > 0.
class DiscreteMeasure {
 public:
  // Throws kDomain unless every column is a unit vector (1e-12) and every
  // weight is positive and finite.
  DiscreteMeasure(Matrix points, Vector weights);

  int dim() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  Vector point(int i) const { return points_.col(i); }

  // sum c_i u_i u_i^T and sum c_i u_i.
  Matrix moment() const;
  Vector barycenter() const;

 private:
  Matrix points_;
  Vector weights_;
};

// Vertices of the regular simplex, each with weight n/(n+1).
DiscreteMeasure simplex_measure(int n);
// +-e_i with weight 1/2.
DiscreteMeasure cross_measure(int n);

struct MeasureReport {
  double isotropy_residual = 0;   // ||sum c u u^T - Id||_F
  double centering_residual = 0;  // ||sum c u||
  double mass_residual = 0;       // |sum c - n|

  bool passes(double tol) const {
    return isotropy_residual <= tol && centering_residual <= tol && mass_residual <= tol;
  }
};

MeasureReport validate(const DiscreteMeasure& mu);

// One-step linear normalization u -> M^{-1/2}u / |M^{-1/2}u|,
// c -> c |M^{-1/2}u|^2. Does not recenter.
DiscreteMeasure isotropize(const Matrix& points, const Vector& weights);

// Caratheodory reduction keeping moment, barycenter and mass. Output support
// is a subset of the input support with at most n(n+3)/2 atoms.
DiscreteMeasure reduce_support(const DiscreteMeasure& mu, double tol = 1e-8);

struct BallBartheResult {
  double lhs = 0;         // det(sum t_i c_i u_i u_i^T)
  double rhs = 0;         // prod t_i^{c_i}
  double theta_star = 1;  // stability factor, lhs >= theta_star * rhs
  bool theta_exact = true;  // false when subsets were sampled (lower bound)
};

inline constexpr double kSubsetEnumerationCap = 2e6;
inline constexpr int kSubsetSamples = 100000;

BallBartheResult ball_barthe_check(const DiscreteMeasure& mu, const Vector& t,
                                   std::uint64_t seed = 0);

struct SubsetValue {
  std::vector<int> indices;
  double value = 0;  // c_{i1}..c_{in} det[u_{i1}..u_{in}]^2
};

// Maximizer of the subset value over all n-subsets (k <= 2n^2).
SubsetValue big_determinant_subset(const DiscreteMeasure& mu);

// c_S det[u_S]^2 for the given n indices.
double subset_value(const DiscreteMeasure& mu, const std::vector<int>& indices);

// Lower bound 1 + beta (t_a - t_b)^2 / (4 (t_a + t_b)^2) on lhs/rhs when the
// two n-subsets sharing all but a and b both have value >= beta.
double pair_stability_factor(double beta, double t_a, double t_b);

struct LiftedMeasure {
  DiscreteMeasure base;
  Matrix points;   // (n+1) x k, the lifted u~_i
  Vector weights;  // c~_i = (n+1)/n c_i
  Vector pole;     // e = e_{n+1}
  int sign = 1;

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
};

// u~_i = sign sqrt(n/(n+1)) u_i + e / sqrt(n+1).
LiftedMeasure lift(const DiscreteMeasure& mu, int sign = 1);

// Orthonormal w_1..w_n near the representatives v_1..v_n of a clustered
// decomposition of the identity sum v_i v_i^T = Id. Throws kNoFrame when the
// clustering hypothesis fails.
Matrix fit_orthonormal_frame(const Matrix& vs, double eta);

}  // namespace simplexstab
