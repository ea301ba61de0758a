#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/isotropic.hpp"
#include "simplexstab/polytope.hpp"
#include "simplexstab/random.hpp"

namespace simplexstab {

enum class FamilyKind { kVertexAdded, kCornerCut, kPolarVertexAdded, kStretchedVertex };
// Which ellipsoid is B^n: Loewner (K inside B^n) or John (K around B^n).
enum class Side { kLowner, kJohn };

const char* family_name(FamilyKind kind);
FamilyKind parse_family(const std::string& name);
const char* side_name(Side side);
Side family_side(FamilyKind kind);

// One body of a family for a raw construction parameter: the angle of the
// added vertex, the height of the cut corners (over-cut throws kDomain), or
// the stretch beyond the facet centroids.
Polytope family_member(FamilyKind kind, int n, double parameter);

struct ExtremalFamily {
  FamilyKind kind = FamilyKind::kVertexAdded;
  int n = 2;
  std::vector<double> eps;         // nominal deficits
  std::vector<double> parameters;  // scale * eps^rate
  double scale = 0;                // calibrated so the measured deficit tracks eps
  double rate = 1;
  std::vector<Polytope> bodies;
};

// Grid must lie in (0, 0.1). The scale comes from a fixed-seed pilot run.
ExtremalFamily make_family(FamilyKind kind, int n, const std::vector<double>& eps_grid);

// Minimum-cost assignment of rows to distinct columns (rows <= cols).
std::vector<int> assign_min_cost(const Matrix& cost);

struct Alignment {
  Matrix rotation;          // T in O(n)
  double delta_H = 0;       // delta_H(K, T target)
  double delta_vol = 0;     // exact for n <= 4
  std::vector<double> trace;  // objective after each accepted refinement move
};

// Searches O(n) for T minimizing delta_H(K, T target): Hungarian matching of
// extreme directions, Procrustes (det +-1), coordinate-rotation refinement.
// Identity plus `restarts` random starts.
Alignment align_to_simplex(const Polytope& k, const Polytope& target, std::uint64_t seed = 0,
                           int restarts = 20);

// T minimizing the Hausdorff distance of the point sets (columns) p and T q.
Alignment align_point_sets(const Matrix& p, const Matrix& q, std::uint64_t seed = 0,
                           int restarts = 20);
double point_set_hausdorff(const Matrix& p, const Matrix& q);

// How far B^n is from being the Loewner (John) ellipsoid of K: containment
// violation plus the L1 infeasibility of John's condition on the contacts.
double normalization_residual(const Polytope& k, Side side);

struct Deficit {
  double value = 0;
  double std_error = 0;
};

// Loewner: 1 - l(K)/l(Delta_n); John: l(K)/l(Delta_n^o) - 1. The aligned
// reference simplex is a control variate on shared samples. Throws
// kNormalization when the residual exceeds 1e-6.
Deficit measure_deficit(const Polytope& k, Side side, std::uint64_t samples,
                        const RandomSource& source, const Matrix* rotation = nullptr);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double std_error = 0;
  double r_squared = 0;
  int points = 0;
};

// Least squares of log y on log x.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentRow {
  double eps_nominal = 0;
  double parameter = 0;
  double eps_measured = 0;
  double eps_std_error = 0;
  double delta_H = 0;
  double delta_vol = 0;
  Matrix rotation;
  // log10(bound / delta) for the literal stability bounds; >= 0 means it holds.
  double margin_vol = 0;
  double margin_H = 0;
  double bound_margin() const { return std::min(margin_vol, margin_H); }
};

struct ExperimentReport {
  FamilyKind kind = FamilyKind::kVertexAdded;
  int n = 2;
  std::vector<ExperimentRow> rows;
  SlopeFit fit_vol;
  SlopeFit fit_H;
  bool bounds_hold() const;
};

// log10 of the literal constants: n^{26n} (Loewner, both distances),
// n^{27n} (John, delta_vol) and n^{27} with eps^{1/(4n)} (John, delta_H).
double bound_vol(Side side, int n, double eps);
double bound_H(Side side, int n, double eps);

// Needs >= 5 rows spanning >= 1.5 decades of measured deficit and every
// deficit above 3 standard errors (else kInsufficientSignal).
ExperimentReport fit_exponent(const ExtremalFamily& family, std::uint64_t samples,
                              const RandomSource& source);

struct SandwichReport {
  double eta = 0;
  double max_angle = 0;          // contacts to their nearest direction
  bool hypothesis_holds = false; // max_angle <= eta and eta < 1/(2n)
  double inner_violation = 0;    // (1 - n eta) S inside Z, <= 0 when it holds
  double outer_violation = 0;    // Z inside (1 + 2n eta) S
  bool passed() const { return hypothesis_holds && inner_violation <= 1e-9 && outer_violation <= 1e-9; }
};

// Z = {<u_i, x> <= 1} over the contacts, S = {<w_j, x> <= 1} for regular
// simplex directions w (columns). Violations are reported, not thrown.
SandwichReport sandwich_check(const Matrix& contacts, const Matrix& w, double eta);
// Same with w fitted to the contacts.
SandwichReport sandwich_check(const DiscreteMeasure& contacts, double eta);
SandwichReport sandwich_check(const JohnDecomposition& john, double eta);

struct CentroidReport {
  Vector centroid;
  double max_angle = 0;  // facet normals to the fitted regular directions
  double gauge = 0;      // ||sigma_0|| in 4 n eta Delta_n^o
  double margin = 0;     // 1 - gauge
  bool holds = false;
};

CentroidReport centroid_bound_check(const Polytope& s1, double eta);

// Regular simplex directions (columns) closest to the given unit vectors.
Matrix fit_regular_directions(const Matrix& dirs, std::uint64_t seed = 0);

struct ExtremalityReport {
  Deficit lowner;  // 1 - l(Z)/l(Delta_n) with Z = conv supp mu
  Deficit john;    // l(Z^o)/l(Delta_n^o) - 1
  double support_distance = 0;  // delta_H(supp mu, aligned simplex vertices)
  double margin_support = 0;    // log10(n^{28n} eps^{1/4} / distance), eps = deficit + 3 se
};

ExtremalityReport extremality_check(const DiscreteMeasure& mu, std::uint64_t samples,
                                    const RandomSource& source);

}  // namespace simplexstab
