#pragma once

#include <string>
#include <vector>

#include "simplexstab/isotropic.hpp"

namespace simplexstab::transport {

// Truncated Gaussian g_s(x) = g(x - s) / Phi(s) on [0, inf) and its CDF.
double truncated_density(double s, double x);
double truncated_cdf(double s, double x);
// Integral of the unnormalized version 1{t >= 0} exp(-(t-s)^2/2):
// sqrt(2 pi) Phi(s).
double unnormalized_mass(double s);

struct Derivs {
  double value = 0;
  double first = 0;
  double second = 0;
  bool tail_warning = false;  // |argument| > 8, reduced accuracy
};

// phi_s: (0, inf) -> R pushes g_s to g; psi_s is its inverse.
double phi(double s, double x);
double psi(double s, double y);
Derivs phi_derivs(double s, double x);
Derivs psi_derivs(double s, double y);

// x with P(Z > x) = p, by bisection on [0, 3] to 1e-13.
double tail_point(double p);

struct TailConstants {
  double alpha = 0;  // tail 1/4
  double beta = 0;   // tail 9/32
  double gamma = 0;  // tail 7/16
  double delta = 0;  // tail 7/32
  double xi = 0;     // tail 63/256
};

TailConstants tail_constants();

// One bound of the Lemma 6.1 boxes checked on a grid.
struct BoundCheck {
  std::string quantity;  // e.g. "phi'"
  std::string relation;  // "<", "<=", ">", ">="
  double bound = 0;
  double extreme = 0;   // worst value over the grid
  double margin = 0;    // positive when the bound holds
  int violations = 0;
};

struct Lemma61Report {
  int grid = 0;
  std::vector<BoundCheck> checks;
  bool passed() const;
};

// Both boxes: s in [0, 0.15] against x in [0.74, 0.77] and y in [0, 0.15].
Lemma61Report verify_lemma61(int grid = 200);

struct MonotonicityReport {
  int pairs = 0;
  int decreasing_violations = 0;   // psi_{s'}(y) - s' < psi_s(y) - s fails
  int increasing_violations = 0;   // psi_{s'}(y) >= psi_s(y) fails (y in [0, gamma])
  int positivity_violations = 0;   // psi_s(y) - s > 0 fails
  bool passed() const {
    return decreasing_violations == 0 && increasing_violations == 0 && positivity_violations == 0;
  }
};

MonotonicityReport psi_shift_monotonicity_check(const std::vector<double>& y_grid,
                                                const std::vector<double>& s_grid);

struct FieldValue {
  Vector value;
  Matrix jacobian;
};

// Theta(x) = sum c~_i phi_s(<u~_i, x>) u~_i; throws kOutsideCone unless all
// <u~_i, x> > 0.
FieldValue theta_field(const LiftedMeasure& l, double s, const Vector& x);
// Psi(y) = sum c~_i psi_s(<u~_i, y>) u~_i on all of R^{n+1}.
FieldValue psi_field(const LiftedMeasure& l, double s, const Vector& y);

}  // namespace simplexstab::transport
