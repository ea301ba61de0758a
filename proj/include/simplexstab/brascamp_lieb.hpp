#pragma once

#include <cstdint>
#include <vector>

#include "simplexstab/gaussian_functionals.hpp"
#include "simplexstab/isotropic.hpp"
#include "simplexstab/random.hpp"

namespace simplexstab {

// Lifted measure with the family f_i = g~_s (unnormalized truncated Gaussian).
struct BLInstance {
  LiftedMeasure lifted;
  double s = 0;
};

// (integral of g~_s)^{n+1}: the common value of both sides at equality.
double bl_bound(const BLInstance& inst);

// Integral over R^{n+1} of prod g~_s(<x, u~_i>)^{c~_i}, importance sampled
// from N(s sqrt(n+1) e, Id).
FunctionalEstimate bl_lhs(const BLInstance& inst, std::uint64_t samples,
                          const RandomSource& source);

struct RblEstimate {
  FunctionalEstimate estimate;
  std::uint64_t infeasible = 0;    // samples outside the cone of the u~_i
  std::uint64_t kkt_failures = 0;  // maximizers with KKT residual >= 1e-8
  double max_kkt_residual = 0;
  int max_iterations = 0;
};

// Integral of sup_{x = sum c~ theta u~, theta >= 0} prod g~_s(theta_i)^{c~_i},
// with the sup found per sample by a warm-started primal active-set QP.
RblEstimate rbl_lhs(const BLInstance& inst, std::uint64_t samples, const RandomSource& source);

// Maximizer of the inner sup at one point (exposed for tests).
struct RblPoint {
  bool feasible = false;
  Vector theta;
  double log_value = 0;  // sum c~ log g~_s(theta_i)
  double kkt_residual = 0;
  int iterations = 0;
};

class RblSolver {
 public:
  explicit RblSolver(const BLInstance& inst);
  RblPoint solve(const Vector& x);

 private:
  bool solve_free_set(const std::vector<bool>& fixed, const Vector& x, Vector& theta,
                      Vector& lambda) const;
  double kkt_residual(const Vector& theta, const Vector& lambda, const Vector& x) const;

  Matrix u_;  // (n+1) x k
  Vector c_;
  Matrix a_;  // u_ * diag(c_)
  double s_;
  std::vector<bool> warm_fixed_;
  bool has_warm_ = false;
};

enum class IdentityVariant { kSimplex, kPolar };

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  double relative_gap = 0;   // (lhs - rhs) / rhs
  double relative_error = 0; // Monte-Carlo standard error of lhs / rhs
};

// kSimplex: (2 pi)^{n/2} e^{-(n+1)s^2/2} int_0^inf e^{-r^2/2 + s r sqrt(n+1)}
//           gamma_n(r sqrt(n) Delta_n) dr   vs  (integral g~_s)^{n+1};
// kPolar uses gamma_n(r / sqrt(n) Delta_n^o). The outer integral is taken in
// closed form against the empirical distribution of the gauge.
IdentityCheck simplex_identity_check(int n, double s, IdentityVariant variant,
                                     std::uint64_t samples, const RandomSource& source);

struct SmoothingRow {
  double tau = 0;
  bool polar = false;
  double simplex_side = 0;  // smoothed survival integral for Delta_n (or its polar)
  double body_side = 0;     // same for C = conv(supp mu) (or C^o)
  double margin = 0;        // oriented so that the claimed inequality means margin >= 0
  double std_error = 0;     // of the paired difference
};

// Smoothed survival comparisons, weight e^{-(t-tau)^2/(2n)} for Delta_n vs C
// (Delta side larger) and e^{-n(t-tau)^2/2} for the polars (Delta side
// smaller). Common random numbers for both bodies.
std::vector<SmoothingRow> smoothing_inequality_check(const DiscreteMeasure& mu,
                                                     const std::vector<double>& tau_grid,
                                                     std::uint64_t samples,
                                                     const RandomSource& source);

}  // namespace simplexstab
