#include "simplexstab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplexstab/normal.hpp"

namespace simplexstab::transport {
namespace {

constexpr double kTailLimit = 8.0;

// g_s(x) / g(y) evaluated in log space.
double density_ratio(double s, double x, double y) {
  return std::exp(-0.5 * (x - s) * (x - s) + 0.5 * y * y) / normal::cdf(s);
}

BoundCheck upper(const std::string& q, const std::string& rel, double bound) {
  BoundCheck b;
  b.quantity = q;
  b.relation = rel;
  b.bound = bound;
  b.extreme = -std::numeric_limits<double>::infinity();
  return b;
}

BoundCheck lower(const std::string& q, const std::string& rel, double bound) {
  BoundCheck b;
  b.quantity = q;
  b.relation = rel;
  b.bound = bound;
  b.extreme = std::numeric_limits<double>::infinity();
  return b;
}

void record(BoundCheck& b, double v) {
  bool ok = true;
  if (b.relation == "<") ok = v < b.bound;
  if (b.relation == "<=") ok = v <= b.bound;
  if (b.relation == ">") ok = v > b.bound;
  if (b.relation == ">=") ok = v >= b.bound;
  if (!ok) ++b.violations;
  if (b.relation[0] == '<') {
    b.extreme = std::max(b.extreme, v);
    b.margin = b.bound - b.extreme;
  } else {
    b.extreme = std::min(b.extreme, v);
    b.margin = b.extreme - b.bound;
  }
}

}  // namespace

double truncated_density(double s, double x) {
  if (x < 0) return 0.0;
  return normal::pdf(x - s) / normal::cdf(s);
}

double truncated_cdf(double s, double x) {
  if (x <= 0) return 0.0;
  return (normal::cdf(x - s) - normal::cdf(-s)) / normal::cdf(s);
}

double unnormalized_mass(double s) { return normal::kSqrt2Pi * normal::cdf(s); }

double phi(double s, double x) {
  if (!(x > 0)) throw Error(ErrorCode::kDomain, "phi_s is defined for x > 0");
  const double g = truncated_cdf(s, x);
  if (g <= 0.5) return normal::quantile(g);
  // Upper tail 1 - G_s(x) = Phi(s - x) / Phi(s).
  return normal::survival_quantile(normal::cdf(s - x) / normal::cdf(s));
}

double psi(double s, double y) {
  const double p = normal::cdf(-s) + normal::cdf(y) * normal::cdf(s);
  if (p <= 0.5) return s + normal::quantile(p);
  return s + normal::survival_quantile(normal::cdf(s) * normal::survival(y));
}

Derivs phi_derivs(double s, double x) {
  Derivs d;
  d.value = phi(s, x);
  d.first = density_ratio(s, x, d.value);
  d.second = -(x - s) * d.first + d.value * d.first * d.first;
  d.tail_warning = std::abs(d.value) > kTailLimit;
  return d;
}

Derivs psi_derivs(double s, double y) {
  Derivs d;
  d.value = psi(s, y);
  d.first = 1.0 / density_ratio(s, d.value, y);
  d.second = -y * d.first + d.first * d.first * (d.value - s);
  d.tail_warning = std::abs(y) > kTailLimit;
  return d;
}

double tail_point(double p) {
  if (!(p > normal::survival(3.0) && p < 0.5)) {
    throw Error(ErrorCode::kDomain, "tail mass outside the [0, 3] bracket");
  }
  double lo = 0.0, hi = 3.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (normal::survival(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TailConstants tail_constants() {
  TailConstants t;
  t.alpha = tail_point(1.0 / 4);
  t.beta = tail_point(9.0 / 32);
  t.gamma = tail_point(7.0 / 16);
  t.delta = tail_point(7.0 / 32);
  t.xi = tail_point(63.0 / 256);
  return t;
}

bool Lemma61Report::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& b) { return b.violations == 0; });
}

Lemma61Report verify_lemma61(int grid) {
  if (grid < 2) throw Error(ErrorCode::kDomain, "grid needs at least two nodes");
  Lemma61Report r;
  r.grid = grid;
  BoundCheck phi_pos = lower("phi", ">", 0.0);
  BoundCheck phi_top = upper("phi", "<", 0.16);
  BoundCheck phi1_lo = lower("phi'", ">=", 1.3);
  BoundCheck phi1_hi = upper("phi'", "<=", 2.05);
  BoundCheck phi2 = upper("phi''", "<=", -0.25);
  BoundCheck psi_pos = lower("psi", ">", 0.0);
  BoundCheck psi_top = upper("psi", "<", 0.85);
  BoundCheck psi1_lo = lower("psi'", ">=", 0.49);
  BoundCheck psi1_hi = upper("psi'", "<=", 0.77);
  BoundCheck psi2 = lower("psi''", ">=", 0.07);
  for (int i = 0; i < grid; ++i) {
    const double s = 0.15 * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double x = 0.74 + 0.03 * j / (grid - 1);
      const Derivs f = phi_derivs(s, x);
      record(phi_pos, f.value);
      record(phi_top, f.value);
      record(phi1_lo, f.first);
      record(phi1_hi, f.first);
      record(phi2, f.second);
      const double y = 0.15 * j / (grid - 1);
      const Derivs g = psi_derivs(s, y);
      record(psi_pos, g.value);
      record(psi_top, g.value);
      record(psi1_lo, g.first);
      record(psi1_hi, g.first);
      record(psi2, g.second);
    }
  }
  r.checks = {phi_pos, phi_top, phi1_lo, phi1_hi, phi2, psi_pos, psi_top, psi1_lo, psi1_hi, psi2};
  return r;
}

MonotonicityReport psi_shift_monotonicity_check(const std::vector<double>& y_grid,
                                                const std::vector<double>& s_grid) {
  constexpr double kSlack = 1e-9;
  const double gamma = tail_constants().gamma;
  MonotonicityReport r;
  for (double y : y_grid) {
    if (y < 0) throw Error(ErrorCode::kDomain, "monotonicity check needs y >= 0");
    for (std::size_t a = 0; a < s_grid.size(); ++a) {
      const double s = s_grid[a];
      if (s < 0) throw Error(ErrorCode::kDomain, "monotonicity check needs s >= 0");
      const double ps = psi(s, y);
      if (!(ps - s > -kSlack)) ++r.positivity_violations;
      for (std::size_t b = 0; b < s_grid.size(); ++b) {
        const double s2 = s_grid[b];
        if (!(s2 > s)) continue;
        ++r.pairs;
        const double ps2 = psi(s2, y);
        if (!(ps2 - s2 < ps - s + kSlack)) ++r.decreasing_violations;
        if (y <= gamma && !(ps2 >= ps - kSlack)) ++r.increasing_violations;
      }
    }
  }
  return r;
}

FieldValue theta_field(const LiftedMeasure& l, double s, const Vector& x) {
  if (x.size() != l.dim()) throw Error(ErrorCode::kDimension, "point dimension");
  FieldValue out{Vector::Zero(l.dim()), Matrix::Zero(l.dim(), l.dim())};
  for (int i = 0; i < l.size(); ++i) {
    const Vector u = l.points.col(i);
    const double t = u.dot(x);
    if (!(t > 0)) throw Error(ErrorCode::kOutsideCone, "point outside the cone <u_i, x> > 0");
    const Derivs d = phi_derivs(s, t);
    out.value += l.weights[i] * d.value * u;
    out.jacobian += l.weights[i] * d.first * u * u.transpose();
  }
  return out;
}

FieldValue psi_field(const LiftedMeasure& l, double s, const Vector& y) {
  if (y.size() != l.dim()) throw Error(ErrorCode::kDimension, "point dimension");
  FieldValue out{Vector::Zero(l.dim()), Matrix::Zero(l.dim(), l.dim())};
  for (int i = 0; i < l.size(); ++i) {
    const Vector u = l.points.col(i);
    const Derivs d = psi_derivs(s, u.dot(y));
    out.value += l.weights[i] * d.value * u;
    out.jacobian += l.weights[i] * d.first * u * u.transpose();
  }
  return out;
}

}  // namespace simplexstab::transport
