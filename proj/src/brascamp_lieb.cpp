#include "simplexstab/brascamp_lieb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplexstab/lp.hpp"
#include "simplexstab/normal.hpp"
#include "simplexstab/parallel.hpp"
#include "simplexstab/polytope.hpp"
#include "simplexstab/transport.hpp"

namespace simplexstab {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kKktTolerance = 1e-8;

Vector sampling_mean(const BLInstance& inst) {
  const int d = inst.lifted.dim();
  return inst.s * std::sqrt(static_cast<double>(d)) * inst.lifted.pole;
}

double log_sampling_density(const Vector& z) {
  return -0.5 * z.size() * std::log(2 * M_PI) - 0.5 * z.squaredNorm();
}

void check_instance(const BLInstance& inst) {
  if (inst.lifted.size() < 1) throw Error(ErrorCode::kDomain, "empty lifted measure");
  if (!(inst.s >= 0)) throw Error(ErrorCode::kDomain, "s must be nonnegative");
}

FunctionalEstimate finish(const std::vector<MeanAccumulator>& parts, std::uint64_t samples) {
  MeanAccumulator all;
  for (const auto& p : parts) all.merge(p);
  return {all.mean, all.stderr_of_mean(), Method::kMcDirect, samples};
}

}  // namespace

double bl_bound(const BLInstance& inst) {
  return std::pow(transport::unnormalized_mass(inst.s), inst.lifted.dim());
}

FunctionalEstimate bl_lhs(const BLInstance& inst, std::uint64_t samples,
                          const RandomSource& source) {
  check_instance(inst);
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const int d = inst.lifted.dim();
  const Vector m = sampling_mean(inst);
  const Matrix& u = inst.lifted.points;
  const Vector& c = inst.lifted.weights;
  auto parts = map_blocks<MeanAccumulator>(
      samples, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        MeanAccumulator acc;
        Vector z(d);
        for (std::uint64_t i = begin; i < end; ++i) {
          source.normals(i, z.data(), d);
          const Vector x = m + z;
          const Vector t = u.transpose() * x;
          if (t.minCoeff() < 0) {
            acc.add(0.0);
            continue;
          }
          const double log_f = -0.5 * (c.array() * (t.array() - inst.s).square()).sum();
          acc.add(std::exp(log_f - log_sampling_density(z)));
        }
        return acc;
      });
  return finish(parts, samples);
}

RblSolver::RblSolver(const BLInstance& inst)
    : u_(inst.lifted.points),
      c_(inst.lifted.weights),
      a_(inst.lifted.points * inst.lifted.weights.asDiagonal()),
      s_(inst.s) {
  check_instance(inst);
}

// Equality-constrained optimum with theta_i = 0 on the fixed set. On the free
// set theta = s + U_F^T lambda where (U_F C_F U_F^T) lambda = x - s A_F 1.
bool RblSolver::solve_free_set(const std::vector<bool>& fixed, const Vector& x, Vector& theta,
                               Vector& lambda) const {
  const int d = static_cast<int>(u_.rows());
  const int k = static_cast<int>(u_.cols());
  Matrix m = Matrix::Zero(d, d);
  Vector rhs = x;
  for (int i = 0; i < k; ++i) {
    if (fixed[i]) continue;
    m += c_[i] * u_.col(i) * u_.col(i).transpose();
    rhs -= s_ * a_.col(i);
  }
  lambda = m.completeOrthogonalDecomposition().solve(rhs);
  theta = Vector::Zero(k);
  for (int i = 0; i < k; ++i) {
    if (!fixed[i]) theta[i] = s_ + u_.col(i).dot(lambda);
  }
  return (a_ * theta - x).norm() <= 1e-10 * std::max(1.0, x.norm());
}

double RblSolver::kkt_residual(const Vector& theta, const Vector& lambda, const Vector& x) const {
  double r = (a_ * theta - x).norm() / std::max(1.0, x.norm());
  for (int i = 0; i < theta.size(); ++i) {
    const double want = std::max(0.0, s_ + u_.col(i).dot(lambda));
    r = std::max(r, std::abs(theta[i] - want));
  }
  return r;
}

RblPoint RblSolver::solve(const Vector& x) {
  const int k = static_cast<int>(u_.cols());
  RblPoint out;
  std::vector<bool> fixed;
  Vector theta, lambda;

  bool started = false;
  if (has_warm_) {
    fixed = warm_fixed_;
    if (solve_free_set(fixed, x, theta, lambda) && theta.minCoeff() >= 0) started = true;
  }
  if (!started) {
    const lp::Result r = lp::minimize_standard(a_, x, Vector::Zero(k));
    if (r.status != lp::Status::kOptimal) return out;
    theta = r.x.cwiseMax(0.0);
    fixed.assign(k, false);
    for (int i = 0; i < k; ++i) fixed[i] = theta[i] == 0.0;
  }

  bool converged = false;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    Vector target;
    const bool consistent = solve_free_set(fixed, x, target, lambda);
    const Vector p = target - theta;
    const double scale = std::max(1.0, theta.norm());
    if (!consistent || p.norm() <= 1e-12 * scale) {
      // Multiplier of theta_i >= 0 is -c_i (s + <u_i, lambda>).
      int drop = -1;
      double worst = 1e-12 * scale;
      for (int i = 0; i < k; ++i) {
        if (!fixed[i]) continue;
        const double v = s_ + u_.col(i).dot(lambda);
        if (v > worst) {
          worst = v;
          drop = i;
        }
      }
      if (drop < 0 && consistent) {
        converged = true;
        break;
      }
      if (drop < 0) break;
      fixed[drop] = false;
      continue;
    }
    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < k; ++i) {
      if (fixed[i] || p[i] >= 0) continue;
      const double step = -theta[i] / p[i];
      if (step < alpha) {
        alpha = step;
        block = i;
      }
    }
    theta += alpha * p;
    if (block >= 0) {
      theta[block] = 0.0;
      fixed[block] = true;
    }
    theta = theta.cwiseMax(0.0);
  }

  if (converged) {
    theta = theta.cwiseMax(0.0);
    warm_fixed_ = fixed;
    has_warm_ = true;
  }
  out.feasible = true;
  out.theta = theta;
  out.iterations = it;
  out.kkt_residual = converged ? kkt_residual(theta, lambda, x)
                               : std::numeric_limits<double>::infinity();
  out.log_value = -0.5 * (c_.array() * (theta.array() - s_).square()).sum();
  return out;
}

namespace {

struct RblPart {
  MeanAccumulator acc;
  std::uint64_t infeasible = 0;
  std::uint64_t failures = 0;
  double max_residual = 0;
  int max_iterations = 0;
};

}  // namespace

RblEstimate rbl_lhs(const BLInstance& inst, std::uint64_t samples, const RandomSource& source) {
  check_instance(inst);
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const int d = inst.lifted.dim();
  const Vector m = sampling_mean(inst);
  // Warm starts live inside a block, so the result does not depend on workers.
  auto parts = map_blocks<RblPart>(
      samples, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        RblPart part;
        RblSolver solver(inst);
        Vector z(d);
        for (std::uint64_t i = begin; i < end; ++i) {
          source.normals(i, z.data(), d);
          const RblPoint p = solver.solve(m + z);
          if (!p.feasible) {
            ++part.infeasible;
            part.acc.add(0.0);
            continue;
          }
          if (!(p.kkt_residual < kKktTolerance)) ++part.failures;
          if (std::isfinite(p.kkt_residual)) {
            part.max_residual = std::max(part.max_residual, p.kkt_residual);
          }
          part.max_iterations = std::max(part.max_iterations, p.iterations);
          part.acc.add(std::exp(p.log_value - log_sampling_density(z)));
        }
        return part;
      });
  RblEstimate out;
  MeanAccumulator all;
  for (const auto& p : parts) {
    all.merge(p.acc);
    out.infeasible += p.infeasible;
    out.kkt_failures += p.failures;
    out.max_kkt_residual = std::max(out.max_kkt_residual, p.max_residual);
    out.max_iterations = std::max(out.max_iterations, p.max_iterations);
  }
  out.estimate = {all.mean, all.stderr_of_mean(), Method::kMcDirect, samples};
  return out;
}

IdentityCheck simplex_identity_check(int n, double s, IdentityVariant variant,
                                     std::uint64_t samples, const RandomSource& source) {
  if (n < 2) throw Error(ErrorCode::kDimension, "simplex needs n >= 2");
  if (!(s >= 0)) throw Error(ErrorCode::kDomain, "s must be nonnegative");
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const Polytope simplex = regular_simplex(n);
  const bool polar_side = variant == IdentityVariant::kPolar;
  const Body body = polar_side ? Body(polar(simplex)) : Body(simplex);
  const std::vector<double> g = sample_gauges(body, samples, source);
  const double shift = s * std::sqrt(n + 1.0);
  const double factor = polar_side ? std::sqrt(static_cast<double>(n)) : 1.0 / std::sqrt(n);
  MeanAccumulator acc;
  for (double v : g) acc.add(normal::cdf(shift - factor * v));
  const double scale = std::pow(2 * M_PI, (n + 1) / 2.0);
  IdentityCheck out;
  out.lhs = scale * acc.mean;
  out.rhs = std::pow(transport::unnormalized_mass(s), n + 1);
  out.relative_gap = (out.lhs - out.rhs) / out.rhs;
  out.relative_error = scale * acc.stderr_of_mean() / out.rhs;
  return out;
}

std::vector<SmoothingRow> smoothing_inequality_check(const DiscreteMeasure& mu,
                                                     const std::vector<double>& tau_grid,
                                                     std::uint64_t samples,
                                                     const RandomSource& source) {
  const int n = mu.dim();
  if (n < 2) throw Error(ErrorCode::kDimension, "need n >= 2");
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const Polytope hull = Polytope::from_vertices(mu.points()).pruned();
  const Polytope simplex = regular_simplex(n);
  // Both gauge families on one shared sample set.
  const std::vector<double> g_simplex = sample_gauges(Body(simplex), samples, source);
  const std::vector<double> g_hull = sample_gauges(Body(hull), samples, source);
  const std::vector<double> g_simplex_polar = sample_gauges(Body(polar(simplex)), samples, source);
  const std::vector<double> g_hull_polar =
      sample_gauges(Body(Polytope::from_halfspaces(mu.points().transpose(),
                                                   Vector::Ones(mu.size()))),
                    samples, source);
  const double rn = std::sqrt(static_cast<double>(n));

  std::vector<SmoothingRow> rows;
  for (bool polar_side : {false, true}) {
    const auto& gs = polar_side ? g_simplex_polar : g_simplex;
    const auto& gc = polar_side ? g_hull_polar : g_hull;
    for (double tau : tau_grid) {
      // int_0^G exp(-(t - tau)^2 / (2 v)) dt with v = n or 1/n.
      const double sd = polar_side ? 1.0 / rn : rn;
      const double scale = normal::kSqrt2Pi * sd;
      const double base = normal::cdf(-tau / sd);
      auto smoothed = [&](double g) { return scale * (normal::cdf((g - tau) / sd) - base); };
      MeanAccumulator a, b, diff;
      for (std::size_t i = 0; i < gs.size(); ++i) {
        const double vs = smoothed(gs[i]);
        const double vc = smoothed(gc[i]);
        a.add(vs);
        b.add(vc);
        diff.add(polar_side ? vc - vs : vs - vc);
      }
      SmoothingRow row;
      row.tau = tau;
      row.polar = polar_side;
      row.simplex_side = a.mean;
      row.body_side = b.mean;
      row.margin = diff.mean;
      row.std_error = diff.stderr_of_mean();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace simplexstab
