#include "simplexstab/isotropic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "simplexstab/random.hpp"

namespace simplexstab {
namespace {

bool next_combination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == m - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

// Rows: upper-triangular entries of u u^T, then u. Column i belongs to atom i.
Matrix constraint_matrix(const Matrix& points) {
  const int n = static_cast<int>(points.rows());
  const int k = static_cast<int>(points.cols());
  Matrix a(n * (n + 3) / 2, k);
  for (int i = 0; i < k; ++i) {
    int r = 0;
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) a(r++, i) = points(p, i) * points(q, i);
    }
    for (int p = 0; p < n; ++p) a(r++, i) = points(p, i);
  }
  return a;
}

double det_squared(const Matrix& points, const std::vector<int>& idx) {
  const int n = static_cast<int>(points.rows());
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = points.col(idx[j]);
  const double d = m.determinant();
  return d * d;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Matrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.cols() != weights_.size()) {
    throw Error(ErrorCode::kDimension, "points and weights differ in count");
  }
  if (points_.rows() < 1 || points_.cols() < 1) throw Error(ErrorCode::kDomain, "empty measure");
  for (int i = 0; i < size(); ++i) {
    if (!(weights_[i] > 0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorCode::kDomain, "weights must be positive");
    }
    if (std::abs(points_.col(i).norm() - 1.0) > 1e-12) {
      throw Error(ErrorCode::kDomain, "measure points must be unit vectors");
    }
  }
}

Matrix DiscreteMeasure::moment() const {
  return points_ * weights_.asDiagonal() * points_.transpose();
}

Vector DiscreteMeasure::barycenter() const { return points_ * weights_; }

DiscreteMeasure simplex_measure(int n) {
  if (n < 2) throw Error(ErrorCode::kDimension, "simplex measure needs n >= 2");
  // Same construction as regular_simplex, kept local to avoid a geometry
  // dependency.
  Matrix v(1, 2);
  v << -1.0, 1.0;
  for (int d = 2; d <= n; ++d) {
    Matrix next = Matrix::Zero(d, d + 1);
    next(d - 1, 0) = 1.0;
    next.block(0, 1, d - 1, d) = std::sqrt(1.0 - 1.0 / (double(d) * d)) * v;
    next.block(d - 1, 1, 1, d).setConstant(-1.0 / d);
    v = std::move(next);
  }
  for (int i = 0; i <= n; ++i) v.col(i).normalize();
  return DiscreteMeasure(std::move(v), Vector::Constant(n + 1, double(n) / (n + 1)));
}

DiscreteMeasure cross_measure(int n) {
  Matrix v(n, 2 * n);
  v << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  return DiscreteMeasure(std::move(v), Vector::Constant(2 * n, 0.5));
}

MeasureReport validate(const DiscreteMeasure& mu) {
  const int n = mu.dim();
  MeasureReport r;
  r.isotropy_residual = (mu.moment() - Matrix::Identity(n, n)).norm();
  r.centering_residual = mu.barycenter().norm();
  r.mass_residual = std::abs(mu.weights().sum() - n);
  return r;
}

DiscreteMeasure isotropize(const Matrix& points, const Vector& weights) {
  if (points.cols() != weights.size()) {
    throw Error(ErrorCode::kDimension, "points and weights differ in count");
  }
  const Matrix m = points * weights.asDiagonal() * points.transpose();
  const Matrix root = sym_inv_sqrt(m);
  Matrix out = root * points;
  Vector w = weights;
  for (int i = 0; i < out.cols(); ++i) {
    const double len = out.col(i).norm();
    if (!(len > 0)) throw Error(ErrorCode::kSingular, "zero point in measure");
    out.col(i) /= len;
    w[i] *= len * len;
  }
  return DiscreteMeasure(std::move(out), std::move(w));
}

DiscreteMeasure reduce_support(const DiscreteMeasure& mu, double tol) {
  const int n = mu.dim();
  const MeasureReport report = validate(mu);
  if (!report.passes(tol)) {
    throw Error(ErrorCode::kInfeasible, "reduce_support needs a centered isotropic input");
  }
  std::vector<int> alive(mu.size());
  std::iota(alive.begin(), alive.end(), 0);
  Vector c = mu.weights();
  const Matrix full = constraint_matrix(mu.points());
  while (true) {
    const int k = static_cast<int>(alive.size());
    Matrix a(full.rows(), k);
    for (int j = 0; j < k; ++j) a.col(j) = full.col(alive[j]);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) {
      if (s[i] > 1e-10 * std::max(1.0, s[0])) ++rank;
    }
    if (rank >= k) break;
    const Vector z = svd.matrixV().col(k - 1);
    // Largest steps in +z and -z keeping weights nonnegative.
    double up = INFINITY, down = INFINITY;
    int up_hit = -1, down_hit = -1;
    for (int j = 0; j < k; ++j) {
      const double cj = c[alive[j]];
      if (z[j] < -1e-14 && cj / -z[j] < up) {
        up = cj / -z[j];
        up_hit = j;
      }
      if (z[j] > 1e-14 && cj / z[j] < down) {
        down = cj / z[j];
        down_hit = j;
      }
    }
    double step;
    int hit;
    if (up_hit < 0 && down_hit < 0) break;
    if (down_hit < 0 || (up_hit >= 0 && (up < down || (up == down && up_hit <= down_hit)))) {
      step = up;
      hit = up_hit;
    } else {
      step = -down;
      hit = down_hit;
    }
    for (int j = 0; j < k; ++j) c[alive[j]] += step * z[j];
    c[alive[hit]] = 0.0;
    std::vector<int> next;
    for (int j = 0; j < k; ++j) {
      if (c[alive[j]] > 1e-15) next.push_back(alive[j]);
    }
    alive = std::move(next);
  }
  Matrix pts(n, static_cast<int>(alive.size()));
  Vector w(static_cast<int>(alive.size()));
  for (int j = 0; j < static_cast<int>(alive.size()); ++j) {
    pts.col(j) = mu.points().col(alive[j]);
    w[j] = c[alive[j]];
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

BallBartheResult ball_barthe_check(const DiscreteMeasure& mu, const Vector& t, std::uint64_t seed) {
  const int n = mu.dim();
  const int k = mu.size();
  if (t.size() != k) throw Error(ErrorCode::kDimension, "need one t per atom");
  if ((t.array() <= 0).any()) throw Error(ErrorCode::kDomain, "t must be positive");
  const Vector& c = mu.weights();
  const Matrix& u = mu.points();
  BallBartheResult r;
  r.lhs = (u * (t.cwiseProduct(c)).asDiagonal() * u.transpose()).determinant();
  r.rhs = std::exp((c.array() * t.array().log()).sum());
  // By Cauchy-Binet t_0^2 equals the determinant itself.
  const double t0 = std::sqrt(std::max(r.lhs, 0.0));
  auto term = [&](const std::vector<int>& idx) {
    double cs = 1.0, ts = 1.0;
    for (int i : idx) {
      cs *= c[i];
      ts *= t[i];
    }
    const double ratio = std::sqrt(ts) / t0 - 1.0;
    return cs * det_squared(u, idx) * ratio * ratio;
  };
  double sum = 0.0;
  if (binomial(k, n) <= kSubsetEnumerationCap) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      sum += term(idx);
    } while (next_combination(idx, k));
  } else {
    // Distinct random subsets; their partial sum bounds theta* from below.
    r.theta_exact = false;
    const RandomSource rng{seed, 0x7e7a};
    std::set<std::vector<int>> seen;
    for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(kSubsetSamples); ++s) {
      std::set<int> pick;
      std::uint32_t block = 0;
      // Floyd's algorithm for a uniform n-subset.
      for (int j = k - n; j < k; ++j) {
        const auto uni = rng.uniforms(s, block++);
        const int r_idx = static_cast<int>(uni[0] * (j + 1));
        if (!pick.insert(std::min(r_idx, j)).second) pick.insert(j);
      }
      std::vector<int> idx(pick.begin(), pick.end());
      if (seen.insert(idx).second) sum += term(idx);
    }
  }
  r.theta_star = 1.0 + 0.5 * sum;
  return r;
}

double subset_value(const DiscreteMeasure& mu, const std::vector<int>& indices) {
  if (static_cast<int>(indices.size()) != mu.dim()) {
    throw Error(ErrorCode::kDimension, "subset must have n indices");
  }
  double cs = 1.0;
  for (int i : indices) cs *= mu.weights()[i];
  return cs * det_squared(mu.points(), indices);
}

SubsetValue big_determinant_subset(const DiscreteMeasure& mu) {
  const int n = mu.dim();
  const int k = mu.size();
  if (k < n) throw Error(ErrorCode::kDimension, "fewer atoms than dimensions");
  if (binomial(k, n) > kSubsetEnumerationCap) {
    throw Error(ErrorCode::kEnumerationTooLarge, "too many subsets; reduce the support first");
  }
  SubsetValue best;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  do {
    const double v = subset_value(mu, idx);
    if (v > best.value) {
      best.value = v;
      best.indices = idx;
    }
  } while (next_combination(idx, k));
  return best;
}

double pair_stability_factor(double beta, double t_a, double t_b) {
  const double d = t_a - t_b;
  const double s = t_a + t_b;
  return 1.0 + beta * d * d / (4.0 * s * s);
}

LiftedMeasure lift(const DiscreteMeasure& mu, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::kDomain, "sign must be +1 or -1");
  const int n = mu.dim();
  const int k = mu.size();
  const double a = std::sqrt(double(n) / (n + 1));
  const double b = 1.0 / std::sqrt(double(n + 1));
  Matrix pts(n + 1, k);
  pts.topRows(n) = sign * a * mu.points();
  pts.row(n).setConstant(b);
  Vector pole = Vector::Unit(n + 1, n);
  return LiftedMeasure{mu, std::move(pts), mu.weights() * (double(n + 1) / n), std::move(pole),
                       sign};
}

Matrix fit_orthonormal_frame(const Matrix& vs, double eta) {
  const int n = static_cast<int>(vs.rows());
  const int k = static_cast<int>(vs.cols());
  if (k < n) throw Error(ErrorCode::kNoFrame, "fewer vectors than dimensions");
  if (!(eta >= 0)) throw Error(ErrorCode::kDomain, "eta must be nonnegative");
  if ((vs * vs.transpose() - Matrix::Identity(n, n)).norm() > 1e-8) {
    throw Error(ErrorCode::kNoFrame, "vectors do not decompose the identity");
  }
  // Assign every long vector to the representative v_1..v_n it is close to.
  Matrix aggregate = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (vs.col(j).norm() <= eta || vs.col(j).norm() == 0) {
      throw Error(ErrorCode::kNoFrame, "representative vector is too short");
    }
  }
  Vector mass = Vector::Zero(n);
  for (int i = 0; i < k; ++i) {
    const double len = vs.col(i).norm();
    if (len <= eta) continue;
    int owner = -1;
    for (int j = 0; j < n; ++j) {
      if (angle_between(vs.col(i), vs.col(j)) <= eta + 1e-12) {
        owner = j;
        break;
      }
    }
    if (owner < 0) throw Error(ErrorCode::kNoFrame, "vector outside every cluster");
    mass[owner] += len * len;
  }
  for (int j = 0; j < n; ++j) {
    aggregate.col(j) = std::sqrt(mass[j]) * vs.col(j).normalized();
  }
  const Matrix w = polar_factor(aggregate);
  const double bound = 3.0 * std::sqrt(double(k)) * eta;
  for (int j = 0; j < n; ++j) {
    if (angle_between(vs.col(j), w.col(j)) > bound + 1e-10) {
      throw Error(ErrorCode::kNoFrame, "fitted frame misses the angle bound");
    }
  }
  return w;
}

}  // namespace simplexstab
