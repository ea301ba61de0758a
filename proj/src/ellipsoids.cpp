#include "simplexstab/ellipsoids.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "simplexstab/random.hpp"

namespace simplexstab {
namespace {

constexpr double kContactResidual = 1e-6;
constexpr double kMinRetryEps = 1e-11;

// Least-squares projection of weights onto John's constraints, dropping atoms
// whose weight turns nonpositive.
DiscreteMeasure polish(Matrix points, Vector weights) {
  const int n = static_cast<int>(points.rows());
  for (int i = 0; i < points.cols(); ++i) points.col(i).normalize();
  Vector target(n * (n + 3) / 2);
  {
    int r = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) target[r++] = p == q ? 1.0 : 0.0;
    for (int p = 0; p < n; ++p) target[r++] = 0.0;
  }
  for (int round = 0; round < 64; ++round) {
    const int k = static_cast<int>(points.cols());
    Matrix a(target.size(), k);
    for (int i = 0; i < k; ++i) {
      int r = 0;
      for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) a(r++, i) = points(p, i) * points(q, i);
      for (int p = 0; p < n; ++p) a(r++, i) = points(p, i);
    }
    const Vector residual = a * weights - target;
    const Vector correction = a.completeOrthogonalDecomposition().solve(residual);
    Vector next = weights - correction;
    int worst = -1;
    for (int i = 0; i < k; ++i) {
      if (next[i] <= 0 && (worst < 0 || next[i] < next[worst])) worst = i;
    }
    if (worst < 0) return DiscreteMeasure(std::move(points), std::move(next));
    Matrix kept_pts(n, k - 1);
    Vector kept_w(k - 1);
    for (int i = 0, j = 0; i < k; ++i) {
      if (i == worst) continue;
      kept_pts.col(j) = points.col(i);
      kept_w[j++] = weights[i];
    }
    points = std::move(kept_pts);
    weights = std::move(kept_w);
  }
  throw Error(ErrorCode::kNormalization, "weight polish did not settle");
}

// Polar of an ellipsoid {(y-d)^T a (y-d) <= 1} that contains the origin.
Ellipsoid polar_ellipsoid(const Ellipsoid& e) {
  const Matrix ainv = e.shape.inverse();
  const Vector& d = e.center;
  const Matrix q = ainv - d * d.transpose();
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kGaugeUndefined, "ellipsoid does not contain the origin");
  }
  const Vector qd = llt.solve(d);
  Ellipsoid out;
  out.center = -qd;
  out.shape = q / (1.0 + d.dot(qd));
  return out;
}

}  // namespace

double Ellipsoid::volume_factor() const { return 1.0 / std::sqrt(shape.determinant()); }

bool Ellipsoid::contains(const Vector& x, double tol) const {
  const Vector d = x - center;
  return d.dot(shape * d) <= 1.0 + tol;
}

void check_ellipsoid(const Ellipsoid& e) {
  if (e.shape.rows() != e.center.size() || e.shape.cols() != e.center.size()) {
    throw Error(ErrorCode::kDimension, "ellipsoid shape/center mismatch");
  }
  if ((e.shape - e.shape.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::kDomain, "ellipsoid shape not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(e.shape);
  if (es.eigenvalues().minCoeff() <= 0) {
    throw Error(ErrorCode::kDomain, "ellipsoid shape not positive definite");
  }
}

// Khachiyan iterations on points that are already roughly isotropic.
static MveeResult khachiyan(const Matrix& points, double eps, int max_iterations) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (!(eps > 0 && eps < 0.5)) throw Error(ErrorCode::kDomain, "eps must lie in (0, 0.5)");
  if (m < n + 1) throw Error(ErrorCode::kDegenerate, "too few points for a full-dimensional hull");
  const int d = n + 1;
  Matrix q(d, m);
  q.topRows(n) = points;
  q.row(n).setOnes();
  {
    Eigen::JacobiSVD<Matrix> svd(q);
    const Vector& s = svd.singularValues();
    if (s[d - 1] <= 1e-10 * s[0]) {
      throw Error(ErrorCode::kDegenerate, "points do not affinely span the space");
    }
  }
  Vector u = Vector::Constant(m, 1.0 / m);
  MveeResult result;
  Vector mvals(m);
  for (int it = 0;; ++it) {
    const Matrix x = q * u.asDiagonal() * q.transpose();
    Eigen::LLT<Matrix> llt(x);
    const Matrix sol = llt.solve(q);
    mvals = (q.cwiseProduct(sol)).colwise().sum().transpose();
    int up = 0;
    mvals.maxCoeff(&up);
    int down = -1;
    for (int i = 0; i < m; ++i) {
      if (u[i] > 0 && (down < 0 || mvals[i] < mvals[down])) down = i;
    }
    const double plus = mvals[up] / d - 1.0;
    const double minus = 1.0 - mvals[down] / d;
    result.gap = std::max(plus, minus);
    result.iterations = it;
    if (result.gap <= eps || it >= max_iterations) break;
    if (plus >= minus) {
      const double lambda = (mvals[up] - d) / (d * (mvals[up] - 1.0));
      u *= 1.0 - lambda;
      u[up] += lambda;
    } else {
      double lambda = (d - mvals[down]) / (d * (mvals[down] - 1.0));
      const double cap = u[down] / (1.0 - u[down]);
      if (lambda >= cap) {
        lambda = cap;
        u *= 1.0 + lambda;
        u[down] = 0.0;
      } else {
        u *= 1.0 + lambda;
        u[down] -= lambda;
      }
    }
  }
  if (result.gap > eps) {
    throw Error(ErrorCode::kConvergence, "MVEE iteration cap reached");
  }
  const Vector c = points * u;
  const Matrix cov = points * u.asDiagonal() * points.transpose() - c * c.transpose();
  Matrix shape = cov.inverse() / n;
  shape = 0.5 * (shape + shape.transpose());
  // Scale up so every point lies inside.
  double worst = 0;
  for (int i = 0; i < m; ++i) {
    const Vector dv = points.col(i) - c;
    worst = std::max(worst, dv.dot(shape * dv));
  }
  if (worst > 1.0) shape /= worst;
  result.ellipsoid = {c, shape};
  result.weights = u;
  return result;
}

MveeResult mvee(const Matrix& points, double eps, int max_iterations) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (m < n + 1) throw Error(ErrorCode::kDegenerate, "too few points for a full-dimensional hull");
  // The problem is affine-equivariant; whitening keeps flat hulls well conditioned.
  const Vector c0 = points.rowwise().mean();
  const Matrix centered = points.colwise() - c0;
  const Matrix cov = centered * centered.transpose() / m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (!(es.eigenvalues().minCoeff() > 1e-20 * std::max(1.0, es.eigenvalues().maxCoeff()))) {
    throw Error(ErrorCode::kDegenerate, "points do not affinely span the space");
  }
  const Matrix w = sym_inv_sqrt(cov);
  MveeResult r = khachiyan(w * centered, eps, max_iterations);
  r.ellipsoid.center = c0 + sym_sqrt(cov) * r.ellipsoid.center;
  Matrix shape = w * r.ellipsoid.shape * w;
  r.ellipsoid.shape = 0.5 * (shape + shape.transpose());
  return r;
}

namespace {

std::optional<JohnDecomposition> try_contact_measure(const Matrix& vertices, int n, double eps,
                                                     MeasureReport& report) {
  const MveeResult fit = mvee(vertices, eps);
  const Matrix linear = sym_sqrt(fit.ellipsoid.shape);
  const Vector& shift = fit.ellipsoid.center;
  const Matrix mapped = linear * (vertices.colwise() - shift);
  std::vector<int> contact;
  for (int i = 0; i < fit.weights.size(); ++i) {
    if (fit.weights[i] > 10 * eps) contact.push_back(i);
  }
  Matrix pts(n, static_cast<int>(contact.size()));
  Vector w(static_cast<int>(contact.size()));
  for (int j = 0; j < static_cast<int>(contact.size()); ++j) {
    pts.col(j) = mapped.col(contact[j]);
    w[j] = n * fit.weights[contact[j]];
  }
  const DiscreteMeasure polished = polish(std::move(pts), std::move(w));
  report = validate(polished);
  if (!report.passes(kContactResidual)) return std::nullopt;
  DiscreteMeasure reduced = reduce_support(polished, kContactResidual);
  report = validate(reduced);
  Polytope body = Polytope::from_vertices(mapped);
  return JohnDecomposition{std::move(body), std::move(reduced), ContactKind::kLowner,
                           linear,          shift,              report};
}

}  // namespace

JohnDecomposition john_contact_measure(const Polytope& k, double eps) {
  const Matrix vertices = k.with_vertices().vertices();
  MeasureReport report;
  // Near-contacts can spoil the polish; a tighter fit separates them.
  for (double e = eps; e >= kMinRetryEps; e *= 1e-2) {
    if (auto d = try_contact_measure(vertices, k.dim(), e, report)) return std::move(*d);
  }
  throw Error(ErrorCode::kNormalization,
              "contact weights miss John's condition: isotropy " +
                  std::to_string(report.isotropy_residual) + ", centering " +
                  std::to_string(report.centering_residual) + ", mass " +
                  std::to_string(report.mass_residual));
}

Ellipsoid john_ellipsoid_of_polar(const Polytope& k, double eps) {
  const int n = k.dim();
  const Halfspaces h = k.with_halfspaces().halfspaces();
  Vector z = Vector::Zero(n);
  Ellipsoid inner;
  for (int round = 0; round < 200; ++round) {
    const Vector offsets = h.offsets - h.normals * z;
    if ((offsets.array() <= 0).any()) {
      throw Error(ErrorCode::kGaugeUndefined, "origin is not interior to the body");
    }
    // Vertices of (K - z)^o are a_j / b_j.
    const Matrix polar_vertices = (offsets.cwiseInverse().asDiagonal() * h.normals).transpose();
    const Ellipsoid outer = mvee(polar_vertices, eps).ellipsoid;
    inner = polar_ellipsoid(outer);
    const double scale = std::sqrt(inner.shape.inverse().trace() / n);
    z += inner.center;
    if (inner.center.norm() <= 1e-10 * scale) break;
  }
  inner.center = z;
  return inner;
}

DiscreteMeasure random_isotropic_measure(int n, int k_points, std::uint64_t seed) {
  if (k_points < n + 1) throw Error(ErrorCode::kDomain, "need at least n+1 points");
  const RandomSource rng{seed, 0x150};
  Matrix pts(n, k_points);
  for (int i = 0; i < k_points; ++i) pts.col(i) = rng.normal_vector(i, n);
  return john_contact_measure(Polytope::from_vertices(std::move(pts))).contacts;
}

}  // namespace simplexstab
