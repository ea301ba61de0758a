#include "simplexstab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "simplexstab/lp.hpp"
#include "simplexstab/parallel.hpp"

namespace simplexstab {
namespace {

constexpr int kMaxEnumerationDim = 4;
constexpr double kEnumerationBudget = 5e6;

bool next_combination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == m - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

int affine_rank(const Matrix& points) {
  if (points.cols() < 2) return 0;
  const Vector mean = points.rowwise().mean();
  const Matrix centered = points.colwise() - mean;
  Eigen::JacobiSVD<Matrix> svd(centered);
  const Vector& s = svd.singularValues();
  const double scale = std::max(1.0, points.cwiseAbs().maxCoeff());
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-10 * scale * std::sqrt(static_cast<double>(points.cols()))) ++rank;
  }
  return rank;
}

Halfspaces normalize(Matrix normals, Vector offsets) {
  if (normals.rows() != offsets.size()) {
    throw Error(ErrorCode::kRepresentation, "normals/offsets size mismatch");
  }
  for (int j = 0; j < normals.rows(); ++j) {
    const double nrm = normals.row(j).norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm) || !std::isfinite(offsets[j])) {
      throw Error(ErrorCode::kRepresentation, "halfspace with zero or non-finite data");
    }
    normals.row(j) /= nrm;
    offsets[j] /= nrm;
  }
  return {std::move(normals), std::move(offsets)};
}

// Radius of the largest ball inside {A x <= b} (capped).
double chebyshev_radius(const Halfspaces& h, int n) {
  Matrix a(h.count() + 1, n + 1);
  Vector b(h.count() + 1);
  a.topLeftCorner(h.count(), n) = h.normals;
  a.topRightCorner(h.count(), 1).setOnes();
  b.head(h.count()) = h.offsets;
  a.row(h.count()).setZero();
  a(h.count(), n) = 1.0;
  b[h.count()] = 1e6;
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  const lp::Result r = lp::maximize_halfspaces(a, b, c);
  if (r.status != lp::Status::kOptimal) return 0.0;
  return r.value;
}

void require_enumerable(int n) {
  if (n > kMaxEnumerationDim) {
    throw Error(ErrorCode::kRepresentation,
                "representation conversion supported only for n <= 4; supply the other representation");
  }
}

// Orthonormal basis (columns) of the orthogonal complement of unit vector a.
Matrix complement_basis(const Vector& a) {
  const int n = static_cast<int>(a.size());
  Matrix m(n, 1);
  m.col(0) = a;
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  return q.rightCols(n - 1);
}

double hull_volume(const Matrix& points) {
  const int d = static_cast<int>(points.rows());
  if (d == 1) return points.maxCoeff() - points.minCoeff();
  const Halfspaces facets = enumerate_facets(points);
  const Vector center = points.rowwise().mean();
  const double scale = std::max(1.0, points.cwiseAbs().maxCoeff());
  double volume = 0.0;
  for (int j = 0; j < facets.count(); ++j) {
    const Vector a = facets.normals.row(j).transpose();
    const double b = facets.offsets[j];
    std::vector<int> on;
    for (int i = 0; i < points.cols(); ++i) {
      if (std::abs(a.dot(points.col(i)) - b) <= 1e-9 * scale) on.push_back(i);
    }
    if (static_cast<int>(on.size()) < d) continue;
    const Matrix basis = complement_basis(a);
    Matrix projected(d - 1, static_cast<int>(on.size()));
    for (int t = 0; t < static_cast<int>(on.size()); ++t) {
      projected.col(t) = basis.transpose() * points.col(on[t]);
    }
    volume += (b - a.dot(center)) * hull_volume(projected) / d;
  }
  return volume;
}

}  // namespace

// ---------------------------------------------------------------- Polytope

Polytope Polytope::from_vertices(Matrix vertices) {
  if (vertices.cols() == 0 || vertices.rows() < 1) {
    throw Error(ErrorCode::kRepresentation, "empty vertex list");
  }
  if (!vertices.allFinite()) {
    throw Error(ErrorCode::kRepresentation, "non-finite vertex coordinate");
  }
  const int n = static_cast<int>(vertices.rows());
  if (affine_rank(vertices) < n) {
    throw Error(ErrorCode::kDegenerate, "vertex set is not full-dimensional");
  }
  Polytope p;
  p.dim_ = n;
  p.vertices_ = std::move(vertices);
  return p;
}

Polytope Polytope::from_vertices(const PointList& vertices) {
  if (vertices.empty()) throw Error(ErrorCode::kRepresentation, "empty vertex list");
  Matrix m(vertices.front().size(), static_cast<int>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].size() != m.rows()) {
      throw Error(ErrorCode::kDimension, "vertices of mixed dimension");
    }
    m.col(static_cast<int>(i)) = vertices[i];
  }
  return from_vertices(std::move(m));
}

Polytope Polytope::from_halfspaces(Matrix normals, Vector offsets) {
  const int n = static_cast<int>(normals.cols());
  if (n < 1 || normals.rows() < n + 1) {
    throw Error(ErrorCode::kDegenerate, "too few halfspaces for a bounded body");
  }
  Halfspaces h = normalize(std::move(normals), std::move(offsets));
  if (chebyshev_radius(h, n) <= 1e-12) {
    throw Error(ErrorCode::kDegenerate, "halfspace system has empty interior");
  }
  Polytope p;
  p.dim_ = n;
  p.halfspaces_ = std::move(h);
  return p;
}

Polytope Polytope::from_both(Matrix vertices, Matrix normals, Vector offsets) {
  Polytope p = from_vertices(std::move(vertices));
  if (normals.cols() != p.dim_) throw Error(ErrorCode::kDimension, "H-rep dimension mismatch");
  p.halfspaces_ = normalize(std::move(normals), std::move(offsets));
  return p;
}

const Matrix& Polytope::vertices() const {
  if (!vertices_) throw Error(ErrorCode::kRepresentation, "V-representation missing");
  return *vertices_;
}

const Halfspaces& Polytope::halfspaces() const {
  if (!halfspaces_) throw Error(ErrorCode::kRepresentation, "H-representation missing");
  return *halfspaces_;
}

Polytope Polytope::with_vertices() const {
  if (vertices_) return *this;
  require_enumerable(dim_);
  Polytope p = *this;
  Matrix v = enumerate_vertices(*halfspaces_, dim_);
  if (v.cols() < dim_ + 1 || affine_rank(v) < dim_) {
    throw Error(ErrorCode::kRepresentation, "halfspace system is unbounded or degenerate");
  }
  p.vertices_ = std::move(v);
  return p;
}

Polytope Polytope::with_halfspaces() const {
  if (halfspaces_) return *this;
  require_enumerable(dim_);
  Polytope p = *this;
  p.halfspaces_ = enumerate_facets(*vertices_);
  return p;
}

Polytope Polytope::pruned() const {
  const Polytope full = complete();
  const Matrix& v = full.vertices();
  const Halfspaces& h = full.halfspaces();
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (int i = 0; i < v.cols(); ++i) {
    std::vector<int> tight;
    for (int j = 0; j < h.count(); ++j) {
      if (std::abs(h.normals.row(j).dot(v.col(i)) - h.offsets[j]) <= 1e-9 * scale) {
        tight.push_back(j);
      }
    }
    if (static_cast<int>(tight.size()) < dim_) continue;
    Matrix t(static_cast<int>(tight.size()), dim_);
    for (int r = 0; r < static_cast<int>(tight.size()); ++r) t.row(r) = h.normals.row(tight[r]);
    Eigen::FullPivLU<Matrix> lu(t);
    lu.setThreshold(1e-9);
    if (lu.rank() < dim_) continue;
    bool duplicate = false;
    for (int k : keep) {
      if ((v.col(k) - v.col(i)).norm() <= 1e-10 * scale) duplicate = true;
    }
    if (!duplicate) keep.push_back(i);
  }
  Matrix out(dim_, static_cast<int>(keep.size()));
  for (int r = 0; r < static_cast<int>(keep.size()); ++r) out.col(r) = v.col(keep[r]);
  return from_both(std::move(out), h.normals, h.offsets);
}

Polytope Polytope::linear_image(const Matrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw Error(ErrorCode::kDimension, "map size");
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorCode::kSingular, "linear map not invertible");
  Polytope p;
  p.dim_ = dim_;
  if (vertices_) p.vertices_ = m * (*vertices_);
  if (halfspaces_) {
    // <a, m^{-1} y> <= b  <=>  <m^{-T} a, y> <= b.
    Matrix normals = halfspaces_->normals * lu.inverse();
    p.halfspaces_ = normalize(std::move(normals), halfspaces_->offsets);
  }
  return p;
}

Polytope Polytope::translated(const Vector& shift) const {
  Polytope p = *this;
  if (vertices_) p.vertices_ = vertices_->colwise() + shift;
  if (halfspaces_) p.halfspaces_->offsets += halfspaces_->normals * shift;
  return p;
}

Polytope Polytope::scaled(double factor) const {
  if (!(factor > 0)) throw Error(ErrorCode::kDomain, "scale factor must be positive");
  Polytope p = *this;
  if (vertices_) *p.vertices_ *= factor;
  if (halfspaces_) p.halfspaces_->offsets *= factor;
  return p;
}

Vector Polytope::vertex_mean() const { return with_vertices().vertices().rowwise().mean(); }

bool Polytope::contains_point(const Vector& x, double tol) const {
  if (halfspaces_) {
    return ((halfspaces_->normals * x - halfspaces_->offsets).array() <= tol).all();
  }
  return distance_to_hull(x, *vertices_) <= tol;
}

int body_dim(const Body& body) {
  return std::visit(
      [](const auto& b) {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, Ball>) {
          return b.dim;
        } else {
          return b.dim();
        }
      },
      body);
}

// ------------------------------------------------------------ constructors

Polytope regular_simplex(int n) {
  if (n < 2) throw Error(ErrorCode::kDimension, "regular simplex needs n >= 2");
  Matrix v(1, 2);
  v << -1.0, 1.0;
  for (int d = 2; d <= n; ++d) {
    Matrix next = Matrix::Zero(d, d + 1);
    next(d - 1, 0) = 1.0;
    const double radial = std::sqrt(1.0 - 1.0 / (double(d) * d));
    next.block(0, 1, d - 1, d) = radial * v;
    next.block(d - 1, 1, 1, d).setConstant(-1.0 / d);
    v = std::move(next);
  }
  Matrix normals = -v.transpose();
  Vector offsets = Vector::Constant(n + 1, 1.0 / n);
  return Polytope::from_both(std::move(v), std::move(normals), std::move(offsets));
}

Polytope cube(int n) {
  if (n < 1) throw Error(ErrorCode::kDimension, "cube needs n >= 1");
  const int m = 1 << n;
  Matrix v(n, m);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < n; ++i) v(i, c) = (c >> i & 1) ? 1.0 : -1.0;
  }
  Matrix normals(2 * n, n);
  normals << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  return Polytope::from_both(std::move(v), std::move(normals), Vector::Ones(2 * n));
}

Polytope cross_polytope(int n) {
  if (n < 1) throw Error(ErrorCode::kDimension, "cross-polytope needs n >= 1");
  Matrix v(n, 2 * n);
  v << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  const int m = 1 << n;
  Matrix normals(m, n);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < n; ++i) normals(c, i) = (c >> i & 1) ? 1.0 : -1.0;
  }
  return Polytope::from_both(std::move(v), std::move(normals), Vector::Ones(m));
}

// --------------------------------------------------------- support / gauge

double support_function(const Polytope& k, const Vector& u) {
  if (u.size() != k.dim()) throw Error(ErrorCode::kDimension, "direction dimension");
  if (k.has_vertices()) return (k.vertices().transpose() * u).maxCoeff();
  const Halfspaces& h = k.halfspaces();
  const lp::Result r = lp::maximize_halfspaces(h.normals, h.offsets, u);
  if (r.status == lp::Status::kUnbounded) {
    throw Error(ErrorCode::kUnboundedSupport, "support function is unbounded in this direction");
  }
  if (r.status != lp::Status::kOptimal) throw Error(ErrorCode::kInfeasible, "empty polytope");
  return r.value;
}

double support_function(const Ball& b, const Vector& u) { return b.radius * u.norm(); }

double support_function(const Body& k, const Vector& u) {
  return std::visit([&](const auto& body) { return support_function(body, u); }, k);
}

double gauge_norm(const Polytope& k, const Vector& x) {
  if (x.size() != k.dim()) throw Error(ErrorCode::kDimension, "point dimension");
  if (k.has_halfspaces()) {
    const Halfspaces& h = k.halfspaces();
    if ((h.offsets.array() <= 1e-12).any()) {
      throw Error(ErrorCode::kGaugeUndefined, "origin is not an interior point");
    }
    return std::max(0.0, (h.normals * x).cwiseQuotient(h.offsets).maxCoeff());
  }
  // min sum(lambda) s.t. V lambda = x, lambda >= 0; infeasible unless the
  // vertex cone covers x. Interior origin is checked on the coordinate axes.
  const Matrix& v = k.vertices();
  const int m = static_cast<int>(v.cols());
  auto solve = [&](const Vector& target) {
    return lp::minimize_standard(v, target, Vector::Ones(m));
  };
  for (int i = 0; i < k.dim(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      if (solve(sign * Vector::Unit(k.dim(), i)).status != lp::Status::kOptimal) {
        throw Error(ErrorCode::kGaugeUndefined, "origin is not an interior point");
      }
    }
  }
  if (x.norm() == 0.0) return 0.0;
  const lp::Result r = solve(x);
  if (r.status != lp::Status::kOptimal) {
    throw Error(ErrorCode::kGaugeUndefined, "origin is not an interior point");
  }
  return r.value;
}

double gauge_norm(const Ball& b, const Vector& x) {
  if (!(b.radius > 0)) throw Error(ErrorCode::kGaugeUndefined, "ball of radius zero");
  return x.norm() / b.radius;
}

double gauge_norm(const Body& k, const Vector& x) {
  return std::visit([&](const auto& body) { return gauge_norm(body, x); }, k);
}

GaugeEvaluator::GaugeEvaluator(const Body& body) : dim_(body_dim(body)) {
  if (const Ball* b = std::get_if<Ball>(&body)) {
    if (!(b->radius > 0)) throw Error(ErrorCode::kGaugeUndefined, "ball of radius zero");
    ball_radius_ = b->radius;
    return;
  }
  const Polytope& p = std::get<Polytope>(body);
  const Halfspaces h = p.with_halfspaces().halfspaces();
  if ((h.offsets.array() <= 1e-12).any()) {
    throw Error(ErrorCode::kGaugeUndefined, "origin is not an interior point");
  }
  scaled_normals_ = h.offsets.cwiseInverse().asDiagonal() * h.normals;
}

double GaugeEvaluator::operator()(const Vector& x) const {
  if (ball_radius_) return x.norm() / *ball_radius_;
  return std::max(0.0, (scaled_normals_ * x).maxCoeff());
}

// ------------------------------------------------------------------ polar

Polytope polar(const Polytope& k) {
  const int n = k.dim();
  std::optional<Matrix> v;
  std::optional<Halfspaces> h;
  if (k.has_halfspaces()) {
    const Halfspaces& hk = k.halfspaces();
    if ((hk.offsets.array() <= 1e-12).any()) {
      throw Error(ErrorCode::kGaugeUndefined, "polar needs the origin in the interior");
    }
    v = (hk.offsets.cwiseInverse().asDiagonal() * hk.normals).transpose();
  }
  if (k.has_vertices()) {
    if (!k.has_halfspaces()) gauge_norm(k, Vector::Unit(n, 0));  // interior check
    h = Halfspaces{k.vertices().transpose(), Vector::Ones(k.vertex_count())};
  }
  if (v && h) return Polytope::from_both(std::move(*v), h->normals, h->offsets);
  if (v) return Polytope::from_vertices(std::move(*v));
  return Polytope::from_halfspaces(h->normals, h->offsets);
}

Ball polar(const Ball& b) {
  if (!(b.radius > 0)) throw Error(ErrorCode::kGaugeUndefined, "ball of radius zero");
  return Ball{b.dim, 1.0 / b.radius};
}

// -------------------------------------------------------------- distances

double distance_to_hull(const Vector& x, const Matrix& points, double tol, int max_iterations) {
  const int m = static_cast<int>(points.cols());
  const Matrix p = points.colwise() - x;
  const double scale = std::max(1.0, p.colwise().squaredNorm().maxCoeff());
  std::vector<int> active;
  std::vector<double> lambda;
  {
    int best = 0;
    p.colwise().squaredNorm().minCoeff(&best);
    active.push_back(best);
    lambda.push_back(1.0);
  }
  Vector y = p.col(active[0]);
  for (int iter = 0; iter < max_iterations; ++iter) {
    int j = 0;
    const double min_dot = (p.transpose() * y).minCoeff(&j);
    if (y.squaredNorm() - min_dot <= tol * tol * scale ||
        std::find(active.begin(), active.end(), j) != active.end()) {
      return y.norm();
    }
    active.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < max_iterations; ++minor) {
      const int s = static_cast<int>(active.size());
      Matrix q(p.rows(), s);
      for (int t = 0; t < s; ++t) q.col(t) = p.col(active[t]);
      // Affine minimizer: min |q a|^2 s.t. sum a = 1.
      Matrix kkt = Matrix::Zero(s + 1, s + 1);
      kkt.topLeftCorner(s, s) = q.transpose() * q;
      kkt.block(0, s, s, 1).setOnes();
      kkt.block(s, 0, 1, s).setOnes();
      Vector rhs = Vector::Zero(s + 1);
      rhs[s] = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Vector alpha = sol.head(s);
      if ((alpha.array() > 1e-14).all()) {
        for (int t = 0; t < s; ++t) lambda[t] = alpha[t];
        y = q * alpha;
        break;
      }
      double theta = 1.0;
      for (int t = 0; t < s; ++t) {
        if (alpha[t] <= 1e-14) {
          const double denom = lambda[t] - alpha[t];
          if (denom > 0) theta = std::min(theta, lambda[t] / denom);
        }
      }
      std::vector<int> next_active;
      std::vector<double> next_lambda;
      for (int t = 0; t < s; ++t) {
        const double l = lambda[t] + theta * (alpha[t] - lambda[t]);
        if (l > 1e-14) {
          next_active.push_back(active[t]);
          next_lambda.push_back(l);
        }
      }
      if (next_active.empty()) {
        next_active.push_back(active.back());
        next_lambda.push_back(1.0);
      }
      active = std::move(next_active);
      lambda = std::move(next_lambda);
      const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
      y = Vector::Zero(p.rows());
      for (std::size_t t = 0; t < active.size(); ++t) y += (lambda[t] / total) * p.col(active[t]);
    }
  }
  (void)m;
  return y.norm();
}

double hausdorff_distance(const Polytope& k, const Polytope& c) {
  if (k.dim() != c.dim()) throw Error(ErrorCode::kDimension, "bodies of different dimension");
  const Matrix vk = k.with_vertices().vertices();
  const Matrix vc = c.with_vertices().vertices();
  double d = 0.0;
  for (int i = 0; i < vk.cols(); ++i) d = std::max(d, distance_to_hull(vk.col(i), vc));
  for (int i = 0; i < vc.cols(); ++i) d = std::max(d, distance_to_hull(vc.col(i), vk));
  return d;
}

// ---------------------------------------------------------------- volumes

VolumeEstimate symdiff_volume(const Polytope& k, const Polytope& c, const RandomSource& source,
                              std::uint64_t samples) {
  if (samples < 1) throw Error(ErrorCode::kDomain, "need at least one sample");
  if (k.dim() != c.dim()) throw Error(ErrorCode::kDimension, "bodies of different dimension");
  const Polytope kk = k.complete();
  const Polytope cc = c.complete();
  const Vector lo = kk.vertices().rowwise().minCoeff().cwiseMin(cc.vertices().rowwise().minCoeff());
  const Vector hi = kk.vertices().rowwise().maxCoeff().cwiseMax(cc.vertices().rowwise().maxCoeff());
  const double box = (hi - lo).prod();
  const Halfspaces& hk = kk.halfspaces();
  const Halfspaces& hc = cc.halfspaces();
  const MeanAccumulator acc = parallel_mean(samples, [&](std::uint64_t i) {
    const Vector x = source.box_vector(i, lo, hi);
    const bool in_k = ((hk.normals * x - hk.offsets).array() <= 0).all();
    const bool in_c = ((hc.normals * x - hc.offsets).array() <= 0).all();
    return in_k != in_c ? 1.0 : 0.0;
  });
  return {box * acc.mean, box * acc.stderr_of_mean()};
}

double polytope_volume(const Polytope& k) {
  require_enumerable(k.dim());
  return hull_volume(k.with_vertices().vertices());
}

std::optional<Polytope> intersect(const Polytope& k, const Polytope& c) {
  if (k.dim() != c.dim()) throw Error(ErrorCode::kDimension, "bodies of different dimension");
  const Halfspaces hk = k.with_halfspaces().halfspaces();
  const Halfspaces hc = c.with_halfspaces().halfspaces();
  Matrix normals(hk.count() + hc.count(), k.dim());
  normals << hk.normals, hc.normals;
  Vector offsets(hk.count() + hc.count());
  offsets << hk.offsets, hc.offsets;
  Halfspaces h{normals, offsets};
  if (chebyshev_radius(h, k.dim()) <= 1e-12) return std::nullopt;
  return Polytope::from_halfspaces(std::move(normals), std::move(offsets));
}

double symdiff_volume_exact(const Polytope& k, const Polytope& c) {
  const double vk = polytope_volume(k);
  const double vc = polytope_volume(c);
  const auto both = intersect(k, c);
  const double vi = both ? polytope_volume(*both) : 0.0;
  return std::max(0.0, vk + vc - 2.0 * vi);
}

double simplex_volume(int n) {
  if (n < 2) throw Error(ErrorCode::kDimension, "simplex volume needs n >= 2");
  return std::pow(1.0 + 1.0 / n, n / 2.0) * std::sqrt(n + 1.0) / std::tgamma(n + 1.0);
}

double simplex_volume_from_vertices(const Matrix& vertices) {
  const int n = static_cast<int>(vertices.rows());
  if (vertices.cols() != n + 1) throw Error(ErrorCode::kDimension, "need n+1 vertices");
  const Matrix edges = vertices.rightCols(n).colwise() - vertices.col(0);
  return std::abs(edges.determinant()) / std::tgamma(n + 1.0);
}

// ------------------------------------------------------------ containment

double containment_violation(const Polytope& k, const Polytope& c) {
  if (k.dim() != c.dim()) throw Error(ErrorCode::kDimension, "bodies of different dimension");
  const Halfspaces h = k.with_halfspaces().halfspaces();
  const Matrix v = c.with_vertices().vertices();
  const Matrix slack = (h.normals * v).colwise() - h.offsets;
  return slack.maxCoeff();
}

bool contains(const Polytope& k, const Polytope& c, double tol) {
  return containment_violation(k, c) <= tol;
}

// ------------------------------------------------------------ enumeration

Matrix enumerate_vertices(const Halfspaces& h, int n) {
  require_enumerable(n);
  const int m = h.count();
  if (m < n) return Matrix(n, 0);
  if (binomial(m, n) > kEnumerationBudget) {
    throw Error(ErrorCode::kEnumerationTooLarge, "too many halfspace subsets to enumerate");
  }
  const double scale = std::max(1.0, h.offsets.cwiseAbs().maxCoeff());
  std::vector<Vector> found;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Matrix a(n, n);
  Vector b(n);
  do {
    for (int r = 0; r < n; ++r) {
      a.row(r) = h.normals.row(idx[r]);
      b[r] = h.offsets[idx[r]];
    }
    Eigen::PartialPivLU<Matrix> lu(a);
    if (std::abs(a.determinant()) < 1e-12) continue;
    const Vector x = lu.solve(b);
    if (!x.allFinite()) continue;
    if (((h.normals * x - h.offsets).array() > 1e-9 * scale).any()) continue;
    bool duplicate = false;
    for (const Vector& y : found) {
      if ((x - y).norm() <= 1e-9 * std::max(1.0, x.norm())) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back(x);
  } while (next_combination(idx, m));
  Matrix out(n, static_cast<int>(found.size()));
  for (std::size_t i = 0; i < found.size(); ++i) out.col(static_cast<int>(i)) = found[i];
  return out;
}

Halfspaces enumerate_facets(const Matrix& points) {
  const int n = static_cast<int>(points.rows());
  require_enumerable(n);
  if (affine_rank(points) < n) {
    throw Error(ErrorCode::kDegenerate, "point set is not full-dimensional");
  }
  const Vector center = points.rowwise().mean();
  const Matrix centered = points.colwise() - center;
  // Facets of conv(P) around an interior point are the vertices of the polar
  // {y : <p - c, y> <= 1}.
  Halfspaces polar_h{centered.transpose(), Vector::Ones(points.cols())};
  const Matrix ys = enumerate_vertices(polar_h, n);
  Matrix normals(ys.cols(), n);
  Vector offsets(ys.cols());
  for (int j = 0; j < ys.cols(); ++j) {
    const Vector y = ys.col(j);
    const double nrm = y.norm();
    normals.row(j) = y.transpose() / nrm;
    offsets[j] = (1.0 + y.dot(center)) / nrm;
  }
  return {std::move(normals), std::move(offsets)};
}

}  // namespace simplexstab
