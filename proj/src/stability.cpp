#include "simplexstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "simplexstab/gaussian_functionals.hpp"
#include "simplexstab/lp.hpp"
#include "simplexstab/parallel.hpp"

namespace simplexstab {
namespace {

constexpr double kContactTol = 1e-9;
constexpr double kNormalizationTol = 1e-6;
constexpr double kDeficitRoundoff = 1e-13;
constexpr std::uint64_t kPilotSamples = 200000;
constexpr double kCalibrationEps = 1e-3;
constexpr std::uint32_t kRotationStream = 0xA11;

void check_dim(int n) {
  if (n < 2) throw Error(ErrorCode::kDimension, "need n >= 2");
  if (n > 4) throw Error(ErrorCode::kDimension, "families need vertex enumeration (n <= 4)");
}

Matrix unit_columns(const Matrix& m) {
  Matrix out = m;
  for (int j = 0; j < out.cols(); ++j) {
    const double r = out.col(j).norm();
    if (r > 0) out.col(j) /= r;
  }
  return out;
}

Matrix random_orthogonal(int n, const RandomSource& src, std::uint64_t index) {
  Matrix g(n, n);
  src.normals(index, g.data(), n * n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

Matrix givens(int n, int i, int j, double angle) {
  Matrix g = Matrix::Identity(n, n);
  const double c = std::cos(angle), s = std::sin(angle);
  g(i, i) = c;
  g(j, j) = c;
  g(i, j) = -s;
  g(j, i) = s;
  return g;
}

// Alternating matching/Procrustes from a start rotation. Directions are
// unit columns; returns the orthogonal T with T q matched to p.
Matrix match_and_fit(const Matrix& p, const Matrix& q, Matrix t) {
  std::vector<int> last;
  for (int round = 0; round < 20; ++round) {
    const Matrix tq = t * q;
    const bool targets_rows = q.cols() <= p.cols();
    Matrix cost = targets_rows ? Matrix(-(tq.transpose() * p)) : Matrix(-(p.transpose() * tq));
    const std::vector<int> match = assign_min_cost(cost);
    if (match == last) break;
    last = match;
    Matrix m = Matrix::Zero(p.rows(), p.rows());
    for (int r = 0; r < static_cast<int>(match.size()); ++r) {
      const int a = targets_rows ? match[r] : r;
      const int b = targets_rows ? r : match[r];
      m += p.col(a) * q.col(b).transpose();
    }
    if (targets_rows) {
      // Unmatched extreme points join their nearest target.
      std::vector<bool> used(p.cols(), false);
      for (int a : match) used[a] = true;
      for (int a = 0; a < p.cols(); ++a) {
        if (used[a]) continue;
        int b = 0;
        (tq.transpose() * p.col(a)).maxCoeff(&b);
        m += p.col(a) * q.col(b).transpose();
      }
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    t = svd.matrixU() * svd.matrixV().transpose();
  }
  return t;
}

struct SearchResult {
  Matrix rotation;
  double value = 0;
  std::vector<double> trace;
};

// Coordinate-rotation descent; only improving moves are accepted.
void refine(SearchResult& r, const std::function<double(const Matrix&)>& objective) {
  const int n = static_cast<int>(r.rotation.rows());
  for (double step = 0.05; step > 1e-9; step *= 0.3) {
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool improved = false;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          for (double sgn : {1.0, -1.0}) {
            const Matrix cand = givens(n, i, j, sgn * step) * r.rotation;
            const double v = objective(cand);
            if (v < r.value) {
              r.value = v;
              r.rotation = cand;
              r.trace.push_back(v);
              improved = true;
            }
          }
        }
      }
      if (!improved) break;
    }
  }
}

SearchResult search_rotation(const Matrix& p, const Matrix& q,
                             const std::function<double(const Matrix&)>& objective,
                             std::uint64_t seed, int restarts) {
  const int n = static_cast<int>(p.rows());
  const Matrix pu = unit_columns(p);
  const Matrix qu = unit_columns(q);
  const RandomSource src{seed, kRotationStream};
  std::vector<Matrix> starts{Matrix::Identity(n, n)};
  for (int r = 0; r < restarts; ++r) starts.push_back(random_orthogonal(n, src, r));
  auto fitted = map_blocks<SearchResult>(
      starts.size(),
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t) {
        SearchResult s;
        s.rotation = match_and_fit(pu, qu, starts[begin]);
        s.value = objective(s.rotation);
        return s;
      },
      1);
  std::vector<int> order(fitted.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fitted[a].value < fitted[b].value; });
  // Refine the three best seeds; ties keep the lower start index.
  SearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::min<int>(3, static_cast<int>(order.size())); ++i) {
    SearchResult s = fitted[order[i]];
    s.trace = {s.value};
    refine(s, objective);
    if (s.value < best.value) best = s;
  }
  return best;
}

// L1 infeasibility of sum c u u^T = Id, sum c u = 0 with c >= 0.
double john_condition_residual(const Matrix& u) {
  const int n = static_cast<int>(u.rows());
  const int k = static_cast<int>(u.cols());
  if (k == 0) return std::numeric_limits<double>::infinity();
  const int r = n * (n + 1) / 2 + n;
  Matrix a = Matrix::Zero(r, k + 2 * r);
  Vector b = Vector::Zero(r);
  int row = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int c = 0; c < k; ++c) a(row, c) = u(i, c) * u(j, c);
      b[row] = i == j ? 1.0 : 0.0;
      ++row;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) a(row, c) = u(i, c);
    ++row;
  }
  a.block(0, k, r, r) = Matrix::Identity(r, r);
  a.block(0, k + r, r, r) = -Matrix::Identity(r, r);
  Vector cost = Vector::Zero(k + 2 * r);
  cost.tail(2 * r).setOnes();
  const lp::Result res = lp::minimize_standard(a, b, cost);
  if (res.status != lp::Status::kOptimal) return std::numeric_limits<double>::infinity();
  return std::max(0.0, res.value);
}

Polytope reference_body(Side side, int n) {
  const Polytope s = regular_simplex(n);
  return side == Side::kLowner ? s : polar(s).with_vertices();
}

double reference_ell(Side side, int n) {
  return side == Side::kLowner ? simplex_ell(n) : simplex_ell_oracle(n);
}

double symdiff(const Polytope& a, const Polytope& b) {
  if (a.dim() <= 4) return symdiff_volume_exact(a, b);
  return symdiff_volume(a, b, RandomSource{0, 0x5D}, 200000).estimate;
}

double nominal_rate(FamilyKind kind, int n) {
  switch (kind) {
    case FamilyKind::kVertexAdded:
    case FamilyKind::kPolarVertexAdded: return 1.0;
    case FamilyKind::kCornerCut:
    case FamilyKind::kStretchedVertex: return 1.0 / n;
  }
  return 1.0;
}

double pilot_parameter(FamilyKind kind, int n) {
  switch (kind) {
    case FamilyKind::kVertexAdded:
    case FamilyKind::kPolarVertexAdded: return 0.05;
    case FamilyKind::kCornerCut: return 0.1 * (n + 1);
    case FamilyKind::kStretchedVertex: return 0.05;
  }
  return 0.05;
}

// Largest admissible construction parameter.
double parameter_limit(FamilyKind kind, int n) {
  switch (kind) {
    case FamilyKind::kVertexAdded:
    case FamilyKind::kPolarVertexAdded: return std::acos(-1.0 / n) / 2;
    case FamilyKind::kCornerCut: return std::min((n + 1) / 2.0, n - 1.0);
    case FamilyKind::kStretchedVertex: return 1.0 - 1.0 / n;
  }
  return 0.0;
}

double safe_log10(double x) { return std::log10(std::max(x, 1e-300)); }

}  // namespace

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kVertexAdded: return "vertex-added";
    case FamilyKind::kCornerCut: return "corner-cut";
    case FamilyKind::kPolarVertexAdded: return "polar-vertex-added";
    case FamilyKind::kStretchedVertex: return "stretched-vertex";
  }
  return "unknown";
}

FamilyKind parse_family(const std::string& name) {
  for (FamilyKind k : {FamilyKind::kVertexAdded, FamilyKind::kCornerCut,
                       FamilyKind::kPolarVertexAdded, FamilyKind::kStretchedVertex}) {
    if (name == family_name(k)) return k;
  }
  throw Error(ErrorCode::kDomain, "unknown family '" + name + "'");
}

const char* side_name(Side side) { return side == Side::kLowner ? "lowner" : "john"; }

Side family_side(FamilyKind kind) {
  return kind == FamilyKind::kCornerCut || kind == FamilyKind::kPolarVertexAdded ? Side::kJohn
                                                                                 : Side::kLowner;
}

Polytope family_member(FamilyKind kind, int n, double parameter) {
  check_dim(n);
  const Matrix v = regular_simplex(n).vertices();
  if (!(parameter > 0)) throw Error(ErrorCode::kDomain, "construction parameter must be positive");
  switch (kind) {
    case FamilyKind::kVertexAdded:
    case FamilyKind::kPolarVertexAdded: {
      const double arc = std::acos(-1.0 / n);
      if (!(parameter < arc / 2)) throw Error(ErrorCode::kDomain, "added vertex angle too large");
      // Rotate v_1 away from v_2 along their great circle, so v_1 lies on the
      // arc from v_2 to the new vertex.
      const Vector v1 = v.col(0);
      const Vector away = (v1.dot(v.col(1)) * v1 - v.col(1)).normalized();
      Matrix w(n, n + 2);
      w << v, std::cos(parameter) * v1 + std::sin(parameter) * away;
      const Polytope k = Polytope::from_vertices(w).pruned().with_halfspaces();
      return kind == FamilyKind::kVertexAdded ? k : polar(k).with_vertices();
    }
    case FamilyKind::kCornerCut: {
      // Vertex -n v_i of the polar simplex sits at height n + 1 above the
      // opposite facet; corners of height h are cut off.
      if (!(parameter < (n + 1) / 2.0)) {
        throw Error(ErrorCode::kDomain, "over-cut: corner simplices would meet");
      }
      if (!(parameter <= n - 1.0)) throw Error(ErrorCode::kDomain, "over-cut: cut reaches B^n");
      Matrix normals(2 * (n + 1), n);
      Vector offsets(2 * (n + 1));
      for (int i = 0; i <= n; ++i) {
        normals.row(i) = v.col(i).transpose();
        offsets[i] = 1.0;
        normals.row(n + 1 + i) = -v.col(i).transpose();
        offsets[n + 1 + i] = n - parameter;
      }
      return Polytope::from_halfspaces(normals, offsets).with_vertices();
    }
    case FamilyKind::kStretchedVertex: {
      if (!(1.0 / n + parameter <= 1.0)) throw Error(ErrorCode::kDomain, "stretch leaves B^n");
      Matrix w(n, 2 * (n + 1));
      w << v, -(1.0 / n + parameter) * v;
      return Polytope::from_vertices(w).pruned().with_halfspaces();
    }
  }
  throw Error(ErrorCode::kDomain, "unknown family");
}

ExtremalFamily make_family(FamilyKind kind, int n, const std::vector<double>& eps_grid) {
  check_dim(n);
  if (eps_grid.empty()) throw Error(ErrorCode::kDomain, "empty epsilon grid");
  for (double e : eps_grid) {
    if (!(e > 0 && e < 0.1)) throw Error(ErrorCode::kDomain, "epsilon outside (0, 0.1)");
  }
  ExtremalFamily f;
  f.kind = kind;
  f.n = n;
  f.eps = eps_grid;
  f.rate = nominal_rate(kind, n);
  // Fixed-point iteration on the parameter until the pilot deficit is near
  // kCalibrationEps, assuming deficit ~ parameter^{1/rate}.
  const Matrix id = Matrix::Identity(n, n);
  const double cap = 0.95 * parameter_limit(kind, n);
  double p = pilot_parameter(kind, n);
  for (int round = 0; round < 4; ++round) {
    const Deficit pilot = measure_deficit(family_member(kind, n, p), family_side(kind),
                                          kPilotSamples, RandomSource{0x5EED, 0x51}, &id);
    if (!(pilot.value > 3 * pilot.std_error)) {
      throw Error(ErrorCode::kInsufficientSignal, "calibration pilot deficit lost in noise");
    }
    p = std::min(cap, p * std::pow(kCalibrationEps / pilot.value, f.rate));
  }
  f.scale = p * std::pow(kCalibrationEps, -f.rate);
  for (double e : eps_grid) {
    const double p = f.scale * std::pow(e, f.rate);
    f.parameters.push_back(p);
    f.bodies.push_back(family_member(kind, n, p));
  }
  return f;
}

std::vector<int> assign_min_cost(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw Error(ErrorCode::kDimension, "assignment needs rows <= cols");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) out[p[j] - 1] = j - 1;
  }
  return out;
}

Alignment align_to_simplex(const Polytope& k, const Polytope& target, std::uint64_t seed,
                           int restarts) {
  if (k.dim() != target.dim()) throw Error(ErrorCode::kDimension, "dimension mismatch");
  const Polytope kv = k.with_vertices().pruned();
  const Polytope tv = target.with_vertices();
  const Matrix p = kv.vertices();
  const Matrix q = tv.vertices();
  if (p.cols() == 0) throw Error(ErrorCode::kRepresentation, "no extreme points");
  auto objective = [&](const Matrix& t) { return hausdorff_distance(kv, tv.linear_image(t)); };
  SearchResult r = search_rotation(p, q, objective, seed, restarts);
  Alignment a;
  a.rotation = r.rotation;
  a.delta_H = r.value;
  a.trace = r.trace;
  a.delta_vol = symdiff(kv, tv.linear_image(r.rotation));
  return a;
}

double point_set_hausdorff(const Matrix& p, const Matrix& q) {
  double d = 0;
  for (int a = 0; a < p.cols(); ++a) {
    d = std::max(d, (q.colwise() - p.col(a)).colwise().norm().minCoeff());
  }
  for (int b = 0; b < q.cols(); ++b) {
    d = std::max(d, (p.colwise() - q.col(b)).colwise().norm().minCoeff());
  }
  return d;
}

Alignment align_point_sets(const Matrix& p, const Matrix& q, std::uint64_t seed, int restarts) {
  if (p.rows() != q.rows()) throw Error(ErrorCode::kDimension, "dimension mismatch");
  if (p.cols() == 0 || q.cols() == 0) throw Error(ErrorCode::kRepresentation, "empty point set");
  auto objective = [&](const Matrix& t) { return point_set_hausdorff(p, t * q); };
  SearchResult r = search_rotation(p, q, objective, seed, restarts);
  Alignment a;
  a.rotation = r.rotation;
  a.delta_H = r.value;
  a.trace = r.trace;
  return a;
}

double normalization_residual(const Polytope& k, Side side) {
  if (side == Side::kLowner) {
    const Matrix v = k.with_vertices().pruned().vertices();
    double outside = 0;
    std::vector<int> contacts;
    for (int j = 0; j < v.cols(); ++j) {
      const double r = v.col(j).norm();
      outside = std::max(outside, r - 1.0);
      if (std::abs(r - 1.0) <= kContactTol) contacts.push_back(j);
    }
    Matrix u(v.rows(), contacts.size());
    for (int c = 0; c < static_cast<int>(contacts.size()); ++c) {
      u.col(c) = v.col(contacts[c]).normalized();
    }
    return outside + john_condition_residual(u);
  }
  const Halfspaces h = k.with_halfspaces().halfspaces();
  double inside = 0;
  std::vector<int> contacts;
  for (int j = 0; j < h.count(); ++j) {
    inside = std::max(inside, 1.0 - h.offsets[j]);
    if (std::abs(h.offsets[j] - 1.0) <= kContactTol) contacts.push_back(j);
  }
  Matrix u(k.dim(), contacts.size());
  for (int c = 0; c < static_cast<int>(contacts.size()); ++c) {
    u.col(c) = h.normals.row(contacts[c]).transpose();
  }
  return inside + john_condition_residual(u);
}

Deficit measure_deficit(const Polytope& k, Side side, std::uint64_t samples,
                        const RandomSource& source, const Matrix* rotation) {
  const int n = k.dim();
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const double residual = normalization_residual(k, side);
  if (!(residual <= kNormalizationTol)) {
    throw Error(ErrorCode::kNormalization,
                std::string("B^n is not the ") + side_name(side) +
                    " ellipsoid (residual " + std::to_string(residual) + ")");
  }
  const Polytope target = reference_body(side, n);
  const Matrix t = rotation ? *rotation : align_to_simplex(k, target, source.seed).rotation;
  const Polytope ref = target.linear_image(t);
  const std::vector<double> gk = sample_gauges(Body(k), samples, source);
  const std::vector<double> gr = sample_gauges(Body(ref), samples, source);
  MeanAccumulator acc;
  for (std::size_t i = 0; i < gk.size(); ++i) acc.add(gk[i] - gr[i]);
  const double ell = reference_ell(side, n);
  const double sign = side == Side::kLowner ? -1.0 : 1.0;
  // Gauge round-off does not average out; it floors the error.
  return {sign * acc.mean / ell, std::max(acc.stderr_of_mean() / ell, kDeficitRoundoff)};
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorCode::kDomain, "slope fit needs at least three pairs");
  }
  const int m = static_cast<int>(x.size());
  double mx = 0, my = 0;
  std::vector<double> lx(m), ly(m);
  for (int i = 0; i < m; ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw Error(ErrorCode::kDomain, "log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i] / m;
    my += ly[i] / m;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0)) throw Error(ErrorCode::kDegenerate, "all x values equal");
  SlopeFit f;
  f.points = m;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.std_error = std::sqrt(sse / (m - 2) / sxx);
  f.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  return f;
}

double bound_vol(Side side, int n, double eps) {
  const double c = (side == Side::kLowner ? 26.0 : 27.0) * n * std::log10(n);
  return c + 0.25 * safe_log10(eps);
}

double bound_H(Side side, int n, double eps) {
  if (side == Side::kLowner) return 26.0 * n * std::log10(n) + 0.25 * safe_log10(eps);
  return 27.0 * std::log10(n) + safe_log10(eps) / (4.0 * n);
}

bool ExperimentReport::bounds_hold() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ExperimentRow& r) { return r.bound_margin() >= 0; });
}

ExperimentReport fit_exponent(const ExtremalFamily& family, std::uint64_t samples,
                              const RandomSource& source) {
  const int m = static_cast<int>(family.bodies.size());
  if (m < 5) throw Error(ErrorCode::kInsufficientSignal, "need at least five grid points");
  const Side side = family_side(family.kind);
  const Polytope target = reference_body(side, family.n);
  const Matrix frame = Matrix::Identity(family.n, family.n);
  ExperimentReport rep;
  rep.kind = family.kind;
  rep.n = family.n;
  std::vector<double> eps, dvol, dh;
  for (int i = 0; i < m; ++i) {
    const Alignment al = align_to_simplex(family.bodies[i], target, source.seed);
    // Same source and control simplex (the construction frame) on every row:
    // common random numbers along the grid.
    const Deficit d = measure_deficit(family.bodies[i], side, samples, source, &frame);
    if (!(d.value > 3 * d.std_error)) {
      throw Error(ErrorCode::kInsufficientSignal,
                  "measured deficit below 3 standard errors at eps = " +
                      std::to_string(family.eps[i]));
    }
    ExperimentRow row;
    row.eps_nominal = family.eps[i];
    row.parameter = family.parameters[i];
    row.eps_measured = d.value;
    row.eps_std_error = d.std_error;
    row.delta_H = al.delta_H;
    row.delta_vol = al.delta_vol;
    row.rotation = al.rotation;
    row.margin_vol = bound_vol(side, family.n, d.value) - safe_log10(al.delta_vol);
    row.margin_H = bound_H(side, family.n, d.value) - safe_log10(al.delta_H);
    rep.rows.push_back(row);
    eps.push_back(d.value);
    dvol.push_back(al.delta_vol);
    dh.push_back(al.delta_H);
  }
  const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
  if (std::log10(*hi / *lo) < 1.5) {
    throw Error(ErrorCode::kInsufficientSignal, "measured deficits span less than 1.5 decades");
  }
  rep.fit_vol = fit_loglog(eps, dvol);
  rep.fit_H = fit_loglog(eps, dh);
  return rep;
}

Matrix fit_regular_directions(const Matrix& dirs, std::uint64_t seed) {
  const int n = static_cast<int>(dirs.rows());
  const Matrix w = regular_simplex(n).vertices();
  const Matrix u = unit_columns(dirs);
  // One-sided: every direction close to some w_j.
  auto objective = [&](const Matrix& t) {
    const Matrix tw = t * w;
    double d = 0;
    for (int a = 0; a < u.cols(); ++a) {
      d = std::max(d, (tw.colwise() - u.col(a)).colwise().norm().minCoeff());
    }
    return d;
  };
  return search_rotation(u, w, objective, seed, 20).rotation * w;
}

SandwichReport sandwich_check(const Matrix& contacts, const Matrix& w, double eta) {
  const int n = static_cast<int>(contacts.rows());
  if (w.rows() != n || w.cols() != n + 1) {
    throw Error(ErrorCode::kDimension, "need n+1 regular directions");
  }
  SandwichReport r;
  r.eta = eta;
  const Matrix u = unit_columns(contacts);
  for (int a = 0; a < u.cols(); ++a) {
    const double best = (w.transpose() * u.col(a)).maxCoeff();
    r.max_angle = std::max(r.max_angle, std::acos(std::clamp(best, -1.0, 1.0)));
  }
  r.hypothesis_holds = r.max_angle <= eta + 1e-12 && eta < 1.0 / (2 * n);
  if (!r.hypothesis_holds) {
    r.inner_violation = r.outer_violation = std::numeric_limits<double>::infinity();
    return r;
  }
  const Polytope s = Polytope::from_halfspaces(w.transpose(), Vector::Ones(n + 1)).with_vertices();
  const Polytope z =
      Polytope::from_halfspaces(u.transpose(), Vector::Ones(u.cols())).with_vertices();
  r.inner_violation = containment_violation(z, s.scaled(1.0 - n * eta));
  r.outer_violation = containment_violation(s.scaled(1.0 + 2 * n * eta), z);
  return r;
}

SandwichReport sandwich_check(const DiscreteMeasure& contacts, double eta) {
  return sandwich_check(contacts.points(), fit_regular_directions(contacts.points()), eta);
}

SandwichReport sandwich_check(const JohnDecomposition& john, double eta) {
  return sandwich_check(john.contacts, eta);
}

CentroidReport centroid_bound_check(const Polytope& s1, double eta) {
  const int n = s1.dim();
  const Halfspaces h = s1.with_halfspaces().halfspaces();
  const Matrix normals = h.normals.transpose();
  const Matrix w = fit_regular_directions(normals);
  CentroidReport r;
  for (int a = 0; a < normals.cols(); ++a) {
    const double best = (w.transpose() * normals.col(a)).maxCoeff();
    r.max_angle = std::max(r.max_angle, std::acos(std::clamp(best, -1.0, 1.0)));
  }
  r.centroid = s1.with_vertices().pruned().vertex_mean();
  const double top = std::max(0.0, (w.transpose() * r.centroid).maxCoeff());
  if (eta > 0) {
    r.gauge = top / (4.0 * n * eta);
  } else {
    r.gauge = top > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  r.margin = 1.0 - r.gauge;
  r.holds = r.gauge <= 1.0 + 1e-12;
  return r;
}

ExtremalityReport extremality_check(const DiscreteMeasure& mu, std::uint64_t samples,
                                    const RandomSource& source) {
  const int n = mu.dim();
  const Matrix simplex = regular_simplex(n).vertices();
  const Alignment al = align_point_sets(mu.points(), simplex, source.seed);
  const Polytope z = Polytope::from_vertices(mu.points()).pruned().with_halfspaces();
  const Polytope zp = Polytope::from_halfspaces(mu.points().transpose(), Vector::Ones(mu.size()));
  ExtremalityReport r;
  r.lowner = measure_deficit(z, Side::kLowner, samples, source, &al.rotation);
  r.john = measure_deficit(zp, Side::kJohn, samples, source, &al.rotation);
  r.support_distance = al.delta_H;
  // The deficit is only known to round-off.
  const double eps = std::max(r.lowner.value + 3 * r.lowner.std_error, 1e-15);
  r.margin_support = 28.0 * n * std::log10(n) + 0.25 * safe_log10(eps) -
                     safe_log10(r.support_distance);
  return r;
}

}  // namespace simplexstab
