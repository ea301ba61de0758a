#include "simplexstab/gaussian_functionals.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplexstab/normal.hpp"
#include "simplexstab/parallel.hpp"

namespace simplexstab {
namespace {

MeanAccumulator accumulate(const std::vector<double>& values) {
  auto parts = map_blocks<MeanAccumulator>(
      values.size(), [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        MeanAccumulator acc;
        for (std::uint64_t i = begin; i < end; ++i) acc.add(values[i]);
        return acc;
      });
  MeanAccumulator all;
  for (const auto& p : parts) all.merge(p);
  return all;
}

// Trapezoid integral over nodes 0, h, ..., (M-1)h of t -> 1{g > t}.
double layer_contribution(double g, double h, int nodes) {
  if (g <= 0) return 0.0;
  const double below = std::min<double>(nodes, std::ceil(g / h));
  const double last = g > (nodes - 1) * h ? 1.0 : 0.0;
  return h * (below - 0.5 * (1.0 + last));
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::kMcDirect: return "mc-direct";
    case Method::kLayerQuadrature: return "layer-quadrature";
    case Method::kClosedForm: return "closed-form";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "mc" || name == "mc-direct" || name == "direct") return Method::kMcDirect;
  if (name == "layer" || name == "layer-quadrature") return Method::kLayerQuadrature;
  if (name == "closed-form") return Method::kClosedForm;
  throw Error(ErrorCode::kDomain, "unknown method '" + name + "'");
}

std::vector<double> sample_gauges(const Body& k, std::uint64_t samples,
                                  const RandomSource& source) {
  const GaugeEvaluator gauge(k);
  const int n = gauge.dim();
  auto parts = map_blocks<std::vector<double>>(
      samples, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        std::vector<double> out;
        out.reserve(end - begin);
        Vector x(n);
        for (std::uint64_t i = begin; i < end; ++i) {
          source.normals(i, x.data(), n);
          out.push_back(gauge(x));
        }
        return out;
      });
  std::vector<double> all;
  all.reserve(samples);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

FunctionalEstimate gaussian_mass(const Body& k, double t, std::uint64_t samples,
                                 const RandomSource& source) {
  if (!(t >= 0)) throw Error(ErrorCode::kDomain, "t must be nonnegative");
  if (samples < 1) throw Error(ErrorCode::kDomain, "need at least one sample");
  const std::vector<double> g = sample_gauges(k, samples, source);
  std::vector<double> hits(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) hits[i] = (t > 0 && g[i] <= t) ? 1.0 : 0.0;
  const MeanAccumulator acc = accumulate(hits);
  return {acc.mean, acc.stderr_of_mean(), Method::kMcDirect, samples};
}

FunctionalEstimate ell_norm(const Body& k, std::uint64_t samples, const RandomSource& source,
                            Method method) {
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  if (const Ball* b = std::get_if<Ball>(&k); b && method == Method::kClosedForm) {
    return {ell_ball(b->dim) / b->radius, 0.0, Method::kClosedForm, 0};
  }
  if (method == Method::kClosedForm) {
    throw Error(ErrorCode::kDomain, "closed form available only for balls");
  }
  std::vector<double> g = sample_gauges(k, samples, source);
  if (method == Method::kMcDirect) {
    const MeanAccumulator acc = accumulate(g);
    return {acc.mean, acc.stderr_of_mean(), Method::kMcDirect, samples};
  }
  std::vector<double> sorted = g;
  const std::size_t cut = std::min<std::size_t>(
      sorted.size() - 1,
      static_cast<std::size_t>(std::floor((1.0 - kLayerTail) * static_cast<double>(samples))));
  std::nth_element(sorted.begin(), sorted.begin() + cut, sorted.end());
  const double t_max = sorted[cut];
  if (!(t_max > 0)) return {0.0, 0.0, Method::kLayerQuadrature, samples};
  const double h = t_max / (kLayerNodes - 1);
  for (double& v : g) v = layer_contribution(v, h, kLayerNodes);
  const MeanAccumulator acc = accumulate(g);
  return {acc.mean, acc.stderr_of_mean(), Method::kLayerQuadrature, samples};
}

double ell_ball(int n) {
  if (n < 1) throw Error(ErrorCode::kDimension, "dimension must be positive");
  return std::sqrt(2.0) * std::exp(std::lgamma((n + 1) / 2.0) - std::lgamma(n / 2.0));
}

double expected_max_normals(int m) {
  if (m < 1) throw Error(ErrorCode::kDomain, "need at least one variable");
  auto density = [m](double x) {
    return x * m * normal::pdf(x) * std::pow(normal::cdf(x), m - 1);
  };
  const double inf = std::numeric_limits<double>::infinity();
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, -inf, inf, 15,
                                                                        1e-14);
}

double simplex_ell_oracle(int n) {
  if (n < 2) throw Error(ErrorCode::kDimension, "simplex needs n >= 2");
  return std::sqrt((n + 1.0) / n) * expected_max_normals(n + 1);
}

double simplex_ell(int n) { return n * simplex_ell_oracle(n); }

FunctionalEstimate mean_width(const Matrix& points, std::uint64_t samples,
                              const RandomSource& source) {
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const int n = static_cast<int>(points.rows());
  const MeanAccumulator acc = parallel_mean(samples, [&](std::uint64_t i) {
    const Vector u = source.sphere_vector(i, n);
    const Eigen::VectorXd dots = points.transpose() * u;
    return dots.maxCoeff() - dots.minCoeff();
  });
  return {acc.mean, acc.stderr_of_mean(), Method::kMcDirect, samples};
}

FunctionalEstimate mean_width(const Body& k, std::uint64_t samples, const RandomSource& source) {
  if (const Ball* b = std::get_if<Ball>(&k)) {
    return {2.0 * b->radius, 0.0, Method::kClosedForm, 0};
  }
  return mean_width(std::get<Polytope>(k).with_vertices().vertices(), samples, source);
}

MeanEllCheck mean_ell_crosscheck(const Body& k, std::uint64_t samples, const RandomSource& source) {
  const int n = body_dim(k);
  MeanEllCheck out;
  out.lhs = ell_norm(k, samples, source.with_stream(source.stream + 1));
  const FunctionalEstimate width = std::visit(
      [&](const auto& body) {
        return mean_width(Body(polar(body)), samples, source.with_stream(source.stream + 2));
      },
      k);
  const double factor = ell_ball(n) / 2.0;
  out.rhs = {factor * width.value, factor * width.std_error, width.method, width.samples};
  out.gap = out.lhs.value - out.rhs.value;
  out.joint_std_error = std::hypot(out.lhs.std_error, out.rhs.std_error);
  return out;
}

}  // namespace simplexstab
