#pragma once

#include <cstdint>

#include "simplexstab/polytope.hpp"
#include "simplexstab/random.hpp"

namespace simplexstab {

enum class Method { kMcDirect, kLayerQuadrature, kClosedForm };

const char* method_name(Method m);
Method parse_method(const std::string& name);  // "mc", "mc-direct", "layer", ...

struct FunctionalEstimate {
  double value = 0;
  double std_error = 0;
  Method method = Method::kMcDirect;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kDefaultSamples = 200000;
inline constexpr int kLayerNodes = 400;
inline constexpr double kLayerTail = 1e-4;

// gamma_n(tK): fraction of standard Gaussian samples with ||x||_K <= t.
FunctionalEstimate gaussian_mass(const Body& k, double t, std::uint64_t samples,
                                 const RandomSource& source);

// l(K) = E ||X||_K. kMcDirect averages gauges; kLayerQuadrature integrates
// the empirical 1 - gamma_n(tK) on a 400-node trapezoid grid over the same
// samples.
FunctionalEstimate ell_norm(const Body& k, std::uint64_t samples, const RandomSource& source,
                            Method method = Method::kMcDirect);

// Per-sample gauges for callers that share one sample set across bodies.
std::vector<double> sample_gauges(const Body& k, std::uint64_t samples,
                                  const RandomSource& source);

// l(B^n) = sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
double ell_ball(int n);

// E max of m iid standard normals, by quadrature.
double expected_max_normals(int m);

// l(polar of the regular simplex) = sqrt((n+1)/n) E max of n+1 normals.
double simplex_ell_oracle(int n);
// l(regular simplex) = n * simplex_ell_oracle(n).
double simplex_ell(int n);

// W(K) = E_u [h_K(u) + h_K(-u)] over uniform directions.
FunctionalEstimate mean_width(const Body& k, std::uint64_t samples, const RandomSource& source);
// Mean width of conv(points), any point set (a single point gives 0).
FunctionalEstimate mean_width(const Matrix& points, std::uint64_t samples,
                              const RandomSource& source);

struct MeanEllCheck {
  FunctionalEstimate lhs;  // l(K)
  FunctionalEstimate rhs;  // l(B^n)/2 W(K^o)
  double gap = 0;
  double joint_std_error = 0;
};

MeanEllCheck mean_ell_crosscheck(const Body& k, std::uint64_t samples, const RandomSource& source);

}  // namespace simplexstab
