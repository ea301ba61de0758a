#include "simplexstab/normal.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

#include "simplexstab/common.hpp"

namespace simplexstab::normal {

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double survival(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kDomain, "normal quantile needs p in (0,1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double survival_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorCode::kDomain, "normal survival quantile needs q in (0,1)");
  }
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

}  // namespace simplexstab::normal
