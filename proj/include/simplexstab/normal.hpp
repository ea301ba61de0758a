#pragma once

namespace simplexstab::normal {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481;

double pdf(double x);
// Lower tail P(Z <= x); accurate in both tails through erfc.
double cdf(double x);
// P(Z > x).
double survival(double x);
// Inverse of cdf on (0,1).
double quantile(double p);
// Inverse of survival on (0,1): returns x with P(Z > x) = q.
double survival_quantile(double q);

}  // namespace simplexstab::normal
