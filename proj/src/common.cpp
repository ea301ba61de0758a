#include "simplexstab/common.hpp"

#include <algorithm>
#include <cmath>

namespace simplexstab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kUnboundedSupport: return "unbounded-support";
    case ErrorCode::kGaugeUndefined: return "gauge-undefined";
    case ErrorCode::kRepresentation: return "representation";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kEnumerationTooLarge: return "enumeration-too-large";
    case ErrorCode::kNoFrame: return "no-frame";
    case ErrorCode::kOutsideCone: return "outside-cone";
    case ErrorCode::kInsufficientSignal: return "insufficient-signal";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

double angle_between(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  // atan2 form is accurate for nearly parallel vectors, unlike acos.
  const double cross = (a * nb - b * na).norm();
  const double sum = (a * nb + b * na).norm();
  return 2.0 * std::atan2(cross, sum);
}

Matrix sym_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Matrix sym_inv_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector& ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-14 * std::max(1.0, ev.maxCoeff())) {
    throw Error(ErrorCode::kSingular, "matrix is not positive definite");
  }
  Vector inv = ev.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Matrix polar_factor(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix orthogonal_from_normals(int n, const double* normals) {
  Matrix g = Eigen::Map<const Matrix>(normals, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace simplexstab
