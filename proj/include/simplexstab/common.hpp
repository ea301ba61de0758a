#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplexstab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using PointList = std::vector<Vector>;

inline constexpr const char* kToolVersion = "0.3.0";

enum class ErrorCode {
  kDimension,
  kDomain,
  kUnboundedSupport,
  kGaugeUndefined,
  kRepresentation,
  kDegenerate,
  kSingular,
  kInfeasible,
  kEnumerationTooLarge,
  kNoFrame,
  kOutsideCone,
  kInsufficientSignal,
  kNormalization,
  kConvergence,
  kIo,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Angle between two nonzero vectors, clamped against rounding.
double angle_between(const Vector& a, const Vector& b);

// Symmetric square root / inverse square root of a symmetric PSD matrix.
Matrix sym_sqrt(const Matrix& a);
Matrix sym_inv_sqrt(const Matrix& a);

// Nearest orthogonal matrix (polar factor) of a square matrix.
Matrix polar_factor(const Matrix& a);

// Haar-distributed orthogonal matrix from a list of standard normals
// (n*n values consumed).
Matrix orthogonal_from_normals(int n, const double* normals);

double binomial(int n, int k);

}  // namespace simplexstab
