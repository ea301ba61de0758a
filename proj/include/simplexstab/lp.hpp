#pragma once

#include "simplexstab/common.hpp"

namespace simplexstab::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  double value = 0.0;
  Vector x;
};

// Dense two-phase simplex with Bland's rule:
//   minimize c'x  subject to  A x = b,  x >= 0.
// Intended for the small problems of this library (tens of rows/columns).
Result minimize_standard(const Matrix& a, const Vector& b, const Vector& c);

// maximize c'x subject to A x <= b with x free.
Result maximize_halfspaces(const Matrix& a, const Vector& b, const Vector& c);

}  // namespace simplexstab::lp
