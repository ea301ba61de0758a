#include "simplexstab/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace simplexstab::lp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxPivots = 50000;

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Matrix& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[r] = c;
  }

  // Runs simplex iterations on the objective row over columns [0, active).
  // Returns false if unbounded.
  bool optimize(int active) {
    for (int it = 0; it < kMaxPivots; ++it) {
      int enter = -1;
      for (int j = 0; j < active; ++j) {
        if (t_(rows(), j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a > kPivotTol) {
          // Round-off can leave a slightly negative right-hand side.
          const double ratio = std::max(0.0, t_(i, cols())) / a;
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::kConvergence, "simplex pivot limit reached");
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

Result minimize_standard(const Matrix& a, const Vector& b, const Vector& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Result result;
  if (m == 0) {
    result.x = Vector::Zero(n);
    if ((c.array() < 0).any()) {
      result.status = Status::kUnbounded;
    } else {
      result.status = Status::kOptimal;
    }
    return result;
  }
  Tableau tab(m, n + m);
  Matrix& t = tab.t();
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b[i];
    tab.basis()[i] = n + i;
  }
  // Phase 1 objective: sum of artificials, expressed in nonbasic columns.
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;
  tab.optimize(n);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-t(m, n + m) > 1e-9 * scale) {
    result.status = Status::kInfeasible;
    return result;
  }
  // Drive artificials out of the basis; rows that cannot pivot are redundant.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] >= n) {
      int col = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
        keep.push_back(i);
      }
    } else {
      keep.push_back(i);
    }
  }
  const int m2 = static_cast<int>(keep.size());
  Tableau tab2(m2, n);
  Matrix& t2 = tab2.t();
  for (int r = 0; r < m2; ++r) {
    t2.row(r).head(n) = t.row(keep[r]).head(n);
    t2(r, n) = t(keep[r], n + m);
    tab2.basis()[r] = tab.basis()[keep[r]];
  }
  t2.row(m2).head(n) = c.transpose();
  for (int r = 0; r < m2; ++r) {
    const int bc = tab2.basis()[r];
    if (t2(m2, bc) != 0.0) t2.row(m2) -= t2(m2, bc) * t2.row(r);
  }
  if (!tab2.optimize(n)) {
    result.status = Status::kUnbounded;
    return result;
  }
  result.x = Vector::Zero(n);
  for (int r = 0; r < m2; ++r) result.x[tab2.basis()[r]] = std::max(0.0, t2(r, n));
  result.value = c.dot(result.x);
  result.status = Status::kOptimal;
  return result;
}

Result maximize_halfspaces(const Matrix& a, const Vector& b, const Vector& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Matrix std_a(m, 2 * n + m);
  std_a << a, -a, Matrix::Identity(m, m);
  Vector std_c = Vector::Zero(2 * n + m);
  std_c.head(n) = -c;
  std_c.segment(n, n) = c;
  Result r = minimize_standard(std_a, b, std_c);
  if (r.status != Status::kOptimal) return r;
  Result out;
  out.status = Status::kOptimal;
  out.x = r.x.head(n) - r.x.segment(n, n);
  out.value = c.dot(out.x);
  return out;
}

}  // namespace simplexstab::lp
