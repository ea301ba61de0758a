#pragma once

#include "simplexstab/isotropic.hpp"
#include "simplexstab/polytope.hpp"

namespace simplexstab {

// E = {x : (x - center)^T shape (x - center) <= 1}.
struct Ellipsoid {
  Vector center;
  Matrix shape;

  int dim() const { return static_cast<int>(center.size()); }
  double volume_factor() const;  // V(E) / V(B^n) = det(shape)^{-1/2}
  bool contains(const Vector& x, double tol = 1e-9) const;
};

// Throws kDomain unless shape is symmetric (1e-12) positive definite.
void check_ellipsoid(const Ellipsoid& e);

struct MveeResult {
  Ellipsoid ellipsoid;
  Vector weights;  // dual weights, one per input point, sum 1
  int iterations = 0;
  double gap = 0;  // max(max_i M_i/d - 1, max_{w_i>0} 1 - M_i/d)
};

inline constexpr double kDefaultMveeEps = 1e-7;
inline constexpr int kMveeIterationCap = 100000;

// Minimum-volume enclosing ellipsoid of the columns of `points` by Khachiyan
// iterations with Todd-Yildirim away steps on the lifted points (p, 1).
MveeResult mvee(const Matrix& points, double eps = kDefaultMveeEps,
                int max_iterations = kMveeIterationCap);

enum class ContactKind { kLowner, kJohn };

struct JohnDecomposition {
  Polytope body;  // image of the input with the ellipsoid mapped to B^n
  DiscreteMeasure contacts;
  ContactKind kind = ContactKind::kLowner;
  // body = linear * (input - shift)
  Matrix linear;
  Vector shift;
  MeasureReport residuals;
};

// Loewner ellipsoid of K, affine normalization to B^n and the resulting
// centered isotropic contact measure (support reduced to <= n(n+3)/2 atoms).
// Throws kNormalization when the polished weights miss John's condition by
// more than 1e-6.
JohnDecomposition john_contact_measure(const Polytope& k, double eps = kDefaultMveeEps);

// John ellipsoid of K, as the polar image of a Loewner computation on
// (K - z)^o, with z iterated until the Loewner center sits at the origin.
Ellipsoid john_ellipsoid_of_polar(const Polytope& k, double eps = kDefaultMveeEps);

// Contacts of the Loewner decomposition of conv(k_points Gaussian points).
DiscreteMeasure random_isotropic_measure(int n, int k_points, std::uint64_t seed);

}  // namespace simplexstab
