#pragma once

// Hyperbolic space H^m in the hyperboloid model.
//
// Points live on the upper sheet {x : <x,x>_M = -1, x0 > 0} of Minkowski
// space R^{1,m} with signature (-,+,...,+). Curvature is fixed at -1.

#include <Eigen/Dense>

#include <stdexcept>

namespace hypext {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kCurvature = -1.0;

/// Relative drift |<x,x>_M + 1| / x0^2 accepted for user-supplied coordinates.
inline constexpr double kPointTolerance = 1e-9;
/// Relative drift tolerated (and repaired) after an exponential map.
inline constexpr double kRenormalizeTolerance = 1e-6;

struct SpaceConfig {
  int dimension = 2;
  double curvature = kCurvature;

  void validate() const;
};

/// Thrown when coordinates do not describe a point or tangent vector.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class HPoint {
 public:
  HPoint() = default;

  /// Validates against kPointTolerance and snaps x0 back onto the sheet.
  explicit HPoint(Vector coords);

  /// Same as the constructor but with a caller-chosen drift tolerance.
  static HPoint normalized(Vector coords, double tolerance);

  /// The point (1, 0, ..., 0).
  static HPoint origin(int dimension);

  /// Lift of spatial coordinates (x1..xm): x0 = sqrt(1 + |x|^2).
  static HPoint from_spatial(const Vector& spatial);

  int dimension() const { return static_cast<int>(coords_.size()) - 1; }
  const Vector& coords() const { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }
  auto spatial() const { return coords_.tail(coords_.size() - 1); }

  bool operator==(const HPoint& other) const;

 private:
  Vector coords_;
};

/// A vector in the tangent space at `base`: <base, vec>_M = 0.
struct TangentVec {
  HPoint base;
  Vector vec;

  TangentVec() = default;
  TangentVec(HPoint b, Vector v);

  /// Tangent vector with components `local` in the orthonormal frame at `b`.
  static TangentVec from_frame(const HPoint& b, const Vector& local);

  double norm() const;
};

/// Minkowski bilinear form -u0 v0 + sum_i ui vi.
double mink_inner(const Vector& u, const Vector& v);

double distance(const HPoint& x, const HPoint& y);

HPoint exp_map(const TangentVec& v);
HPoint exp_map(const HPoint& base, const Vector& vec);
TangentVec log_map(const HPoint& base, const HPoint& target);
/// log_map when distance(base, target) has already been computed.
TangentVec log_map(const HPoint& base, const HPoint& target, double known_distance);

/// Orthonormal frame of the tangent space at `base`, as the columns of an
/// (m+1) x m matrix. Built from the Lorentz boost taking the origin to `base`,
/// so frames at nearby points are close to each other.
Matrix tangent_frame(const HPoint& base);

/// Components of a tangent vector at `base` in tangent_frame(base).
Vector to_frame(const HPoint& base, const Vector& vec);
Vector from_frame(const HPoint& base, const Vector& local);

/// Angle in [0, pi] at `vertex` between the geodesics towards `a` and `b`.
double angle(const HPoint& vertex, const HPoint& a, const HPoint& b);

/// Point at fraction t along the geodesic from a to b (constant speed).
HPoint geodesic_point(const HPoint& a, const HPoint& b, double t);

/// Distance in H^2 between the far ends of two segments of lengths l1, l2
/// leaving a common vertex at angle theta (hyperbolic law of cosines).
double d_theta(double theta, double l1, double l2);

}  // namespace hypext
