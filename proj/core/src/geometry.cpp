#include "hypext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hypext {

namespace {

void require_same_dimension(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
  }
}

double sheet_drift(const Vector& x) { return std::abs(mink_inner(x, x) + 1.0) / (x[0] * x[0]); }

Vector snap_to_sheet(Vector x) {
  x[0] = std::sqrt(1.0 + x.tail(x.size() - 1).squaredNorm());
  return x;
}

// log(sinh x) for x > 0 without overflow.
double log_sinh(double x) {
  if (x > 20.0) {
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
  }
  return std::log(std::sinh(x));
}

}  // namespace

void SpaceConfig::validate() const {
  if (dimension < 1) {
    throw std::invalid_argument("SpaceConfig: dimension must be >= 1");
  }
  if (curvature != kCurvature) {
    throw std::invalid_argument("SpaceConfig: only curvature -1 is supported");
  }
}

HPoint::HPoint(Vector coords) : HPoint(normalized(std::move(coords), kPointTolerance)) {}

HPoint HPoint::normalized(Vector coords, double tolerance) {
  if (coords.size() < 2) {
    throw GeometryError("HPoint needs at least 2 coordinates");
  }
  if (!coords.allFinite()) {
    throw GeometryError("HPoint coordinates must be finite");
  }
  if (!(coords[0] > 0.0)) {
    throw GeometryError("HPoint must lie on the upper sheet (x0 > 0)");
  }
  if (sheet_drift(coords) > tolerance) {
    throw GeometryError("HPoint off the hyperboloid: relative drift " +
                        std::to_string(sheet_drift(coords)));
  }
  HPoint p;
  p.coords_ = snap_to_sheet(std::move(coords));
  return p;
}

HPoint HPoint::origin(int dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("HPoint::origin: dimension must be >= 1");
  }
  HPoint p;
  p.coords_ = Vector::Zero(dimension + 1);
  p.coords_[0] = 1.0;
  return p;
}

HPoint HPoint::from_spatial(const Vector& spatial) {
  if (spatial.size() < 1 || !spatial.allFinite()) {
    throw GeometryError("from_spatial: need finite spatial coordinates");
  }
  HPoint p;
  p.coords_.resize(spatial.size() + 1);
  p.coords_.tail(spatial.size()) = spatial;
  p.coords_ = snap_to_sheet(std::move(p.coords_));
  return p;
}

bool HPoint::operator==(const HPoint& other) const {
  return coords_.size() == other.coords_.size() && coords_ == other.coords_;
}

TangentVec::TangentVec(HPoint b, Vector v) : base(std::move(b)), vec(std::move(v)) {
  require_same_dimension(base.coords(), vec);
  const double scale = base[0] * (1.0 + vec.lpNorm<Eigen::Infinity>());
  if (std::abs(mink_inner(base.coords(), vec)) > 1e-9 * scale) {
    throw GeometryError("TangentVec: vector is not tangent at its base");
  }
}

TangentVec TangentVec::from_frame(const HPoint& b, const Vector& local) {
  return TangentVec(b, hypext::from_frame(b, local));
}

double TangentVec::norm() const { return std::sqrt(std::max(0.0, mink_inner(vec, vec))); }

double mink_inner(const Vector& u, const Vector& v) {
  require_same_dimension(u, v);
  if (u.size() == 0) {
    return 0.0;
  }
  return -u[0] * v[0] + u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

double distance(const HPoint& x, const HPoint& y) {
  require_same_dimension(x.coords(), y.coords());
  // Extended precision from the spatial coordinates s, t with the time
  // coordinate re-derived. The chord <x-y, x-y>_M = 4 sinh^2(d/2) is taken in
  // the cancellation-free form 2 (|s - t|^2 + |s ^ t|^2) / (1 + x0 y0 + s.t).
  const auto n = x.coords().size();
  long double xx = 0.0L, yy = 0.0L, xy = 0.0L, aa = 0.0L, wedge = 0.0L;
  for (Eigen::Index i = 1; i < n; ++i) {
    const long double xi = x[i];
    const long double yi = y[i];
    const long double a = xi - yi;
    xx += xi * xi;
    yy += yi * yi;
    xy += xi * yi;
    aa += a * a;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const long double w = xi * static_cast<long double>(y[j]) - static_cast<long double>(x[j]) * yi;
      wedge += w * w;
    }
  }
  const long double x0 = std::sqrt(1.0L + xx);
  const long double y0 = std::sqrt(1.0L + yy);
  const long double chord2 = 2.0L * (aa + wedge) / (1.0L + x0 * y0 + xy);
  if (chord2 < 4.0L) {
    return static_cast<double>(2.0L * std::asinh(std::sqrt(chord2) / 2.0L));
  }
  const long double c = x0 * y0 - xy;
  return static_cast<double>(std::acosh(std::max(c, 1.0L)));
}

HPoint exp_map(const HPoint& base, const Vector& vec) {
  require_same_dimension(base.coords(), vec);
  const double n = std::sqrt(std::max(0.0, mink_inner(vec, vec)));
  if (n == 0.0) {
    return base;
  }
  const double sinhc = n < 1e-8 ? 1.0 + n * n / 6.0 : std::sinh(n) / n;
  Vector x = std::cosh(n) * base.coords() + sinhc * vec;
  return HPoint::normalized(std::move(x), kRenormalizeTolerance);
}

HPoint exp_map(const TangentVec& v) { return exp_map(v.base, v.vec); }

TangentVec log_map(const HPoint& base, const HPoint& target) {
  return log_map(base, target, distance(base, target));
}

TangentVec log_map(const HPoint& base, const HPoint& target, double d) {
  require_same_dimension(base.coords(), target.coords());
  TangentVec out;
  out.base = base;
  if (d == 0.0) {
    out.vec = Vector::Zero(base.coords().size());
    return out;
  }
  // t + <b,t> b, with 1 + <b,t> = -2 sinh^2(d/2) taken from the stable distance.
  const double sh = std::sinh(d / 2.0);
  Vector w = (target.coords() - base.coords()) - 2.0 * sh * sh * base.coords();
  w += mink_inner(base.coords(), w) * base.coords();
  const double wn = std::sqrt(std::max(0.0, mink_inner(w, w)));
  if (wn == 0.0) {
    out.vec = Vector::Zero(base.coords().size());
    return out;
  }
  out.vec = (d / wn) * w;
  return out;
}

Matrix tangent_frame(const HPoint& base) {
  const int m = base.dimension();
  const double b0 = base[0];
  const Vector bs = base.spatial();
  Matrix frame(m + 1, m);
  for (int k = 0; k < m; ++k) {
    frame(0, k) = bs[k];
    frame.col(k).tail(m) = bs * (bs[k] / (1.0 + b0));
    frame(k + 1, k) += 1.0;
  }
  return frame;
}

Vector to_frame(const HPoint& base, const Vector& vec) {
  require_same_dimension(base.coords(), vec);
  const Matrix frame = tangent_frame(base);
  Vector flipped = vec;
  flipped[0] = -flipped[0];
  return frame.transpose() * flipped;
}

Vector from_frame(const HPoint& base, const Vector& local) {
  if (local.size() != base.dimension()) {
    throw std::invalid_argument("from_frame: expected " + std::to_string(base.dimension()) +
                                " components");
  }
  return tangent_frame(base) * local;
}

double angle(const HPoint& vertex, const HPoint& a, const HPoint& b) {
  const TangentVec u = log_map(vertex, a);
  const TangentVec w = log_map(vertex, b);
  Vector lu = to_frame(vertex, u.vec);
  Vector lw = to_frame(vertex, w.vec);
  const double nu = lu.norm();
  const double nw = lw.norm();
  if (nu == 0.0 || nw == 0.0) {
    throw GeometryError("angle: endpoint coincides with the vertex");
  }
  lu /= nu;
  lw /= nw;
  // Kahan's formula: accurate near 0 and pi.
  const double theta = 2.0 * std::atan2((lu - lw).norm(), (lu + lw).norm());
  return std::clamp(theta, 0.0, std::numbers::pi);
}

HPoint geodesic_point(const HPoint& a, const HPoint& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("geodesic_point: t must lie in [0, 1]");
  }
  if (t == 0.0 || a == b) {
    return a;
  }
  if (t == 1.0) {
    return b;
  }
  const TangentVec v = log_map(a, b);
  return exp_map(a, t * v.vec);
}

double d_theta(double theta, double l1, double l2) {
  constexpr double kSlack = 1e-12;
  if (!(theta >= -kSlack && theta <= std::numbers::pi + kSlack)) {
    throw std::invalid_argument("d_theta: theta must lie in [0, pi]");
  }
  if (!(l1 >= 0.0 && l2 >= 0.0)) {
    throw std::invalid_argument("d_theta: lengths must be nonnegative");
  }
  theta = std::clamp(theta, 0.0, std::numbers::pi);
  // cosh D - 1 = 2 sinh^2((l1-l2)/2) + 2 sinh l1 sinh l2 sin^2(theta/2),
  // a sum of nonnegative terms, so D = 2 asinh(sqrt(...)) is free of cancellation.
  const double half = std::abs(l1 - l2) / 2.0;
  const double s = std::sin(theta / 2.0);
  if (l1 + l2 < 600.0) {
    const double sh = std::sinh(half);
    const double sum = sh * sh + std::sinh(l1) * std::sinh(l2) * s * s;
    return 2.0 * std::asinh(std::sqrt(sum));
  }
  // Log domain for very long segments.
  double log_a = half > 0.0 ? 2.0 * log_sinh(half) : -INFINITY;
  double log_b = (l1 > 0.0 && l2 > 0.0 && s > 0.0)
                     ? log_sinh(l1) + log_sinh(l2) + 2.0 * std::log(s)
                     : -INFINITY;
  const double hi = std::max(log_a, log_b);
  const double lo = std::min(log_a, log_b);
  const double log_sum = hi + std::log1p(std::exp(lo - hi));
  const double half_log = log_sum / 2.0;  // log sqrt(sum)
  if (half_log > 20.0) {
    return 2.0 * (half_log + std::numbers::ln2);
  }
  return 2.0 * std::asinh(std::exp(half_log));
}

}  // namespace hypext
