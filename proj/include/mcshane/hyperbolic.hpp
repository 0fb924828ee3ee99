#pragma once

// Upper half-plane kernel: points, SL(2,R) isometries, geodesic segments,
// and the hyperboloid (Minkowski) representation used for robust
// intersection and ray tracing.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "mcshane/error.hpp"
#include "mcshane/tolerance.hpp"

namespace mcshane {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct HPoint {
  double x = 0.0;
  double y = 1.0;

  bool interior() const { return y > 0.0 && std::isfinite(x) && std::isfinite(y); }
};

/// Angle in radians. Formula outputs keep their natural range; only
/// direction parameters are reduced into [0, 2pi).
struct Angle {
  double value = 0.0;

  static Angle direction(double radians);
};

enum class IsometryKind { Elliptic, Parabolic, Hyperbolic };

/// Element of PSL(2,R) acting by z -> (az + b) / (cz + d).
class Isometry {
 public:
  Isometry() = default;
  Isometry(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {}

  static Isometry identity() { return {}; }
  /// Hyperbolic translation along the imaginary axis, moving i to i*e^t.
  static Isometry axial_translation(double t);
  /// Rotation about i; tangent directions at i turn counterclockwise by phi.
  static Isometry rotation_about_i(double phi);
  /// The affine map sending i to p.
  static Isometry moving_i_to(HPoint p);
  /// Rotation by phi about an arbitrary interior point.
  static Isometry rotation_about(HPoint center, double phi);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  double det() const { return a_ * d_ - b_ * c_; }
  double trace() const { return a_ + d_; }
  IsometryKind kind() const;

  Isometry inverse() const { return {d_, -b_, -c_, a_}; }
  /// Rescales to unit determinant; throws InvalidIsometry when det <= 0.
  Isometry renormalized() const;

  /// Matrix product, renormalized while the entries are small enough for
  /// the determinant to be meaningful.
  friend Isometry operator*(const Isometry& lhs, const Isometry& rhs);

  /// Max-norm distance to rhs, identifying M with -M.
  double distance_to(const Isometry& rhs) const;

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

struct GeodesicSegment {
  HPoint start;
  HPoint end;
  double length = 0.0;

  static GeodesicSegment between(HPoint start, HPoint end);
};

HPoint apply(const Isometry& iso, HPoint p);
double distance(HPoint p, HPoint q);
/// Transverse crossing of the open segments, if any.
std::optional<HPoint> segment_intersection(const GeodesicSegment& s1, const GeodesicSegment& s2);
double translation_length(const Isometry& iso);
/// Point at hyperbolic distance `dist` from `from`, leaving in half-plane direction `dir`.
HPoint point_along(HPoint from, double dir, double dist);
/// Half-plane direction at `from` of the geodesic heading to `to`.
double direction_to(HPoint from, HPoint to);

// ---------------------------------------------------------------------------
// Hyperboloid model. Signature (+,-,-); points satisfy <X,X> = 1, t > 0.

struct Vec3 {
  double t = 0.0, x = 0.0, y = 0.0;

  friend Vec3 operator+(Vec3 u, Vec3 v) { return {u.t + v.t, u.x + v.x, u.y + v.y}; }
  friend Vec3 operator-(Vec3 u, Vec3 v) { return {u.t - v.t, u.x - v.x, u.y - v.y}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.t, s * v.x, s * v.y}; }
};

inline double mdot(Vec3 u, Vec3 v) { return u.t * v.t - u.x * v.x - u.y * v.y; }
/// Minkowski cross product: mdot(mcross(u, v), u) == mdot(mcross(u, v), v) == 0.
Vec3 mcross(Vec3 u, Vec3 v);
/// Scales a timelike vector onto the upper sheet.
Vec3 normalize_point(Vec3 v);
/// Scales a spacelike vector to <v,v> = -1.
Vec3 normalize_spacelike(Vec3 v);

Vec3 to_hyperboloid(HPoint p);
HPoint from_hyperboloid(Vec3 v);
/// Unit tangent at p for half-plane direction `dir`.
Vec3 tangent_at(HPoint p, double dir);
/// Half-plane direction of a unit tangent vector based at p.
double tangent_direction(HPoint p, Vec3 tangent);
/// Hyperbolic distance between hyperboloid points.
double hdistance(Vec3 p, Vec3 q);

struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  Vec3 operator*(Vec3 v) const {
    return {m[0] * v.t + m[1] * v.x + m[2] * v.y, m[3] * v.t + m[4] * v.x + m[5] * v.y,
            m[6] * v.t + m[7] * v.x + m[8] * v.y};
  }
};

/// SO(2,1) matrix of the isometry in hyperboloid coordinates.
Mat3 lorentz(const Isometry& iso);

/// A geodesic through `point` with unit tangent `dir`; position at arclength s.
struct TangentRay {
  Vec3 point;
  Vec3 dir;

  Vec3 at(double s) const { return std::cosh(s) * point + std::sinh(s) * dir; }
  Vec3 velocity(double s) const { return std::sinh(s) * point + std::cosh(s) * dir; }
  /// Removes drift: unit point, unit tangent orthogonal to it.
  TangentRay renormalized() const;
  TangentRay transformed(const Mat3& m) const { return {m * point, m * dir}; }
};

/// Transverse crossing of the open segments [p1, q1] and [p2, q2]. Throws
/// DegenerateConfiguration for overlapping collinear segments.
std::optional<Vec3> segment_crossing(Vec3 p1, Vec3 q1, Vec3 p2, Vec3 q2);
/// True when the open segment [p, q] crosses the line {<X, n> = 0} transversally.
bool segment_crosses_line(Vec3 p, Vec3 q, Vec3 n);
/// Distance from x to the closed segment [a, b].
double distance_to_segment(Vec3 x, Vec3 a, Vec3 b);

/// Arclength parameter s in (lo, hi) at which the geodesic of `ray` meets
/// the line with spacelike normal `normal`, if it crosses it transversally.
std::optional<double> crossing_time(const TangentRay& ray, Vec3 normal);

// ---------------------------------------------------------------------------
// Trigonometric kernels. Templated so the extended-precision oracle can
// re-evaluate them; the double overloads below add domain checking.

namespace detail {

template <typename Real>
Real clamp_unit(const Real& v) {
  if (v > Real(1)) return Real(1);
  if (v < Real(-1)) return Real(-1);
  return v;
}

template <typename Real>
Real theta_cos_argument(const Real& x, const Real& y, const Real& z, Real* denominator) {
  using std::cosh;
  using std::sinh;
  const Real numer = cosh(x) * cosh(y) * sinh(z) - sinh(x) * cosh(z);
  const Real c = cosh(x) * cosh(y) * cosh(z) - sinh(x) * sinh(z);
  *denominator = c * c - Real(1);
  return Real(2) * numer * numer / *denominator - Real(1);
}

}  // namespace detail

/// Angle at a point at distance z from a geodesic axis, between the
/// perpendicular dropped to the axis and the geodesic toward a second point
/// at distance x from the axis (same side) whose foot is displaced by y
/// along it. Always in [0, pi/2].
template <typename Real>
Real theta_kernel(const Real& x, const Real& y, const Real& z) {
  using std::acos;
  Real denom;
  const Real arg = detail::theta_cos_argument(x, y, z, &denom);
  return acos(detail::clamp_unit(arg)) / Real(2);
}

Angle theta(double x, double y, double z);
Angle trirectangle_acute_angle(double l_cuff_half, double l_zip_half);

}  // namespace mcshane
