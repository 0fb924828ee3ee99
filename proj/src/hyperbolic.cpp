#include "mcshane/hyperbolic.hpp"

#include <algorithm>
#include <string>

namespace mcshane {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIsometry: return "invalid-isometry";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::DegenerateConfiguration: return "degenerate-configuration";
    case ErrorCode::NotHyperbolic: return "not-hyperbolic";
    case ErrorCode::InvalidHalfPants: return "invalid-halfpants";
    case ErrorCode::InvalidParameters: return "invalid-parameters";
    case ErrorCode::InvalidPants: return "invalid-pants";
    case ErrorCode::ConstructionFailed: return "construction-failed";
    case ErrorCode::LookupFailed: return "lookup-failed";
    case ErrorCode::VertexHit: return "vertex-hit";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::NotLassoInducible: return "not-lasso-inducible";
    case ErrorCode::NotPrimitive: return "not-primitive";
    case ErrorCode::DegeneratePosition: return "degenerate-position";
    case ErrorCode::InvalidConfig: return "invalid-config";
  }
  return "unknown";
}

Angle Angle::direction(double radians) {
  double v = std::fmod(radians, kTwoPi);
  if (v < 0) v += kTwoPi;
  if (v >= kTwoPi) v = 0.0;
  return {v};
}

// ---------------------------------------------------------------------------
// Isometry

Isometry Isometry::axial_translation(double t) {
  return {std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2)};
}

Isometry Isometry::rotation_about_i(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return {c, s, -s, c};
}

Isometry Isometry::moving_i_to(HPoint p) {
  const double r = std::sqrt(p.y);
  return {r, p.x / r, 0.0, 1.0 / r};
}

Isometry Isometry::rotation_about(HPoint center, double phi) {
  const Isometry m = moving_i_to(center);
  return m * rotation_about_i(phi) * m.inverse();
}

IsometryKind Isometry::kind() const {
  const double t = std::abs(trace());
  if (t > 2.0 + tol::kClassify) return IsometryKind::Hyperbolic;
  if (t < 2.0 - tol::kClassify) return IsometryKind::Elliptic;
  return IsometryKind::Parabolic;
}

Isometry Isometry::renormalized() const {
  const double dt = det();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidIsometry, "determinant " + std::to_string(dt));
  }
  const double s = 1.0 / std::sqrt(dt);
  return {a_ * s, b_ * s, c_ * s, d_ * s};
}

Isometry operator*(const Isometry& l, const Isometry& r) {
  const Isometry m(l.a_ * r.a_ + l.b_ * r.c_, l.a_ * r.b_ + l.b_ * r.d_, l.c_ * r.a_ + l.d_ * r.c_,
                   l.c_ * r.b_ + l.d_ * r.d_);
  // Once the entries are large, ad - bc is mostly rounding error; the product
  // of unimodular factors is then left as computed.
  const double scale = m.a_ * m.a_ + m.b_ * m.b_ + m.c_ * m.c_ + m.d_ * m.d_;
  return scale < 1e8 ? m.renormalized() : m;
}

double Isometry::distance_to(const Isometry& o) const {
  auto dist = [&](double s) {
    return std::max({std::abs(a_ - s * o.a_), std::abs(b_ - s * o.b_), std::abs(c_ - s * o.c_),
                     std::abs(d_ - s * o.d_)});
  };
  return std::min(dist(1.0), dist(-1.0));
}

// ---------------------------------------------------------------------------
// Points and segments

HPoint apply(const Isometry& g, HPoint p) {
  // ad - bc cancels; its rounding error grows with the squared entry size.
  const double scale = std::max({1.0, g.a() * g.a() + g.b() * g.b(), g.c() * g.c() + g.d() * g.d()});
  if (std::abs(g.det() - 1.0) > tol::kDeterminant * scale) {
    throw Error(ErrorCode::InvalidIsometry, "determinant off unity");
  }
  if (!p.interior()) throw Error(ErrorCode::Domain, "apply() needs an interior point");
  const double cx = g.c() * p.x + g.d();
  const double cy = g.c() * p.y;
  const double den = cx * cx + cy * cy;
  const double ax = g.a() * p.x + g.b();
  return {(ax * cx + g.a() * p.y * cy) / den, p.y / den};
}

double distance(HPoint p, HPoint q) {
  if (!p.interior() || !q.interior()) throw Error(ErrorCode::Domain, "boundary point");
  const double dx = p.x - q.x, dy = p.y - q.y;
  return 2.0 * std::asinh(std::hypot(dx, dy) / (2.0 * std::sqrt(p.y * q.y)));
}

GeodesicSegment GeodesicSegment::between(HPoint start, HPoint end) {
  return {start, end, distance(start, end)};
}

Vec3 mcross(Vec3 u, Vec3 v) {
  // J * (u x v) with J = diag(1, -1, -1).
  return {u.x * v.y - u.y * v.x, -(u.y * v.t - u.t * v.y), -(u.t * v.x - u.x * v.t)};
}

Vec3 normalize_point(Vec3 v) {
  const double n = mdot(v, v);
  if (!(n > 0.0)) throw Error(ErrorCode::Domain, "vector is not timelike");
  if (v.t < 0) v = -1.0 * v;
  return (1.0 / std::sqrt(n)) * v;
}

Vec3 normalize_spacelike(Vec3 v) {
  const double n = -mdot(v, v);
  if (!(n > 0.0)) throw Error(ErrorCode::Domain, "vector is not spacelike");
  return (1.0 / std::sqrt(n)) * v;
}

Vec3 to_hyperboloid(HPoint p) {
  const double r = p.x * p.x + p.y * p.y;
  return {(r + 1.0) / (2.0 * p.y), (r - 1.0) / (2.0 * p.y), p.x / p.y};
}

HPoint from_hyperboloid(Vec3 v) {
  const double y = 1.0 / (v.t - v.x);
  return {v.y * y, y};
}

Vec3 tangent_at(HPoint p, double dir) {
  const double x = p.x, y = p.y;
  const double c = std::cos(dir), s = std::sin(dir);
  // y * (cos * dX/dx + sin * dX/dy)
  const Vec3 dx{x, x, 1.0};
  const Vec3 dy{(y * y - x * x - 1.0) / (2.0 * y), (y * y - x * x + 1.0) / (2.0 * y), -x / y};
  return c * dx + s * dy;
}

double tangent_direction(HPoint p, Vec3 u) {
  // Invert tangent_at: project u on the two orthonormal frame vectors.
  const Vec3 ex = tangent_at(p, 0.0);
  const Vec3 ey = tangent_at(p, kPi / 2);
  return std::atan2(-mdot(u, ey), -mdot(u, ex));
}

double hdistance(Vec3 p, Vec3 q) {
  // Stable for small separations: |p - q|_M^2 = 2 cosh d - 2 = 4 sinh^2(d/2).
  const Vec3 diff = p - q;
  const double s = -mdot(diff, diff);
  return 2.0 * std::asinh(std::sqrt(std::max(s, 0.0)) / 2.0);
}

HPoint point_along(HPoint from, double dir, double dist) {
  const TangentRay ray{to_hyperboloid(from), tangent_at(from, dir)};
  return from_hyperboloid(ray.at(dist));
}

double direction_to(HPoint from, HPoint to) {
  const Vec3 p = to_hyperboloid(from), q = to_hyperboloid(to);
  const Vec3 v = q - mdot(q, p) * p;
  return Angle::direction(tangent_direction(from, v)).value;
}

namespace {

Vec3 sym_to_vec(double m00, double m01, double m11) {
  return {(m00 + m11) / 2.0, (m00 - m11) / 2.0, m01};
}

}  // namespace

Mat3 lorentz(const Isometry& g) {
  // Points correspond to symmetric matrices [[t+x, y], [y, t-x]] and
  // transform as M -> g M g^T.
  Mat3 out;
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const Vec3 basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int col = 0; col < 3; ++col) {
    const Vec3 e = basis[col];
    const double m00 = e.t + e.x, m01 = e.y, m11 = e.t - e.x;
    // g M g^T
    const double p00 = a * m00 + b * m01, p01 = a * m01 + b * m11;
    const double p10 = c * m00 + d * m01, p11 = c * m01 + d * m11;
    const double r00 = p00 * a + p01 * b;
    const double r01 = p00 * c + p01 * d;
    const double r11 = p10 * c + p11 * d;
    const Vec3 v = sym_to_vec(r00, r01, r11);
    out.m[0 + col] = v.t;
    out.m[3 + col] = v.x;
    out.m[6 + col] = v.y;
  }
  return out;
}

TangentRay TangentRay::renormalized() const {
  const Vec3 p = normalize_point(point);
  const Vec3 u = dir - mdot(dir, p) * p;
  return {p, normalize_spacelike(u)};
}

std::optional<double> crossing_time(const TangentRay& ray, Vec3 normal) {
  // <X(s), n> = cosh(s) a + sinh(s) b vanishes at tanh(s) = -a / b.
  const double a = mdot(ray.point, normal);
  const double b = mdot(ray.dir, normal);
  if (b == 0.0) return std::nullopt;
  const double r = -a / b;
  if (!(std::abs(r) < 1.0)) return std::nullopt;
  return std::atanh(r);
}

std::optional<Vec3> segment_crossing(Vec3 p1, Vec3 q1, Vec3 p2, Vec3 q2) {
  // Far-apart segments cannot meet; skipping them also avoids normalising the
  // cross product of two very distant points, which loses all precision.
  if (hdistance(p1, p2) > hdistance(p1, q1) + hdistance(p2, q2) + 1e-9) return std::nullopt;
  const Vec3 n1 = normalize_spacelike(mcross(p1, q1));
  const Vec3 n2 = normalize_spacelike(mcross(p2, q2));
  // Signed sinh-distances of each endpoint to the other segment's line.
  const double a1 = mdot(p2, n1), b1 = mdot(q2, n1);
  const double a2 = mdot(p1, n2), b2 = mdot(q1, n2);
  const double eps = tol::kIntersection;
  if (std::abs(a1) <= eps && std::abs(b1) <= eps) {
    // Same line: overlap iff the parameter intervals share an open piece.
    const Vec3 dir = normalize_spacelike(q1 - mdot(q1, p1) * p1);
    auto param = [&](Vec3 v) { return std::atanh(-mdot(v, dir) / mdot(v, p1)); };
    double lo = param(p2), hi = param(q2);
    if (lo > hi) std::swap(lo, hi);
    if (std::min(hi, hdistance(p1, q1)) - std::max(lo, 0.0) > eps) {
      throw Error(ErrorCode::DegenerateConfiguration, "overlapping collinear segments");
    }
    return std::nullopt;
  }
  if (std::min({std::abs(a1), std::abs(b1), std::abs(a2), std::abs(b2)}) <= eps) return std::nullopt;
  if (a1 * b1 >= 0.0 || a2 * b2 >= 0.0) return std::nullopt;
  return normalize_point(mcross(n1, n2));
}

bool segment_crosses_line(Vec3 p, Vec3 q, Vec3 n) {
  const double a = mdot(p, n), b = mdot(q, n);
  const double eps = tol::kIntersection;
  return std::abs(a) > eps && std::abs(b) > eps && a * b < 0.0;
}

double distance_to_segment(Vec3 x, Vec3 a, Vec3 b) {
  const double len = hdistance(a, b);
  if (len == 0.0) return hdistance(x, a);
  const Vec3 dir = normalize_spacelike(b - mdot(b, a) * a);
  // Foot of the perpendicular: maximise <X(s), x> over the line X(s).
  const double s = std::atanh(std::clamp(-mdot(x, dir) / mdot(x, a), -1.0 + 1e-16, 1.0 - 1e-16));
  if (s <= 0.0) return hdistance(x, a);
  if (s >= len) return hdistance(x, b);
  const TangentRay ray{a, dir};
  return hdistance(x, ray.at(s));
}

std::optional<HPoint> segment_intersection(const GeodesicSegment& s1, const GeodesicSegment& s2) {
  if (!(s1.length > 0.0) || !(s2.length > 0.0)) {
    throw Error(ErrorCode::Domain, "segments need positive length");
  }
  const auto x = segment_crossing(to_hyperboloid(s1.start), to_hyperboloid(s1.end),
                                  to_hyperboloid(s2.start), to_hyperboloid(s2.end));
  if (!x) return std::nullopt;
  return from_hyperboloid(*x);
}

double translation_length(const Isometry& g) {
  if (g.kind() != IsometryKind::Hyperbolic) {
    throw Error(ErrorCode::NotHyperbolic, "|trace| = " + std::to_string(std::abs(g.trace())));
  }
  return 2.0 * std::acosh(std::abs(g.trace()) / 2.0);
}

Angle theta(double x, double y, double z) {
  if (!(x >= 0.0) || !(y >= 0.0) || !(z > 0.0)) {
    throw Error(ErrorCode::Domain, "theta needs x >= 0, y >= 0, z > 0");
  }
  double denom = 0.0;
  const double arg = detail::theta_cos_argument(x, y, z, &denom);
  if (std::abs(denom) < 1e-300 || !std::isfinite(arg)) {
    throw Error(ErrorCode::DegenerateConfiguration, "theta: coincident points");
  }
  if (arg > 1.0 + tol::kClamp || arg < -1.0 - tol::kClamp) {
    throw Error(ErrorCode::Domain, "theta: arccos argument " + std::to_string(arg));
  }
  return {std::acos(std::clamp(arg, -1.0, 1.0)) / 2.0};
}

Angle trirectangle_acute_angle(double l_cuff_half, double l_zip_half) {
  const double ratio = std::cosh(l_cuff_half) / std::cosh(l_zip_half);
  if (!(ratio <= 1.0 + tol::kClamp)) {
    throw Error(ErrorCode::InvalidHalfPants, "zipper shorter than cuff");
  }
  return {std::asin(std::min(ratio, 1.0))};
}

}  // namespace mcshane
