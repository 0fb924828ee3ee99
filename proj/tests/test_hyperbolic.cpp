#include <complex>
#include <random>

#include "doctest.h"

#include "mcshane/halfpants.hpp"
#include "mcshane/hyperbolic.hpp"

using namespace mcshane;
using cplx = std::complex<double>;

namespace {

// Half-plane geometry redone with complex numbers only.
cplx to_disk_at(cplx base, cplx q) {
  const cplx w = (q - base.real()) / base.imag();
  return (w - cplx(0, 1)) / (w + cplx(0, 1));
}

// Unoriented angle in [0, pi/2] between the line through a, b and the line through a, c.
double line_angle(cplx a, cplx b, cplx c) {
  double phi = std::abs(std::arg(to_disk_at(a, b) / to_disk_at(a, c)));
  return std::min(phi, kPi - phi);
}

// Fermi coordinates about the imaginary axis: offset s along it, distance r from it.
cplx fermi(double s, double r) { return std::exp(s) * cplx(std::tanh(r), 1.0 / std::cosh(r)); }

double cdist(cplx p, cplx q) {
  return std::acosh(1.0 + std::norm(p - q) / (2.0 * p.imag() * q.imag()));
}

// Klein-model crossing of two half-plane segments: lines are straight there.
std::optional<cplx> klein_crossing(cplx a, cplx b, cplx c, cplx d) {
  auto klein = [](cplx z) {
    const cplx w = (z - cplx(0, 1)) / (z + cplx(0, 1));
    return 2.0 * w / (1.0 + std::norm(w));
  };
  const cplx p = klein(a), r = klein(b) - p, q = klein(c), s = klein(d) - q;
  auto crossz = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double den = crossz(r, s);
  if (std::abs(den) < 1e-14) return std::nullopt;
  const double t = crossz(q - p, s) / den, u = crossz(q - p, r) / den;
  if (t <= 1e-9 || t >= 1 - 1e-9 || u <= 1e-9 || u >= 1 - 1e-9) return std::nullopt;
  const cplx k = p + t * r;
  // Klein -> disk -> half-plane.
  const cplx w = k / (1.0 + std::sqrt(1.0 - std::norm(k)));
  return cplx(0, 1) * (1.0 + w) / (1.0 - w);
}

Isometry random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return Isometry::moving_i_to({u(rng), std::exp(u(rng))}) * Isometry::rotation_about_i(3 * u(rng));
}

}  // namespace

TEST_CASE("theta matches the explicit construction") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = 3.0 * u(rng), y = 4.0 * u(rng), z = 0.05 + 3.0 * u(rng);
    const cplx a = fermi(0.0, z), b = fermi(y, x), foot(0, 1);
    if (std::abs(a - b) < 1e-6) continue;
    CHECK(theta(x, y, z).value == doctest::Approx(line_angle(a, foot, b)).epsilon(1e-9));
  }
}

TEST_CASE("theta extended evaluation agrees with double") {
  for (double x : {0.1, 0.7, 2.0})
    for (double y : {0.0, 0.5, 3.0})
      for (double z : {0.2, 1.0, 2.5})
        // acos loses half the digits next to 0, where the two points nearly coincide.
        CHECK(std::abs(extended::theta(x, y, z) - theta(x, y, z).value) < 1e-7);
  CHECK_THROWS_AS(theta(0.5, -0.1, 1.0), Error);
}

TEST_CASE("distance is invariant under isometries") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Isometry g = random_isometry(rng);
    const HPoint p = apply(random_isometry(rng), {0, 1}), q = apply(random_isometry(rng), {0, 1});
    CHECK(distance(apply(g, p), apply(g, q)) == doctest::Approx(distance(p, q)).epsilon(1e-10));
    CHECK(distance(p, q) == doctest::Approx(cdist({p.x, p.y}, {q.x, q.y})).epsilon(1e-10));
    const HPoint back = apply(g.inverse(), apply(g, p));
    CHECK(distance(back, p) < 1e-9);
  }
}

TEST_CASE("composition stays unimodular") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Isometry acc;
  for (int i = 0; i < 10000; ++i)
    acc = acc * Isometry::rotation_about_i(3 * u(rng)) * Isometry::axial_translation(0.01 * u(rng));
  CHECK(acc.det() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(Isometry(1, 0, 0, -1).renormalized(), Error);
}

TEST_CASE("translation length and classification") {
  for (double t : {0.3, 1.0, 4.0}) {
    const Isometry g = Isometry::axial_translation(t);
    CHECK(translation_length(g) == doctest::Approx(t).epsilon(1e-12));
    CHECK(g.kind() == IsometryKind::Hyperbolic);
    std::mt19937_64 rng(static_cast<unsigned>(t * 10));
    const Isometry h = random_isometry(rng);
    CHECK(translation_length(h * g * h.inverse()) == doctest::Approx(t).epsilon(1e-9));
  }
  CHECK(Isometry::rotation_about_i(1.0).kind() == IsometryKind::Elliptic);
  CHECK(Isometry(1, 1, 0, 1).kind() == IsometryKind::Parabolic);
}

TEST_CASE("point_along and direction_to are inverse") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const HPoint p{u(rng) - 0.5, 0.2 + u(rng)};
    const double dir = kTwoPi * u(rng), d = 3.0 * u(rng) + 0.01;
    const HPoint q = point_along(p, dir, d);
    CHECK(distance(p, q) == doctest::Approx(d).epsilon(1e-9));
    const double back = direction_to(p, q);
    CHECK(std::abs(std::remainder(back - dir, kTwoPi)) < 1e-8);
  }
}

TEST_CASE("segment intersection matches the Klein model") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int crossings = 0;
  for (int i = 0; i < 2000; ++i) {
    HPoint pts[4];
    for (auto& p : pts) p = {u(rng), std::exp(u(rng))};
    const auto lib = segment_intersection(GeodesicSegment::between(pts[0], pts[1]),
                                          GeodesicSegment::between(pts[2], pts[3]));
    const auto ref = klein_crossing({pts[0].x, pts[0].y}, {pts[1].x, pts[1].y}, {pts[2].x, pts[2].y},
                                    {pts[3].x, pts[3].y});
    REQUIRE(lib.has_value() == ref.has_value());
    if (lib) {
      ++crossings;
      CHECK(cdist({lib->x, lib->y}, *ref) < 1e-7);
    }
  }
  CHECK(crossings > 100);
}

TEST_CASE("hyperboloid model") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Isometry g = random_isometry(rng);
    const HPoint p = apply(random_isometry(rng), {0, 1}), q = apply(random_isometry(rng), {0, 1});
    const Vec3 P = to_hyperboloid(p), Q = to_hyperboloid(q);
    CHECK(mdot(P, P) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hdistance(P, Q) == doctest::Approx(distance(p, q)).epsilon(1e-8));
    CHECK(distance(from_hyperboloid(P), p) < 1e-9);
    const Mat3 L = lorentz(g);
    CHECK(hdistance(L * P, to_hyperboloid(apply(g, p))) < 1e-7);
    const Vec3 n = mcross(P, Q);
    CHECK(std::abs(mdot(n, P)) < 1e-8 * (1 + std::abs(n.t)));
    const double dir = 0.37 * i;
    CHECK(std::abs(std::remainder(tangent_direction(p, tangent_at(p, dir)) - dir, kTwoPi)) < 1e-9);
  }
}

TEST_CASE("crossing time along a tangent ray") {
  // The ray up the imaginary axis from i meets the geodesic |z| = e^2 after arclength 2.
  const TangentRay ray{to_hyperboloid({0, 1}), tangent_at({0, 1}, kPi / 2)};
  const double r = std::exp(2.0);
  const Vec3 normal = normalize_spacelike(mcross(to_hyperboloid({r * std::cos(0.5), r * std::sin(0.5)}),
                                                 to_hyperboloid({r * std::cos(2.0), r * std::sin(2.0)})));
  const auto t = crossing_time(ray, normal);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("trirectangle acute angle lies in (0, pi/2)") {
  for (double a : {0.2, 1.0, 2.0})
    for (double b : {2.1, 3.0}) {
      const double v = trirectangle_acute_angle(a, b).value;
      CHECK(v > 0.0);
      CHECK(v < kPi / 2);
    }
}
