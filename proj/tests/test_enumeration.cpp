#include <algorithm>
#include <deque>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"

#include "mcshane/enumeration.hpp"
#include "mcshane/orbit_index.hpp"

using namespace mcshane;

namespace {

const double kCuff = 2 * std::acosh(1 + 1 / std::sqrt(2.0));
const double kLoop = 2 * std::acosh(1 / std::tan(kPi / 8));

// Orbit of the basepoint by breadth-first search over generators.
std::vector<Isometry> orbit_ball(const SurfaceGroup& g, double radius) {
  std::vector<Isometry> out;
  OrbitIndex seen;
  seen.insert(g.basepoint_h());
  std::deque<Isometry> queue{Isometry()};
  while (!queue.empty()) {
    const Isometry h = queue.front();
    queue.pop_front();
    for (const auto& s : g.generators()) {
      const Isometry n = h * s;
      const HPoint q = apply(n, g.basepoint());
      if (distance(q, g.basepoint()) > radius) continue;
      if (!seen.insert(to_hyperboloid(q)).second) continue;
      out.push_back(n);
      queue.push_back(n);
    }
  }
  return out;
}

// Segment crossing decided in 113-bit arithmetic on the hyperboloid.
using Q = boost::multiprecision::cpp_bin_float_quad;
struct V {
  Q t, x, y;
};
V lift(HPoint p) {
  const Q X = p.x, Y = p.y, r = X * X + Y * Y;
  return {(r + 1) / (2 * Y), (r - 1) / (2 * Y), X / Y};
}
Q dot(const V& u, const V& v) { return u.t * v.t - u.x * v.x - u.y * v.y; }
V cross(const V& u, const V& v) {
  return {u.x * v.y - u.y * v.x, -(u.y * v.t - u.t * v.y), -(u.t * v.x - u.x * v.t)};
}
bool crosses(HPoint p1, HPoint q1, HPoint p2, HPoint q2) {
  const V a = lift(p1), b = lift(q1), c = lift(p2), d = lift(q2);
  const V n1 = cross(a, b), n2 = cross(c, d);
  const Q s1 = dot(c, n1), s2 = dot(d, n1), s3 = dot(a, n2), s4 = dot(b, n2);
  return s1 * s2 < 0 && s3 * s4 < 0;
}

// A loop is simple when no other lift of its chord crosses it or passes
// through an interior point of it.
bool simple_oracle(const SurfaceGroup& g, const Isometry& m, const std::vector<Isometry>& ball) {
  const HPoint o = g.basepoint(), p = apply(m, o);
  const double len = distance(o, p);
  const HPoint mid = point_along(o, direction_to(o, p), len / 2);
  for (const auto& h : ball) {
    const HPoint hp = apply(h, o);
    if (distance(hp, mid) > 1.5 * len + 1e-6) continue;
    const HPoint hq = apply(h * m, o);
    if (distance(hp, p) < 1e-7 || distance(hq, o) < 1e-7) continue;
    if (crosses(o, p, hp, hq)) return false;
    for (HPoint e : {hp, hq})
      if (distance(e, o) + distance(e, p) < len + 1e-9 && distance(e, o) > 1e-7 && distance(e, p) > 1e-7)
        return false;
  }
  return true;
}

Word inverse_word(const SurfaceGroup& g, const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(g.inverse(*it));
  return out;
}

// Distance from p to the axis of m, from the fixed points on the boundary.
double axis_distance(const Isometry& m, HPoint p) {
  const double a = m.a(), b = m.b(), c = m.c(), d = m.d();
  const double disc = std::sqrt((d - a) * (d - a) + 4 * b * c);
  const double u = (a - d + disc) / (2 * c), v = (a - d - disc) / (2 * c);
  const double c0 = (u + v) / 2, r = std::abs(u - v) / 2;
  const double dx = p.x - c0;
  return std::asinh(std::abs(dx * dx + p.y * p.y - r * r) / (2 * r * p.y));
}

}  // namespace

TEST_CASE("the eight shortest loops are the generators") {
  const SurfaceGroup g = build_genus2_octagon();
  const auto loops = enumerate_loops(g, 3.1);
  REQUIRE(loops.size() == 8);
  std::set<std::string> words;
  for (const auto& l : loops) {
    CHECK(l.l_loop == doctest::Approx(kLoop).epsilon(1e-12));
    CHECK(l.l_free == doctest::Approx(kCuff).epsilon(1e-12));
    CHECK(l.loop_is_simple);
    CHECK_FALSE(l.loop_meets_free);
    CHECK(l.word.size() == 1);
    words.insert(g.word_string(l.word));
  }
  CHECK(words.size() == 8);
}

TEST_CASE("enumeration finds every orbit point within the bound") {
  const SurfaceGroup g = build_genus2_octagon();
  const double bound = 5.5;
  const auto loops = enumerate_loops(g, bound);
  const auto ball = orbit_ball(g, bound + 2 * g.circumradius());
  std::size_t expected = 0;
  for (const auto& h : ball) expected += distance(apply(h, g.basepoint()), g.basepoint()) <= bound;
  CHECK(loops.size() == expected);
  for (std::size_t k = 1; k < loops.size(); ++k) CHECK(loops[k - 1].l_loop <= loops[k].l_loop);
  for (const auto& l : loops) {
    CHECK(g.word_matrix(l.word).distance_to(l.matrix) < 1e-8);
    CHECK(l.l_free <= l.l_loop + 1e-12);  // equal when the basepoint is on the axis
    // sinh(l_loop / 2) = cosh(z) sinh(l_free / 2) for the distance z to the axis.
    const double z = axis_distance(l.matrix, g.basepoint());
    CHECK(std::sinh(l.l_loop / 2) == doctest::Approx(std::cosh(z) * std::sinh(l.l_free / 2)).epsilon(1e-9));
    CHECK(axis_frame(l.matrix, g).tip_distance == doctest::Approx(z).epsilon(1e-9));
  }
}

TEST_CASE("simplicity agrees with a brute-force lift check") {
  const SurfaceGroup g = build_genus2_octagon();
  const double bound = 6.0;
  const auto loops = enumerate_loops(g, bound);
  const auto ball = orbit_ball(g, 2 * bound + 1e-6);
  int simple = 0;
  for (const auto& l : loops) {
    INFO(g.word_string(l.word));
    const bool s = simple_oracle(g, l.matrix, ball);
    CHECK(l.loop_is_simple == s);
    simple += s;
  }
  CHECK(simple > 0);
  CHECK(simple < static_cast<int>(loops.size()));
}

TEST_CASE("classification does not depend on orientation") {
  const SurfaceGroup g = build_genus2_octagon();
  // Bound 8 includes loops whose free geodesic has a lift through the basepoint.
  for (const auto& l : enumerate_loops(g, 8.0)) {
    const GeodesicLoop inv = make_loop(g, inverse_word(g, l.word));
    CHECK(inv.l_loop == doctest::Approx(l.l_loop).epsilon(1e-12));
    CHECK(inv.loop_is_simple == l.loop_is_simple);
    CHECK(inv.loop_meets_free == l.loop_meets_free);
    CHECK(canonical_word(inv.matrix, g) == canonical_word(l.matrix, g));
    if (!l.loop_is_simple || is_proper_power(l.matrix, g)) continue;
    try {
      const HalfPantsRecord a = classify(l, g), b = classify(inv, g);
      CHECK(a.canonical_word == b.canonical_word);
      CHECK(a.params.topo_type == b.params.topo_type);
      CHECK(a.gap.gap.value == doctest::Approx(b.gap.gap.value).epsilon(1e-9));
    } catch (const Error& e) {
      CHECK_THROWS_AS(classify(inv, g), Error);
    }
  }
}

TEST_CASE("extracted parameters are in range") {
  const SurfaceGroup g = build_genus2_octagon();
  for (const auto& r : enumerate_half_pants(g, 6.0)) {
    const auto& p = r.params;
    CHECK(p.l_cuff > 0.0);
    CHECK(p.l_cuff < p.l_loop);
    CHECK(p.tau >= 0.0);
    CHECK(p.tau < p.l_cuff);
    CHECK(p.delta >= 0.0);
    CHECK(r.gap.gap.value >= 0.0);
    CHECK(r.gap.gap.value <= kPi);
  }
}

TEST_CASE("octagon records up to length 4 are the four generator pairs") {
  const SurfaceGroup g = build_genus2_octagon();
  CHECK(enumerate_half_pants(g, 3.0).empty());
  const auto recs = enumerate_half_pants(g, 4.0);
  REQUIRE(recs.size() == 4);
  double sum = 0.0;
  for (const auto& r : recs) {
    CHECK(r.params.topo_type == TopoType::Embedded);
    sum += r.gap.gap.value;
  }
  CHECK(sum == doctest::Approx(8 * spiral_angle(kCuff, kLoop).value).epsilon(1e-12));
}

TEST_CASE("records are unique and the gap total stays below 2 pi") {
  const SurfaceGroup g = build_genus2_octagon();
  std::vector<ExcludedLoop> excluded;
  const auto recs = enumerate_half_pants(g, 6.0, {}, &excluded);
  std::set<std::string> words;
  double sum = 0.0;
  for (const auto& r : recs) {
    words.insert(r.canonical_word);
    sum += r.gap.gap.value;
  }
  CHECK(words.size() == recs.size());
  CHECK(sum <= kTwoPi);
  for (const auto& e : excluded) CHECK_FALSE(e.reason.empty());
}

TEST_CASE("proper powers") {
  const SurfaceGroup g = build_genus2_octagon();
  const Isometry a = g.generators()[0];
  CHECK_FALSE(is_proper_power(a, g));
  CHECK(is_proper_power(a * a, g));
  CHECK(is_proper_power(a * a * a, g));
  CHECK_FALSE(is_proper_power(a * g.generators()[2], g));
}

TEST_CASE("enumeration output does not depend on the thread count") {
  const SurfaceGroup g = build_genus2_octagon();
  EnumerationOptions one, four;
  one.threads = 1;
  four.threads = 4;
  CHECK(half_pants_csv(enumerate_half_pants(g, 6.0, one)) == half_pants_csv(enumerate_half_pants(g, 6.0, four)));
}

TEST_CASE("candidate budget") {
  const SurfaceGroup g = build_genus2_octagon();
  EnumerationOptions tiny;
  tiny.max_candidates = 10;
  try {
    enumerate_loops(g, 8.0, tiny);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("csv layout") {
  const SurfaceGroup g = build_genus2_octagon();
  const std::string csv = half_pants_csv(enumerate_half_pants(g, 4.0));
  CHECK(csv.rfind("canonical_word,topo_type,l_cuff,l_loop,tau,delta,n,gap\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
