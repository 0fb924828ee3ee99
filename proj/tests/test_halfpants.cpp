#include <random>
#include <set>

#include "doctest.h"

#include "mcshane/halfpants.hpp"
#include "mcshane/raysim.hpp"

using namespace mcshane;

namespace {

HalfPantsParams random_params(std::mt19937_64& rng, TopoType type) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HalfPantsParams p;
  p.topo_type = type;
  p.l_cuff = 0.2 + 5.8 * u(rng);
  p.l_loop = p.l_cuff + 0.05 + 4.0 * u(rng);
  p.tau = p.l_cuff * u(rng);
  p.delta = 0.01 + 2.0 * u(rng);
  if (type == TopoType::ThriceHoled) p.n = static_cast<int>(7 * u(rng)) - 3;
  return p;
}

}  // namespace

TEST_CASE("embedded gap is twice the spiral angle") {
  for (double l : {0.5, 2.2568, 4.0})
    for (double extra : {0.01, 0.8, 3.0}) {
      const GapBreakdown g = gap_embedded(l, l + extra);
      const double s = spiral_angle(l, l + extra).value;
      CHECK(g.gap.value == doctest::Approx(2 * s).epsilon(1e-14));
      CHECK(g.term("asin_cosh") - g.term("asin_sinh") == doctest::Approx(s).epsilon(1e-12));
      CHECK(extended::spiral_angle(l, l + extra) == doctest::Approx(s).epsilon(1e-12));
    }
  // The octagon's shortest loops: cuff 2 arccosh(1 + 1/sqrt 2), loop 2 arccosh(cot(pi/8)).
  const double l = 2 * std::acosh(1 + 1 / std::sqrt(2.0)), lp = 2 * std::acosh(1 / std::tan(kPi / 8));
  CHECK(gap_embedded(l, lp).gap.value == doctest::Approx(0.20862).epsilon(1e-4));
  CHECK_THROWS_AS(gap_embedded(2.0, 1.0), Error);
  CHECK_THROWS_AS(spiral_angle(0.0, 1.0), Error);
}

TEST_CASE("spiral angle vanishes at both ends") {
  CHECK(spiral_angle(1.0, 1.0 + 1e-9).value < 1e-4);
  CHECK(spiral_angle(1.0, 20.0).value < 1e-4);
  for (double lp = 1.1; lp < 12; lp += 0.5) CHECK(spiral_angle(1.0, lp).value > 0.0);
  // Decreasing once the loop is much longer than the cuff.
  CHECK(spiral_angle(1.0, 6.0).value < spiral_angle(1.0, 5.0).value);
}

TEST_CASE("gap values stay in [0, pi]") {
  std::mt19937_64 rng(17);
  for (TopoType type : {TopoType::ThriceHoled, TopoType::OneHoledTorus}) {
    int evaluated = 0;
    for (int i = 0; i < 2000; ++i) {
      const HalfPantsParams p = random_params(rng, type);
      const double v = gap(p).gap.value;
      CHECK(v >= 0.0);
      CHECK(v <= kPi);
      ++evaluated;
    }
    CHECK(evaluated == 2000);
  }
}

TEST_CASE("extended evaluation agrees with double") {
  std::mt19937_64 rng(23);
  for (TopoType type : {TopoType::ThriceHoled, TopoType::OneHoledTorus}) {
    for (int i = 0; i < 300; ++i) {
      const HalfPantsParams p = random_params(rng, type);
      CHECK(std::abs(extended::gap(p) - gap(p).gap.value) < 1e-7);
    }
  }
  HalfPantsParams e;
  e.l_cuff = 2.0;
  e.l_loop = 3.0;
  CHECK(extended::gap(e) == doctest::Approx(gap(e).gap.value).epsilon(1e-12));
}

TEST_CASE("thrice-holed n = 0 is symmetric under tau -> l - tau") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 500; ++i) {
    HalfPantsParams p = random_params(rng, TopoType::ThriceHoled);
    p.n = 0;
    if (p.tau == 0.0) continue;
    HalfPantsParams q = p;
    q.tau = p.l_cuff - p.tau;
    CHECK(gap(p).gap.value == doctest::Approx(gap(q).gap.value).epsilon(1e-12));
  }
}

TEST_CASE("thrice-holed n != 0 is symmetric under (n, tau) -> (-n, l - tau)") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    HalfPantsParams p = random_params(rng, TopoType::ThriceHoled);
    if (p.n == 0) p.n = 1;
    if (p.tau == 0.0) continue;
    HalfPantsParams q = p;
    q.n = -p.n;
    q.tau = p.l_cuff - p.tau;
    CHECK(gap(p).gap.value == doctest::Approx(gap(q).gap.value).epsilon(1e-12));
  }
}

TEST_CASE("one-holed torus is symmetric under tau -> l - tau") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 500; ++i) {
    HalfPantsParams p = random_params(rng, TopoType::OneHoledTorus);
    if (p.tau == 0.0) continue;
    HalfPantsParams q = p;
    q.tau = p.l_cuff - p.tau;
    CHECK(gap(p).gap.value == doctest::Approx(gap(q).gap.value).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation") {
  HalfPantsParams p;
  p.topo_type = TopoType::ThriceHoled;
  p.l_cuff = 2.0;
  p.l_loop = 3.0;
  p.tau = 2.5;
  CHECK_THROWS_AS(gap(p), Error);
  p.tau = 0.5;
  p.delta = -1.0;
  CHECK_THROWS_AS(gap(p), Error);
  p.delta = 0.3;
  CHECK_NOTHROW(gap(p));
  CHECK_THROWS_AS(tip_distance(2.0, 3.0, RatioOrientation::AsPrinted), Error);
  CHECK(tip_distance(2.0, 3.0) == doctest::Approx(std::acosh(std::sinh(1.5) / std::sinh(1.0))));
  CHECK_THROWS_AS(spiral_threshold(0.0, 0.5), Error);
  CHECK(spiral_threshold(1.0, 0.5) == doctest::Approx(std::log(std::tanh(1.0) / std::tanh(0.5))));
  const double c = std::cosh(0.3), s1 = std::sinh(1.0), s2 = std::sinh(1.5);
  CHECK(psi(2.0, 3.0, 0.3) == doctest::Approx(0.5 * std::log(c * c / (s1 * s1) - c * c / (s2 * s2))));
  CHECK(extended::psi(2.0, 3.0, 0.3) == doctest::Approx(psi(2.0, 3.0, 0.3)).epsilon(1e-12));
}

TEST_CASE("cone-point summand forms agree") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double l1 = i % 10 == 1 ? 0.0 : 6.0 * u(rng), l2 = 6.0 * u(rng);
    const double th = kPi * (1.0 - u(rng));
    CHECK(std::abs(twz_interior_summand(l1, l2, th).value - twz_interior_via_zipper(l1, l2, th)) < 1e-12);
    CHECK(std::abs(twz_exterior_summand(l1, l2, th).value - twz_exterior_via_zipper(l1, l2, th)) < 1e-12);
    CHECK(std::abs(zipper_length(l1, l2, th) - zipper_length_constructed(l1, l2, th)) < 1e-9);
  }
}

TEST_CASE("gaps match Monte Carlo on a custom surface") {
  // This surface has short one-holed-torus half-pants, which the octagon lacks.
  const std::vector<FenchelNielsen> fn{{2.0, 0.0}, {2.5, 0.3}, {3.0, 0.7}};
  const SurfaceGroup g = build_custom(fn);
  const double bound = 7.0;
  const auto records = enumerate_half_pants(g, bound);
  const std::int64_t n = 200'000;
  const GapHistogram h = measure_gaps(g, n, 2 * bound + g.diameter(), 7);
  std::set<TopoType> seen;
  int torus = 0;
  for (const auto& r : records) {
    const double m = h.measure(r.canonical_word);
    const double se = bucket_stderr(r.gap.gap.value, n);
    INFO(r.canonical_word, " ", to_string(r.params.topo_type), " gap ", r.gap.gap.value, " mc ", m);
    CHECK(std::abs(m - r.gap.gap.value) <= 4 * se + 1e-12);
    seen.insert(r.params.topo_type);
    torus += r.params.topo_type == TopoType::OneHoledTorus;
  }
  CHECK(seen.count(TopoType::Embedded) == 1);
  CHECK(torus >= 4);
}
