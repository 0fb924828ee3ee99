#include "doctest.h"

#include "mcshane/philox.hpp"
#include "mcshane/raysim.hpp"

using namespace mcshane;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform draws") {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = Philox4x32::uniform(9, i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(Philox4x32::uniform(9, 5) == Philox4x32::uniform(9, 5));
  CHECK(Philox4x32::uniform(9, 5) != Philox4x32::uniform(10, 5));
  CHECK(Philox4x32::uniform(9, 5, 0) != Philox4x32::uniform(9, 5, 1));
}

TEST_CASE("stratified directions stay in their subinterval") {
  const std::int64_t n = 1000;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::uint32_t attempt : {0u, 3u}) {
      const double d = stratified_direction(1, i, n, attempt).value;
      CHECK(d >= kTwoPi * i / n);
      CHECK(d <= kTwoPi * (i + 1) / n);
    }
}

TEST_CASE("bucket standard error") {
  CHECK(bucket_stderr(0.0, 100) == 0.0);
  CHECK(bucket_stderr(kTwoPi, 100) == 0.0);
  CHECK(bucket_stderr(kPi, 100) == doctest::Approx(kPi / 10));
  CHECK(bucket_stderr(1.0, 400) == doctest::Approx(bucket_stderr(1.0, 100) / 2));
}

TEST_CASE("a ray toward a generator's image closes the loop it aims at") {
  const SurfaceGroup g = build_genus2_octagon();
  // Straight along the chord to a(p): the ray retraces the loop a, which is simple,
  // so the first self-intersection comes later; the outcome must still be a lasso.
  const HPoint target = apply(g.generators()[0], g.basepoint());
  const RayOutcome r = shoot(g, Angle::direction(direction_to(g.basepoint(), target) + 0.05), 40.0);
  CHECK(r.status == RayStatus::Lasso);
  REQUIRE(r.lasso_length.has_value());
  REQUIRE(r.spoke_length.has_value());
  CHECK(*r.spoke_length < *r.lasso_length);
  CHECK(r.loop_word.has_value());
}

TEST_CASE("grid index agrees with all-pairs search") {
  const SurfaceGroup g = build_genus2_octagon();
  for (std::int64_t i = 0; i < 1500; ++i) {
    const Angle dir = stratified_direction(3, i, 1500);
    const RayOutcome a = shoot(g, dir, 25.0, IntersectionIndex::Grid);
    const RayOutcome b = shoot(g, dir, 25.0, IntersectionIndex::AllPairs);
    REQUIRE(a.status == b.status);
    CHECK(a.loop_word == b.loop_word);
    if (a.lasso_length) CHECK(*a.lasso_length == doctest::Approx(*b.lasso_length).epsilon(1e-12));
  }
}

TEST_CASE("histogram bookkeeping") {
  const SurfaceGroup g = build_genus2_octagon();
  const GapHistogram h = measure_gaps(g, 5000, 12.0, 2);
  std::int64_t counted = h.simple_count + h.vertex_hit_count;
  double measure = 0.0;
  for (const auto& [word, b] : h.buckets) {
    counted += b.count;
    measure += b.measure;
    CHECK(b.measure == doctest::Approx(kTwoPi * b.count / 5000.0));
  }
  CHECK(counted == h.total_rays);
  CHECK(measure + kTwoPi * (h.simple_count + h.vertex_hit_count) / 5000.0 == doctest::Approx(kTwoPi));
  CHECK(h.measure("no-such-word") == 0.0);
}

TEST_CASE("results do not depend on the thread count") {
  const SurfaceGroup g = build_genus2_octagon();
  SimulationOptions one, four, sixteen;
  one.threads = 1;
  four.threads = 4;
  sixteen.threads = 16;
  const std::string a = to_json(measure_gaps(g, 6000, 15.0, 5, one)).dump();
  CHECK(a == to_json(measure_gaps(g, 6000, 15.0, 5, four)).dump());
  CHECK(a == to_json(measure_gaps(g, 6000, 15.0, 5, sixteen)).dump());
}

TEST_CASE("the generator buckets match the embedded gap") {
  const SurfaceGroup g = build_genus2_octagon();
  const std::int64_t n = 100'000;
  const GapHistogram h = measure_gaps(g, n, 12.0, 11);
  const auto loops = enumerate_loops(g, 3.1);
  const double gap = gap_embedded(loops[0].l_free, loops[0].l_loop).gap.value;
  for (const auto& l : loops) {
    const std::string w = g.word_string(canonical_word(l.matrix, g));
    CHECK(std::abs(h.measure(w) - gap) < 4 * bucket_stderr(gap, n));
  }
}

TEST_CASE("simple fraction decreases with the cutoff") {
  const SurfaceGroup g = build_genus2_octagon();
  const auto pts = sparsity_experiment(g, 20000, {1.0, 3.0, 5.0, 10.0}, 4);
  REQUIRE(pts.size() == 4);
  // No loop is shorter than the injectivity diameter, so short rays never close.
  CHECK(pts[0].fraction == 1.0);
  for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].fraction <= pts[k - 1].fraction);
  CHECK(pts.back().fraction < 0.5);
  CHECK(sparsity_csv(pts).rfind("cutoff,fraction,stderr\n", 0) == 0);
}

TEST_CASE("spiral angle brackets the embedded half-pants sector") {
  const SurfaceGroup g = build_genus2_octagon();
  const auto loops = enumerate_loops(g, 4.3);
  int checked = 0;
  for (const auto& l : loops) {
    if (!l.loop_is_simple || l.loop_meets_free) continue;
    const LiesWithinReport r = lies_within_check(g, l, 400, 3);
    CHECK(r.misclassified == 0);
    CHECK(r.predicted_inside > 0);
    ++checked;
  }
  CHECK(checked >= 8);
}
