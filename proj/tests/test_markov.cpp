#include <map>

#include "doctest.h"

#include "mcshane/hyperbolic.hpp"
#include "mcshane/markov.hpp"

using namespace mcshane;

TEST_CASE("tree shape") {
  const auto root = markov_tree(0);
  REQUIRE(root.size() == 1);
  CHECK(root[0].triple == MarkovTriple{1, 1, 1});
  CHECK(root[0].geodesics == 3);

  const auto d1 = markov_tree(1);
  REQUIRE(d1.size() == 4);
  for (std::size_t k = 1; k < 4; ++k) {
    CHECK(d1[k].triple == MarkovTriple{1, 1, 2});
    CHECK(d1[k].m == 2);
    CHECK(d1[k].depth == 1);
  }
  for (int depth = 0; depth <= 8; ++depth) {
    const auto nodes = markov_tree(depth);
    CHECK(nodes.size() == 1 + 3 * ((std::size_t{1} << depth) - 1));
    for (const auto& n : nodes) {
      CHECK(n.triple.satisfies_equation());
      CHECK(n.m == n.triple.c);
    }
  }
  CHECK(markov_tree(-1).empty());
}

TEST_CASE("Markov numbers and their multiplicities") {
  // Markov numbers up to 1000.
  const std::vector<int> known{1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433, 610, 985};
  std::map<BigInt, int> count;
  for (const auto& n : markov_tree(12))
    if (n.m <= 1000) count[n.m] += n.geodesics;
  REQUIRE(count.size() == known.size());
  std::size_t k = 0;
  for (const auto& [m, c] : count) {
    CHECK(m == known[k]);
    CHECK(c == (known[k] <= 2 ? 3 : 6));
    ++k;
  }
}

TEST_CASE("lengths match the trace of the holonomy") {
  CHECK(markov_length(1) == doctest::Approx(2 * std::acosh(1.5)).epsilon(1e-14));
  CHECK(markov_length(1) == doctest::Approx(1.9248473002384139));
  CHECK(markov_length(2) == doctest::Approx(3.5254943480781717));
  // Elements of the commutator subgroup of SL(2,Z) with trace 3m.
  CHECK(markov_length(1) == doctest::Approx(translation_length(Isometry(2, 1, 1, 1))).epsilon(1e-12));
  CHECK(markov_length(2) == doctest::Approx(translation_length(Isometry(5, 2, 2, 1))).epsilon(1e-12));
  CHECK(markov_length(5) == doctest::Approx(translation_length(Isometry(13, 5, 5, 2))).epsilon(1e-12));
  CHECK_THROWS_AS(markov_length(0), Error);
}

TEST_CASE("very large Markov numbers") {
  const BigInt big = (BigInt(1) << 600) + 12345;
  CHECK(markov_length(big) == doctest::Approx(2 * (std::log(3.0) + 600 * std::log(2.0))).epsilon(1e-14));
  // Both evaluation paths agree near the switch-over.
  const BigInt edge = BigInt(1) << 500;
  CHECK(markov_length(edge) == doctest::Approx(markov_length(edge + 1)).epsilon(1e-14));
}

TEST_CASE("partial sums") {
  CHECK(mcshane_partial_sum(1.0) == 0.0);
  const double l1 = markov_length(1);
  CHECK(mcshane_partial_sum(2.0) == doctest::Approx(3.0 / (1.0 + std::exp(l1))).epsilon(1e-15));
  const double l2 = markov_length(2);
  CHECK(mcshane_partial_sum(4.0) ==
        doctest::Approx(3.0 / (1.0 + std::exp(l1)) + 3.0 / (1.0 + std::exp(l2))).epsilon(1e-15));

  const auto gs = markov_geodesics(30.0);
  for (std::size_t k = 1; k < gs.size(); ++k) {
    CHECK(gs[k].length >= gs[k - 1].length);
    CHECK(gs[k].partial_sum > gs[k - 1].partial_sum);
  }
  CHECK(gs.back().partial_sum <= 0.5 + 1e-12);
  CHECK(std::abs(gs.back().partial_sum - 0.5) < 1e-3);
}

TEST_CASE("geodesic list from an explicit tree") {
  const auto from_tree = geodesic_lengths(markov_tree(3));
  CHECK(from_tree.size() == 3 + 3 + 6 + 12);
  const auto direct = markov_geodesics(markov_length(13) + 1e-9);
  // Depth 3 reaches m = 13 and m = 29 on different branches; the bound cuts at 13.
  double s = 0.0;
  for (const auto& g : from_tree)
    if (g.m <= 13) s += g.term;
  CHECK(direct.back().partial_sum == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("node budget and csv") {
  try {
    markov_geodesics(60.0, 100);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  const std::string csv = markov_csv(markov_geodesics(4.0));
  CHECK(csv.rfind("m,length,term,partial_sum\n1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}
