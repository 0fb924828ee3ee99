#pragma once

// Simple closed geodesics on the modular once-punctured torus, indexed by
// the Markov tree, and the partial sums of the cusp identity
// sum 1/(1 + e^l) = 1/2.

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mcshane {

using BigInt = boost::multiprecision::cpp_int;

/// Positive integers with a^2 + b^2 + c^2 = 3abc, stored with a <= b <= c.
struct MarkovTriple {
  BigInt a, b, c;

  bool satisfies_equation() const { return a * a + b * b + c * c == 3 * a * b * c; }
  friend bool operator==(const MarkovTriple&, const MarkovTriple&) = default;
};

/// A node of the tree. The root stands for the three slopes of (1, 1, 1);
/// every other node adds one slope, whose Markov number is `m`.
struct MarkovNode {
  MarkovTriple triple;
  BigInt m;
  int depth = 0;
  int geodesics = 1;  // 3 at the root
};

/// Breadth-first tree of Vieta moves from (1, 1, 1), never stepping back to
/// the parent. Different nodes may carry the same normalized triple (the
/// slopes 1/2, 2 and -1 all give (1, 1, 2)); each is a distinct geodesic.
std::vector<MarkovNode> markov_tree(int depth);

/// 2 arccosh(3m / 2), the length of the geodesic with Markov number m.
double markov_length(const BigInt& m);

struct MarkovGeodesic {
  BigInt m;
  double length = 0.0;
  double term = 0.0;         // 1 / (1 + e^length)
  double partial_sum = 0.0;  // running total in length order
};

/// One entry per geodesic, in increasing length order.
std::vector<MarkovGeodesic> geodesic_lengths(const std::vector<MarkovNode>& nodes);

/// All geodesics of length <= length_bound with running sums. Throws
/// BudgetExceeded when more than max_nodes tree nodes would be visited.
std::vector<MarkovGeodesic> markov_geodesics(double length_bound, std::size_t max_nodes = 10'000'000);

double mcshane_partial_sum(double length_bound, std::size_t max_nodes = 10'000'000);

/// CSV with columns m, length, term, partial_sum.
std::string markov_csv(const std::vector<MarkovGeodesic>& geodesics);

}  // namespace mcshane
