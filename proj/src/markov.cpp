#include "mcshane/markov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>

#include "mcshane/error.hpp"

namespace mcshane {

namespace {

// Tree state: the two older coordinates and the newest one.
struct Frame {
  BigInt u, v, m;
  int depth = 0;
};

MarkovTriple normalized(const BigInt& x, const BigInt& y, const BigInt& z) {
  std::array<BigInt, 3> s{x, y, z};
  std::sort(s.begin(), s.end());
  return {s[0], s[1], s[2]};
}

std::array<Frame, 2> children(const Frame& f) {
  return {Frame{f.v, f.m, 3 * f.v * f.m - f.u, f.depth + 1},
          Frame{f.u, f.m, 3 * f.u * f.m - f.v, f.depth + 1}};
}

// e^(l/2) for the geodesic with Markov number m.
double half_exp_length(const BigInt& m) {
  const double x = 3.0 * m.convert_to<double>();
  return (x + std::sqrt(x * x - 4.0)) / 2.0;
}

}  // namespace

std::vector<MarkovNode> markov_tree(int depth) {
  std::vector<MarkovNode> out;
  if (depth < 0) return out;
  out.push_back({normalized(1, 1, 1), 1, 0, 3});
  std::deque<Frame> queue;
  for (int i = 0; i < 3; ++i) queue.push_back({1, 1, 2, 1});
  while (!queue.empty()) {
    Frame f = std::move(queue.front());
    queue.pop_front();
    if (f.depth > depth) break;
    out.push_back({normalized(f.u, f.v, f.m), f.m, f.depth, 1});
    for (auto& c : children(f)) queue.push_back(std::move(c));
  }
  return out;
}

double markov_length(const BigInt& m) {
  if (m < 1) throw Error(ErrorCode::Domain, "Markov numbers are positive");
  if (m > BigInt(1) << 500) {
    // 2 arccosh(3m/2) = 2 log(3m) up to terms far below double resolution.
    const auto bits = static_cast<long>(boost::multiprecision::msb(m));
    const double mantissa = BigInt(m >> (bits - 60)).convert_to<double>();
    return 2.0 * (std::log(3.0) + std::log(mantissa) + static_cast<double>(bits - 60) * std::log(2.0));
  }
  return 2.0 * std::log(half_exp_length(m));
}

namespace {

MarkovGeodesic make_geodesic(const BigInt& m) {
  MarkovGeodesic g;
  g.m = m;
  g.length = markov_length(m);
  const double e = half_exp_length(m);
  g.term = 1.0 / (1.0 + e * e);
  return g;
}

void accumulate(std::vector<MarkovGeodesic>& gs) {
  std::stable_sort(gs.begin(), gs.end(), [](const MarkovGeodesic& x, const MarkovGeodesic& y) {
    return x.length < y.length;
  });
  double sum = 0.0;
  for (auto& g : gs) {
    sum += g.term;
    g.partial_sum = sum;
  }
}

}  // namespace

std::vector<MarkovGeodesic> geodesic_lengths(const std::vector<MarkovNode>& nodes) {
  std::vector<MarkovGeodesic> out;
  for (const auto& node : nodes)
    for (int k = 0; k < node.geodesics; ++k) out.push_back(make_geodesic(node.m));
  accumulate(out);
  return out;
}

std::vector<MarkovGeodesic> markov_geodesics(double length_bound, std::size_t max_nodes) {
  std::vector<MarkovGeodesic> out;
  if (!(length_bound >= markov_length(1))) return out;
  for (int k = 0; k < 3; ++k) out.push_back(make_geodesic(1));
  // Lengths grow along every branch, so a subtree is cut at its first
  // node past the bound.
  std::deque<Frame> queue;
  for (int i = 0; i < 3; ++i) queue.push_back({1, 1, 2, 1});
  std::size_t visited = 1;
  while (!queue.empty()) {
    Frame f = std::move(queue.front());
    queue.pop_front();
    if (++visited > max_nodes) {
      throw Error(ErrorCode::BudgetExceeded, "Markov tree exceeds " + std::to_string(max_nodes) + " nodes");
    }
    if (markov_length(f.m) > length_bound) continue;
    out.push_back(make_geodesic(f.m));
    for (auto& c : children(f)) queue.push_back(std::move(c));
  }
  accumulate(out);
  return out;
}

double mcshane_partial_sum(double length_bound, std::size_t max_nodes) {
  const auto gs = markov_geodesics(length_bound, max_nodes);
  return gs.empty() ? 0.0 : gs.back().partial_sum;
}

std::string markov_csv(const std::vector<MarkovGeodesic>& geodesics) {
  std::string out = "m,length,term,partial_sum\n";
  char buf[128];
  for (const auto& g : geodesics) {
    std::snprintf(buf, sizeof buf, ",%.16g,%.16g,%.16g\n", g.length, g.term, g.partial_sum);
    out += g.m.str();
    out += buf;
  }
  return out;
}

}  // namespace mcshane
