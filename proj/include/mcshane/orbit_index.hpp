#pragma once

// Hash index of orbit points on the hyperboloid. Distinct orbit points of a
// surface group are at least twice the injectivity radius apart, so a coarse
// grid with neighbour lookup identifies them reliably.

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mcshane/hyperbolic.hpp"

namespace mcshane {

class OrbitIndex {
 public:
  explicit OrbitIndex(double cell = 0.25, double match = 1e-6) : cell_(cell), match_(match) {}

  /// Index of a stored point within the match tolerance (relative to t), or -1.
  int find(Vec3 p) const {
    const auto [i, j, k] = cell_of(p);
    const double tol = match_ * std::max(1.0, p.t);
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          auto it = cells_.find(key(i + di, j + dj, k + dk));
          if (it == cells_.end()) continue;
          for (int idx : it->second) {
            const Vec3 q = points_[idx];
            if (std::abs(q.t - p.t) <= tol && std::abs(q.x - p.x) <= tol &&
                std::abs(q.y - p.y) <= tol)
              return idx;
          }
        }
    return -1;
  }

  /// Inserts p unless present; returns {index, inserted}.
  std::pair<int, bool> insert(Vec3 p) {
    if (int idx = find(p); idx >= 0) return {idx, false};
    const auto [i, j, k] = cell_of(p);
    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    cells_[key(i, j, k)].push_back(idx);
    return {idx, true};
  }

  std::size_t size() const { return points_.size(); }
  const Vec3& point(int idx) const { return points_[idx]; }

 private:
  struct Cell {
    std::int64_t i, j, k;
  };
  Cell cell_of(Vec3 p) const {
    return {static_cast<std::int64_t>(std::floor(p.t / cell_)),
            static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }
  static std::uint64_t key(std::int64_t i, std::int64_t j, std::int64_t k) {
    auto mix = [](std::uint64_t h, std::int64_t v) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    };
    return mix(mix(mix(0, i), j), k);
  }

  double cell_;
  double match_;
  std::vector<Vec3> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace mcshane
