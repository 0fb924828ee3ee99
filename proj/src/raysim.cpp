#include "mcshane/raysim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcshane/parallel.hpp"
#include "mcshane/philox.hpp"

namespace mcshane {

const char* to_string(RayStatus s) {
  switch (s) {
    case RayStatus::Lasso: return "lasso";
    case RayStatus::SimpleUpToCutoff: return "simple";
    case RayStatus::VertexHit: return "vertex-hit";
  }
  return "unknown";
}

namespace {

struct Piece {
  Vec3 a, b;
  double start = 0.0;  // arclength at a
  Isometry deck;       // the piece lies in deck(F)
};

// Uniform grid over Klein coordinates of the domain. Pieces are straight in
// the Klein model, so sampling each at half-cell spacing and querying the
// 3x3 neighbourhood of every sampled cell finds all crossing pairs.
class SegmentGrid {
 public:
  explicit SegmentGrid(double cell) : cell_(cell), side_(static_cast<int>(std::ceil(2.0 / cell)) + 1) {
    cells_.resize(static_cast<std::size_t>(side_) * side_);
  }

  void clear() {
    for (int c : touched_) cells_[c].clear();
    touched_.clear();
  }

  void cells_of(Vec3 a, Vec3 b, std::vector<int>& out) const {
    out.clear();
    const double ax = a.x / a.t, ay = a.y / a.t, bx = b.x / b.t, by = b.y / b.t;
    const double len = std::hypot(bx - ax, by - ay);
    const int steps = static_cast<int>(std::ceil(len / (0.5 * cell_))) + 1;
    for (int s = 0; s <= steps; ++s) {
      const double f = static_cast<double>(s) / steps;
      const int c = cell_index(ax + f * (bx - ax), ay + f * (by - ay));
      if (out.empty() || out.back() != c) out.push_back(c);
    }
  }

  void insert(const std::vector<int>& cells, int piece) {
    for (int c : cells) {
      auto& v = cells_[c];
      if (v.empty()) touched_.push_back(c);
      if (v.empty() || v.back() != piece) v.push_back(piece);
    }
  }

  void candidates(const std::vector<int>& cells, std::vector<int>& out) const {
    out.clear();
    for (int c : cells) {
      const int i = c / side_, j = c % side_;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= side_ || jj >= side_) continue;
          const auto& v = cells_[ii * side_ + jj];
          out.insert(out.end(), v.begin(), v.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

 private:
  int cell_index(double x, double y) const {
    const int i = std::clamp(static_cast<int>((x + 1.0) / cell_), 0, side_ - 1);
    const int j = std::clamp(static_cast<int>((y + 1.0) / cell_), 0, side_ - 1);
    return i * side_ + j;
  }

  double cell_;
  int side_;
  std::vector<std::vector<int>> cells_;
  std::vector<int> touched_;
};

double grid_cell(const SurfaceGroup& group) { return std::tanh(group.inradius()) / 16.0; }

}  // namespace

RayOutcome shoot(const SurfaceGroup& group, Angle direction, double cutoff, IntersectionIndex index) {
  if (!(cutoff > 0.0)) throw Error(ErrorCode::Domain, "cutoff must be positive");
  thread_local SegmentGrid* grid = nullptr;
  thread_local double grid_cell_size = 0.0;
  if (index == IntersectionIndex::Grid && (!grid || grid_cell_size != grid_cell(group))) {
    delete grid;
    grid_cell_size = grid_cell(group);
    grid = new SegmentGrid(grid_cell_size);
  }
  if (grid) grid->clear();

  RayOutcome out;
  out.direction = direction;
  std::vector<Piece> pieces;
  std::vector<int> cells, cand;
  RayFolder folder(group, basepoint_ray(group, direction), VertexPolicy::Throw);
  Isometry deck;
  double travelled = 0.0;
  try {
    while (travelled < cutoff) {
      const FoldedSegment seg = folder.next(cutoff - travelled);
      const Piece piece{seg.ray.point, seg.ray.at(seg.length), travelled, deck};
      const int k = static_cast<int>(pieces.size());
      if (index == IntersectionIndex::Grid) {
        grid->cells_of(piece.a, piece.b, cells);
        grid->candidates(cells, cand);
      } else {
        cand.resize(k);
        for (int j = 0; j < k; ++j) cand[j] = j;
      }
      double first = 1e300;
      int hit = -1;
      Vec3 hit_point;
      for (int j : cand) {
        const auto x = segment_crossing(piece.a, piece.b, pieces[j].a, pieces[j].b);
        if (!x) continue;
        const double s = hdistance(piece.a, *x);
        if (s < first) {
          first = s;
          hit = j;
          hit_point = *x;
        }
      }
      if (hit >= 0) {
        out.status = RayStatus::Lasso;
        out.lasso_length = piece.start + first;
        out.spoke_length = pieces[hit].start + hdistance(pieces[hit].a, hit_point);
        out.loop_element = deck * pieces[hit].deck.inverse();
        out.loop_word = group.word_string(canonical_word(out.loop_element, group));
        return out;
      }
      pieces.push_back(piece);
      if (index == IntersectionIndex::Grid) grid->insert(cells, k);
      travelled += seg.length;
      if (seg.exit_generator < 0) break;
      ++out.cross_count;
      deck = deck * group.generators()[seg.exit_generator];
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::VertexHit && e.code() != ErrorCode::DegenerateConfiguration) throw;
    out.status = RayStatus::VertexHit;
    return out;
  }
  out.status = RayStatus::SimpleUpToCutoff;
  return out;
}

double GapHistogram::measure(const std::string& word) const {
  const auto it = buckets.find(word);
  return it == buckets.end() ? 0.0 : it->second.measure;
}

double GapHistogram::stderr_of(const std::string& word) const {
  const auto it = buckets.find(word);
  return it == buckets.end() ? bucket_stderr(0.0, total_rays) : it->second.stderr_;
}

double bucket_stderr(double measure, std::int64_t n) {
  const double m = std::clamp(measure, 0.0, kTwoPi);
  return std::sqrt(m * (1.0 - m / kTwoPi) * kTwoPi / static_cast<double>(n));
}

Angle stratified_direction(std::uint64_t seed, std::int64_t i, std::int64_t n, std::uint32_t attempt) {
  const double u = Philox4x32::uniform(seed, static_cast<std::uint64_t>(i), attempt);
  return Angle::direction(kTwoPi * (static_cast<double>(i) + u) / static_cast<double>(n));
}

namespace {

RayOutcome shoot_with_retries(const SurfaceGroup& group, std::uint64_t seed, std::int64_t i, std::int64_t n,
                              double cutoff, const SimulationOptions& options) {
  RayOutcome r;
  for (int attempt = 0; attempt <= options.vertex_retries; ++attempt) {
    r = shoot(group, stratified_direction(seed, i, n, static_cast<std::uint32_t>(attempt)), cutoff, options.index);
    if (r.status != RayStatus::VertexHit) break;
  }
  return r;
}

constexpr std::int64_t kChunk = 2048;

}  // namespace

GapHistogram measure_gaps(const SurfaceGroup& group, std::int64_t n, double cutoff, std::uint64_t seed,
                          const SimulationOptions& options) {
  if (n <= 0) throw Error(ErrorCode::InvalidParameters, "ray count must be positive");
  if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidParameters, "cutoff must be positive");
  struct Partial {
    std::map<std::string, std::int64_t> counts;
    std::int64_t simple = 0, vertex = 0;
  };
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    Partial& p = partial[c];
    const std::int64_t lo = static_cast<std::int64_t>(c) * kChunk, hi = std::min(n, lo + kChunk);
    for (std::int64_t i = lo; i < hi; ++i) {
      const RayOutcome r = shoot_with_retries(group, seed, i, n, cutoff, options);
      switch (r.status) {
        case RayStatus::Lasso: ++p.counts[*r.loop_word]; break;
        case RayStatus::SimpleUpToCutoff: ++p.simple; break;
        case RayStatus::VertexHit: ++p.vertex; break;
      }
    }
  });
  GapHistogram h;
  h.total_rays = n;
  h.cutoff = cutoff;
  h.seed = seed;
  for (const Partial& p : partial) {
    for (const auto& [word, count] : p.counts) h.buckets[word].count += count;
    h.simple_count += p.simple;
    h.vertex_hit_count += p.vertex;
  }
  for (auto& [word, b] : h.buckets) {
    b.measure = kTwoPi * static_cast<double>(b.count) / static_cast<double>(n);
    b.stderr_ = bucket_stderr(b.measure, n);
  }
  return h;
}

std::vector<SparsityPoint> sparsity_experiment(const SurfaceGroup& group, std::int64_t n,
                                               const std::vector<double>& cutoffs, std::uint64_t seed,
                                               const SimulationOptions& options) {
  if (n <= 0) throw Error(ErrorCode::InvalidParameters, "ray count must be positive");
  if (cutoffs.empty()) throw Error(ErrorCode::InvalidParameters, "no cutoffs given");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0) || (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))) {
      throw Error(ErrorCode::InvalidParameters, "cutoffs must be positive and strictly increasing");
    }
  }
  // Lasso length per ray at the largest cutoff; +inf when simple, NaN on a vertex hit.
  std::vector<double> lasso(static_cast<std::size_t>(n));
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    const std::int64_t lo = static_cast<std::int64_t>(c) * kChunk, hi = std::min(n, lo + kChunk);
    for (std::int64_t i = lo; i < hi; ++i) {
      const RayOutcome r = shoot_with_retries(group, seed, i, n, cutoffs.back(), options);
      double v = std::numeric_limits<double>::infinity();
      if (r.status == RayStatus::Lasso) v = *r.lasso_length;
      if (r.status == RayStatus::VertexHit) v = std::numeric_limits<double>::quiet_NaN();
      lasso[static_cast<std::size_t>(i)] = v;
    }
  });
  std::int64_t valid = 0;
  for (double v : lasso) valid += !std::isnan(v);
  std::vector<SparsityPoint> out;
  for (double t : cutoffs) {
    std::int64_t simple = 0;
    for (double v : lasso) simple += !std::isnan(v) && v > t;
    const double f = valid > 0 ? static_cast<double>(simple) / static_cast<double>(valid) : 0.0;
    out.push_back({t, f, std::sqrt(f * (1.0 - f) / static_cast<double>(std::max<std::int64_t>(valid, 1)))});
  }
  return out;
}

nlohmann::json to_json(const GapHistogram& h) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& [word, b] : h.buckets) {
    buckets.push_back({{"word", word}, {"count", b.count}, {"measure", b.measure}, {"stderr", b.stderr_}});
  }
  const double n = static_cast<double>(h.total_rays);
  return {{"seed", h.seed},
          {"rng", "philox4x32-10"},
          {"N", h.total_rays},
          {"cutoff", h.cutoff},
          {"buckets", buckets},
          {"simple_fraction", static_cast<double>(h.simple_count) / n},
          {"vertexhit_fraction", static_cast<double>(h.vertex_hit_count) / n}};
}

std::string sparsity_csv(const std::vector<SparsityPoint>& points) {
  std::ostringstream os;
  os << "cutoff,fraction,stderr\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.16g,%.16g,%.16g\n", p.cutoff, p.fraction, p.stderr_);
    os << buf;
  }
  return os.str();
}

LiesWithinReport lies_within_check(const SurfaceGroup& group, const GeodesicLoop& loop, int samples,
                                   std::uint64_t seed, double band) {
  if (!loop.loop_is_simple || loop.loop_meets_free) {
    throw Error(ErrorCode::InvalidHalfPants, "lies-within check needs an embedded half-pants");
  }
  const HPoint p = group.basepoint();
  const AxisFrame f = axis_frame(loop.matrix, group);
  const double up = direction_to(p, apply(loop.matrix, p));
  const double down = direction_to(p, apply(loop.matrix.inverse(), p));
  const double toward_axis = direction_to(p, from_hyperboloid(f.foot));
  // Counterclockwise sweep from one zipper direction to the other through the axis side.
  auto ccw = [](double from, double to) { return std::fmod(std::fmod(to - from, kTwoPi) + kTwoPi, kTwoPi); };
  double start = up, sector = ccw(up, down);
  if (ccw(up, toward_axis) > sector) {
    start = down;
    sector = ccw(down, up);
  }
  LiesWithinReport rep;
  rep.samples = samples;
  rep.sector = sector;
  rep.spiral = spiral_angle(loop.l_free, loop.l_loop).value;
  const std::string word = group.word_string(canonical_word(loop.matrix, group));
  const double cutoff = 4.0 * loop.l_loop + 40.0;
  for (int i = 0; i < samples; ++i) {
    const double u = (i + Philox4x32::uniform(seed, static_cast<std::uint64_t>(i))) / samples;
    const double offset = u * sector;
    const double edge = std::min(offset, sector - offset);
    if (std::abs(edge - rep.spiral) < band) {
      ++rep.in_band;
      continue;
    }
    const bool predicted = edge < rep.spiral;
    rep.predicted_inside += predicted;
    const RayOutcome r = shoot(group, Angle::direction(start + offset), cutoff);
    const bool observed = r.status == RayStatus::Lasso && *r.loop_word == word;
    rep.misclassified += predicted != observed;
  }
  return rep;
}

}  // namespace mcshane
