#pragma once

// Monte Carlo over directions at the marked point: shoot geodesic rays, stop
// at the first self-intersection (the lasso), and bucket directions by the
// half-pants the lasso induces.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mcshane/enumeration.hpp"
#include "mcshane/surface.hpp"

namespace mcshane {

enum class RayStatus { Lasso, SimpleUpToCutoff, VertexHit };

const char* to_string(RayStatus s);

struct RayOutcome {
  Angle direction;
  RayStatus status = RayStatus::SimpleUpToCutoff;
  std::optional<double> lasso_length;  // arclength at the second passage
  std::optional<double> spoke_length;  // arclength at the first passage
  std::optional<std::string> loop_word;
  int cross_count = 0;
  Isometry loop_element;  // h with h(first passage) = second passage, in the cover
};

enum class IntersectionIndex { Grid, AllPairs };

RayOutcome shoot(const SurfaceGroup& group, Angle direction, double cutoff,
                 IntersectionIndex index = IntersectionIndex::Grid);

struct Bucket {
  std::int64_t count = 0;
  double measure = 0.0;
  double stderr_ = 0.0;
};

struct GapHistogram {
  std::map<std::string, Bucket> buckets;
  std::int64_t total_rays = 0;
  std::int64_t simple_count = 0;
  std::int64_t vertex_hit_count = 0;
  double cutoff = 0.0;
  std::uint64_t seed = 0;

  double measure(const std::string& word) const;
  double stderr_of(const std::string& word) const;
};

/// Standard error of a bucket of measure m among n stratified draws.
double bucket_stderr(double measure, std::int64_t n);

/// Direction of ray i among n: one uniform draw per subinterval of [0, 2pi).
/// `attempt` selects a fresh draw inside the same subinterval.
Angle stratified_direction(std::uint64_t seed, std::int64_t i, std::int64_t n, std::uint32_t attempt = 0);

struct SimulationOptions {
  unsigned threads = 0;
  IntersectionIndex index = IntersectionIndex::Grid;
  int vertex_retries = 4;
};

GapHistogram measure_gaps(const SurfaceGroup& group, std::int64_t n, double cutoff, std::uint64_t seed,
                          const SimulationOptions& options = {});

struct SparsityPoint {
  double cutoff = 0.0;
  double fraction = 0.0;
  double stderr_ = 0.0;
};

std::vector<SparsityPoint> sparsity_experiment(const SurfaceGroup& group, std::int64_t n,
                                               const std::vector<double>& cutoffs, std::uint64_t seed,
                                               const SimulationOptions& options = {});

nlohmann::json to_json(const GapHistogram& h);
std::string sparsity_csv(const std::vector<SparsityPoint>& points);

/// Spiral-angle check on one embedded half-pants: directions are drawn across
/// the sector the half-pants occupies at the marked point; a direction is
/// predicted inside when it lies within a spiral angle of either zipper
/// direction, and observed inside when its lasso induces this half-pants.
struct LiesWithinReport {
  int samples = 0;
  int predicted_inside = 0;
  int in_band = 0;         // within the boundary band, not scored
  int misclassified = 0;
  double spiral = 0.0;     // spiral angle from the formula
  double sector = 0.0;     // angle of the half-pants sector at the marked point
};

LiesWithinReport lies_within_check(const SurfaceGroup& group, const GeodesicLoop& loop, int samples,
                                   std::uint64_t seed, double band = 1e-7);

}  // namespace mcshane
