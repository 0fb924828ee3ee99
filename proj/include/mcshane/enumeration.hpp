#pragma once

// Based geodesic loops at the marked point, their classification into the
// three kinds of lasso-induced half-pants, and parameter extraction.

#include <optional>
#include <string>
#include <vector>

#include "mcshane/halfpants.hpp"
#include "mcshane/surface.hpp"

namespace mcshane {

struct GeodesicLoop {
  Word word;
  Isometry matrix;
  double l_loop = 0.0;  // distance(p, g p)
  double l_free = 0.0;  // translation length of g
  bool loop_is_simple = false;
  bool loop_meets_free = false;
};

struct HalfPantsRecord {
  std::string canonical_word;
  Word canonical;
  HalfPantsParams params;
  GapBreakdown gap;
};

struct ExtractedParams {
  double tau = 0.0;
  double delta = 0.0;
  int n = 0;
};

struct EnumerationOptions {
  std::size_t max_candidates = 20'000'000;  // cap on orbit points visited
  unsigned threads = 0;                     // 0: hardware concurrency
};

/// Loops excluded from the half-pants list, with the reason.
struct ExcludedLoop {
  std::string word;
  double l_loop = 0.0;
  std::string reason;
};

/// All group elements g != 1 with distance(p, g p) <= length_bound, one
/// word per element, sorted by l_loop (ties by word).
std::vector<GeodesicLoop> enumerate_loops(const SurfaceGroup& group, double length_bound,
                                          const EnumerationOptions& options = {});

/// Builds the loop record for a single element (word must evaluate to it).
GeodesicLoop make_loop(const SurfaceGroup& group, const Word& word);

bool is_simple_loop(const GeodesicLoop& loop, const SurfaceGroup& group);
bool loop_meets_free(const GeodesicLoop& loop, const SurfaceGroup& group);

/// True when g = h^k for some h in the group and k >= 2.
bool is_proper_power(const Isometry& g, const SurfaceGroup& group);

/// Side-crossing sequence of the chord from p to g p, minimised over g and
/// its inverse. Canonical per element pair {g, g^-1}.
Word canonical_word(const Isometry& g, const SurfaceGroup& group);
/// Cutting sequence of the chord from p to g p (no inversion).
Word chord_word(const Isometry& g, const SurfaceGroup& group);

HalfPantsRecord classify(const GeodesicLoop& loop, const SurfaceGroup& group,
                         RatioOrientation orient = RatioOrientation::Reciprocal);
ExtractedParams extract_params(const GeodesicLoop& loop, const SurfaceGroup& group);

std::vector<HalfPantsRecord> enumerate_half_pants(const SurfaceGroup& group, double length_bound,
                                                  const EnumerationOptions& options = {},
                                                  std::vector<ExcludedLoop>* excluded = nullptr);

/// CSV table: canonical_word, topo_type, l_cuff, l_loop, tau, delta, n, gap.
std::string half_pants_csv(const std::vector<HalfPantsRecord>& records);

/// Geometry of a loop relative to the axis of its free geodesic.
struct AxisFrame {
  Vec3 normal;       // axis = {<X, normal> = 0}; the basepoint has <p, normal> > 0
  Vec3 foot;         // foot of the perpendicular from the basepoint
  Vec3 direction;    // unit tangent at foot, pointing the way g translates
  double tip_distance = 0.0;  // distance from the basepoint to the axis

  /// (signed offset along the axis from `foot`, signed distance from the axis).
  std::pair<double, double> coordinates(Vec3 x) const;
};

AxisFrame axis_frame(const Isometry& g, const SurfaceGroup& group);

/// Orbit points of the basepoint strictly inside one period of the strip
/// between the axis and the chain of loop chords, as deck elements.
std::vector<Isometry> strip_interior_points(const GeodesicLoop& loop, const SurfaceGroup& group);

/// Algebraic intersection number of the closed curve of h with the closed
/// geodesic of g.
int cuff_intersection(const Isometry& h, const Isometry& g, const SurfaceGroup& group);

/// Crossings of the perpendicular from the basepoint to the axis with its
/// translates, and the sign (+1 toward increasing tau) of the direction in
/// which the translate at the interior preimage leaves it.
std::pair<int, int> perpendicular_wraps(const GeodesicLoop& loop, const Isometry& interior,
                                        const SurfaceGroup& group);

}  // namespace mcshane
