#pragma once

// Closed genus-2 surfaces as Fuchsian groups with a marked point: generators,
// a convex fundamental polygon with side pairings, point location and ray
// unfolding.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mcshane/hyperbolic.hpp"

namespace mcshane {

using Word = std::vector<int>;

/// Side k of the fundamental polygon runs from vertex k to vertex k+1
/// (counterclockwise). Crossing it moves into generator(F).
struct DomainSide {
  HPoint from;
  HPoint to;
  int generator = -1;  // g with g(F) adjacent across this side
  int partner = -1;    // side that g^-1 carries this side onto
  Vec3 normal;         // <X, normal> >= 0 on the domain side
};

class SurfaceGroup {
 public:
  SurfaceGroup(std::vector<Isometry> generators, std::vector<std::string> names,
               std::vector<int> inverse, std::vector<HPoint> vertices,
               std::vector<int> side_generators, HPoint basepoint, int genus,
               std::vector<Word> relators);

  const std::vector<Isometry>& generators() const { return generators_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& inverse_table() const { return inverse_; }
  int inverse(int g) const { return inverse_[g]; }
  int generator_count() const { return static_cast<int>(generators_.size()); }
  const std::vector<DomainSide>& sides() const { return sides_; }
  const std::vector<HPoint>& vertices() const { return vertices_; }
  const std::vector<Word>& relators() const { return relators_; }
  HPoint basepoint() const { return basepoint_; }
  Vec3 basepoint_h() const { return basepoint_h_; }
  int genus() const { return genus_; }

  const Mat3& lorentz_generator(int g) const { return lorentz_[g]; }
  /// Side crossed when applying generator g; -1 if g pairs no side.
  int side_of_generator(int g) const { return side_of_generator_[g]; }

  /// Elements h (identity included) whose tile hF shares at least a vertex with F.
  const std::vector<Isometry>& vertex_star() const { return star_; }

  /// Distance from the basepoint to the nearest side line.
  double inradius() const { return inradius_; }
  /// Distance from the basepoint to the farthest vertex.
  double circumradius() const { return circumradius_; }
  /// Upper bound on the diameter of the domain (2 * circumradius).
  double diameter() const { return 2.0 * circumradius_; }

  Isometry word_matrix(const Word& word) const;
  std::string word_string(const Word& word) const;
  /// Parses a string of generator names; throws InvalidConfig on unknown letters.
  Word parse_word(const std::string& text) const;
  bool contains(Vec3 point, double slack = tol::kVertex) const;

 private:
  std::vector<Isometry> generators_;
  std::vector<std::string> names_;
  std::vector<int> inverse_;
  std::vector<HPoint> vertices_;
  std::vector<DomainSide> sides_;
  std::vector<Word> relators_;
  HPoint basepoint_;
  Vec3 basepoint_h_;
  int genus_ = 2;
  std::vector<Mat3> lorentz_;
  std::vector<int> side_of_generator_;
  std::vector<Isometry> star_;
  double inradius_ = 0.0;
  double circumradius_ = 0.0;
};

struct FenchelNielsen {
  double length = 0.0;
  double twist = 0.0;
};

struct CoverPath {
  std::vector<GeodesicSegment> segments;
  Word deck_word;
  double total_length = 0.0;
};

struct LocateResult {
  HPoint point;
  Isometry deck;  // deck * input == point
};

/// Regular octagon with vertex angle pi/4, relator a b A B c d C D, marked
/// point at the centre (i).
SurfaceGroup build_genus2_octagon();

/// Genus-2 surface from three pants-curve (length, twist) pairs; the surface
/// is two copies of one pair of pants glued along all three cuffs.
SurfaceGroup build_custom(std::span<const FenchelNielsen> fenchel_nielsen);

/// Dirichlet polygon at `basepoint` for the group generated by `generators`.
SurfaceGroup dirichlet_domain(const std::vector<Isometry>& generators, HPoint basepoint,
                              int genus);

LocateResult locate(HPoint point, const SurfaceGroup& group);

CoverPath unfold_ray(const SurfaceGroup& group, Angle direction, double max_length);

/// Relator words read off the vertex cycles of the domain.
std::vector<Word> vertex_cycle_relators(const SurfaceGroup& group);
/// Hyperbolic area of the fundamental polygon.
double domain_area(const SurfaceGroup& group);
/// Sum of all interior angles of the fundamental polygon.
double domain_angle_sum(const SurfaceGroup& group);

/// One piece of a ray folded back into the fundamental domain.
struct FoldedSegment {
  TangentRay ray;          // start point and unit tangent, inside F
  double length = 0.0;
  int exit_generator = -1; // generator applied on leaving; -1 when the ray stopped inside
};

enum class VertexPolicy {
  Throw,        // raise VertexHit within the vertex tolerance of a corner
  PassThrough,  // continue through the corner, emitting zero-length pieces
};

/// Steps a geodesic through the domain one side crossing at a time.
class RayFolder {
 public:
  RayFolder(const SurfaceGroup& group, TangentRay start, VertexPolicy policy = VertexPolicy::Throw);

  /// Next folded piece, at most `remaining` long.
  FoldedSegment next(double remaining);

 private:
  const SurfaceGroup* group_;
  TangentRay ray_;
  VertexPolicy policy_;
  int entry_side_ = -1;
};

/// Tiles met by the segment [from, to]: deck elements W with the segment
/// passing through W(F), in order. `from` may lie anywhere in the plane.
std::vector<Isometry> tiles_along(const SurfaceGroup& group, Vec3 from, Vec3 to);

TangentRay basepoint_ray(const SurfaceGroup& group, Angle direction);

void to_json(nlohmann::json& j, const SurfaceGroup& group);
SurfaceGroup surface_from_json(const nlohmann::json& j);

}  // namespace mcshane
