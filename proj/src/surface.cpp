#include "mcshane/surface.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <deque>
#include <map>
#include <numeric>

#include "mcshane/orbit_index.hpp"

namespace mcshane {

namespace {

double round16(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16g", v);
  return std::strtod(buf, nullptr);
}

Vec3 side_normal(Vec3 from, Vec3 to, Vec3 inside) {
  Vec3 n = normalize_spacelike(mcross(from, to));
  if (mdot(inside, n) < 0) n = -1.0 * n;
  return n;
}

double vertex_angle(Vec3 v, Vec3 prev, Vec3 next) {
  // Angle at v between the geodesics toward prev and next.
  Vec3 u = prev - mdot(prev, v) * v;
  Vec3 w = next - mdot(next, v) * v;
  u = normalize_spacelike(u);
  w = normalize_spacelike(w);
  return std::acos(std::clamp(-mdot(u, w), -1.0, 1.0));
}

}  // namespace

// ---------------------------------------------------------------------------
// SurfaceGroup

SurfaceGroup::SurfaceGroup(std::vector<Isometry> generators, std::vector<std::string> names,
                           std::vector<int> inverse, std::vector<HPoint> vertices,
                           std::vector<int> side_generators, HPoint basepoint, int genus,
                           std::vector<Word> relators)
    : generators_(std::move(generators)),
      names_(std::move(names)),
      inverse_(std::move(inverse)),
      vertices_(std::move(vertices)),
      relators_(std::move(relators)),
      basepoint_(basepoint),
      basepoint_h_(to_hyperboloid(basepoint)),
      genus_(genus) {
  const int ng = generator_count();
  if (names_.size() != generators_.size() || inverse_.size() != generators_.size() ||
      side_generators.size() != vertices_.size() || vertices_.size() < 3) {
    throw Error(ErrorCode::InvalidConfig, "inconsistent surface description");
  }
  for (auto& g : generators_) g = g.renormalized();
  for (const auto& g : generators_) lorentz_.push_back(lorentz(g));

  const int ns = static_cast<int>(vertices_.size());
  side_of_generator_.assign(ng, -1);
  for (int k = 0; k < ns; ++k) {
    const int g = side_generators[k];
    if (g < 0 || g >= ng) throw Error(ErrorCode::InvalidConfig, "side generator out of range");
    DomainSide s;
    s.from = vertices_[k];
    s.to = vertices_[(k + 1) % ns];
    s.generator = g;
    s.normal = side_normal(to_hyperboloid(s.from), to_hyperboloid(s.to), basepoint_h_);
    side_of_generator_[g] = k;
    sides_.push_back(s);
  }
  for (auto& s : sides_) {
    s.partner = side_of_generator_[inverse_[s.generator]];
    if (s.partner < 0) throw Error(ErrorCode::InvalidConfig, "unpaired side");
  }

  {
    OrbitIndex seen;
    seen.insert(basepoint_h_);
    star_.push_back(Isometry());
    for (int v = 0; v < ns; ++v) {
      // Walk around vertex v: cross the side starting there, then the side
      // starting at the image vertex, until back at v.
      Isometry w;
      int u = v;
      for (int guard = 0; guard <= ns; ++guard) {
        const DomainSide& s = sides_[u];
        w = w * generators_[s.generator];
        if (seen.insert(lorentz(w) * basepoint_h_).second) star_.push_back(w);
        u = (s.partner + 1) % ns;
        if (u == v) break;
      }
    }
  }

  inradius_ = 1e300;
  for (const auto& s : sides_) inradius_ = std::min(inradius_, std::asinh(mdot(basepoint_h_, s.normal)));
  for (const auto& v : vertices_) {
    circumradius_ = std::max(circumradius_, hdistance(basepoint_h_, to_hyperboloid(v)));
  }
}

Isometry SurfaceGroup::word_matrix(const Word& word) const {
  Isometry m;
  for (int g : word) m = m * generators_.at(g);
  return m;
}

std::string SurfaceGroup::word_string(const Word& word) const {
  std::string out;
  for (int g : word) out += names_.at(g);
  return out;
}

Word SurfaceGroup::parse_word(const std::string& text) const {
  Word out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (int g = 0; g < generator_count(); ++g) {
      const auto& n = names_[g];
      if (text.compare(pos, n.size(), n) == 0) {
        out.push_back(g);
        pos += n.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw Error(ErrorCode::InvalidConfig, "unknown generator in word '" + text + "'");
  }
  return out;
}

bool SurfaceGroup::contains(Vec3 p, double slack) const {
  return std::all_of(sides_.begin(), sides_.end(),
                     [&](const DomainSide& s) { return mdot(p, s.normal) >= -slack; });
}

// ---------------------------------------------------------------------------
// Regular octagon

SurfaceGroup build_genus2_octagon() {
  const double r_in = std::acosh(1.0 + std::sqrt(2.0));
  const double r_out = std::acosh((1.0 + std::sqrt(2.0)) * (1.0 + std::sqrt(2.0)));
  const HPoint centre{0.0, 1.0};
  const double step = kPi / 4;

  std::vector<HPoint> mids, verts;
  for (int k = 0; k < 8; ++k) {
    mids.push_back(point_along(centre, k * step, r_in));
    verts.push_back(point_along(centre, (k - 0.5) * step, r_out));
  }
  // Side i is carried onto side j (reversing it) by the half-turn about the
  // midpoint of side i composed with the rotation taking side j to side i.
  auto pairing = [&](int i, int j) {
    return Isometry::rotation_about(mids[i], kPi) * Isometry::rotation_about_i((i - j) * step);
  };
  const Isometry a = pairing(0, 2), b = pairing(3, 1), c = pairing(4, 6), d = pairing(7, 5);
  std::vector<Isometry> gens{a, a.inverse(), b, b.inverse(), c, c.inverse(), d, d.inverse()};
  std::vector<std::string> names{"a", "A", "b", "B", "c", "C", "d", "D"};
  std::vector<int> inverse{1, 0, 3, 2, 5, 4, 7, 6};
  std::vector<int> side_gen{0, 3, 1, 2, 4, 7, 5, 6};
  std::vector<Word> relators{{0, 2, 1, 3, 4, 6, 5, 7}};
  return SurfaceGroup(gens, names, inverse, verts, side_gen, centre, 2, relators);
}

// ---------------------------------------------------------------------------
// Dirichlet domains

namespace {

struct KleinPoint {
  double x, y;
};

struct HalfPlane {
  double c, ax, ay;  // c - ax*x - ay*y >= 0 in Klein coordinates
  int label;         // element index, or -1 for the bounding box
};

struct Clipped {
  std::vector<KleinPoint> pts;  // pts[k] starts edge k
  std::vector<int> labels;
};

double eval(const HalfPlane& h, KleinPoint p) { return h.c - h.ax * p.x - h.ay * p.y; }

Clipped clip(const Clipped& poly, const HalfPlane& h) {
  Clipped out;
  const std::size_t n = poly.pts.size();
  for (std::size_t k = 0; k < n; ++k) {
    const KleinPoint p = poly.pts[k], q = poly.pts[(k + 1) % n];
    const double fp = eval(h, p), fq = eval(h, q);
    if (fp >= 0) {
      out.pts.push_back(p);
      out.labels.push_back(poly.labels[k]);
    }
    if ((fp >= 0) != (fq >= 0)) {
      const double s = fp / (fp - fq);
      out.pts.push_back({p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)});
      out.labels.push_back(fp >= 0 ? h.label : poly.labels[k]);
    }
  }
  return out;
}

struct Candidate {
  Isometry g;
  Vec3 orbit;
  double dist;
};

// Elements reached by words over `gens` whose orbit points stay within
// `radius` of the basepoint.
std::vector<Candidate> orbit_ball(const std::vector<Isometry>& gens, Vec3 base, double radius,
                                  std::size_t cap) {
  OrbitIndex index;
  index.insert(base);
  std::vector<Candidate> out;
  std::deque<Isometry> queue{Isometry()};
  while (!queue.empty()) {
    const Isometry h = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const Isometry w = h * gens[s];
      const Vec3 p = lorentz(w) * base;
      const double d = hdistance(base, p);
      if (d > radius) continue;
      if (!index.insert(p).second) continue;
      out.push_back({w, p, d});
      queue.push_back(w);
      if (out.size() > cap) throw Error(ErrorCode::ConstructionFailed, "orbit ball too large");
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& l, const Candidate& r) { return l.dist < r.dist; });
  return out;
}

struct Polygon {
  std::vector<Vec3> vertices;
  std::vector<int> labels;  // candidate index of each side
  bool compact = false;
};

Polygon dirichlet_polygon(const std::vector<Candidate>& cands, Vec3 base) {
  // Work in Klein coordinates centred at the basepoint.
  Clipped poly;
  const double box = 1.01;
  poly.pts = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  poly.labels = {-1, -1, -1, -1};
  // Recentre: the isometry taking base to (1,0,0).
  const HPoint bp = from_hyperboloid(base);
  const Mat3 recentre = lorentz(Isometry::moving_i_to(bp).inverse());
  std::vector<Vec3> local;
  for (const auto& c : cands) local.push_back(recentre * c.orbit);
  const Vec3 origin{1, 0, 0};
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const Vec3 n = normalize_spacelike(local[k] - origin);
    // Klein coordinates (y/t, x/t) keep the half-plane orientation.
    poly = clip(poly, {n.t, n.y, n.x, static_cast<int>(k)});
    if (poly.pts.size() < 3) break;
  }
  // Merge vertices that coincide (degenerate edges).
  Clipped merged;
  const std::size_t n = poly.pts.size();
  for (std::size_t k = 0; k < n; ++k) {
    const KleinPoint p = poly.pts[k], q = poly.pts[(k + 1) % n];
    if (std::hypot(p.x - q.x, p.y - q.y) < 1e-11) continue;
    merged.pts.push_back(p);
    merged.labels.push_back(poly.labels[k]);
  }
  Polygon out;
  out.compact = merged.pts.size() >= 3;
  for (int l : merged.labels) out.compact = out.compact && l >= 0;
  for (const auto& p : merged.pts) out.compact = out.compact && std::hypot(p.x, p.y) < 1.0 - 1e-12;
  if (!out.compact) return out;
  out.labels = merged.labels;
  // Exact vertices from consecutive bisector lines.
  const std::size_t m = merged.labels.size();
  std::vector<Vec3> normals;
  for (int l : merged.labels) normals.push_back(normalize_spacelike(cands[l].orbit - base));
  for (std::size_t k = 0; k < m; ++k) {
    const Vec3 prev = normals[(k + m - 1) % m], cur = normals[k];
    Vec3 v = mcross(prev, cur);
    if (mdot(v, v) <= 0) {
      out.compact = false;
      return out;
    }
    out.vertices.push_back(normalize_point(v));
  }
  return out;
}

}  // namespace

SurfaceGroup dirichlet_domain(const std::vector<Isometry>& generators, HPoint basepoint, int genus) {
  const Vec3 base = to_hyperboloid(basepoint);
  std::vector<Isometry> gens;
  for (const auto& g : generators) {
    gens.push_back(g.renormalized());
    gens.push_back(g.renormalized().inverse());
  }
  double reach = 0.0;
  for (const auto& g : gens) reach = std::max(reach, hdistance(base, lorentz(g) * base));

  const double target_area = 4.0 * kPi * (genus - 1);
  double radius = 2.0 * reach;
  constexpr std::size_t kCap = 400000;
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto cands = orbit_ball(gens, base, radius, kCap);
    Polygon poly = dirichlet_polygon(cands, base);
    if (!poly.compact) {
      radius *= 1.5;
      continue;
    }
    // Refine with the side pairings found so far: every element whose
    // bisector can touch the polygon is within twice its circumradius.
    for (int refine = 0; refine < 4; ++refine) {
      double circ = 0.0;
      for (const auto& v : poly.vertices) circ = std::max(circ, hdistance(base, v));
      std::vector<Isometry> sides;
      for (int l : poly.labels) sides.push_back(cands[l].g);
      auto more = orbit_ball(sides, base, 2.0 * circ + 1e-6, kCap);
      Polygon next = dirichlet_polygon(more, base);
      if (!next.compact) break;
      const bool same = next.labels.size() == poly.labels.size();
      cands = std::move(more);
      poly = std::move(next);
      if (same) break;
    }

    // Label sides with generator names, pairing each side with its inverse.
    const std::size_t m = poly.labels.size();
    OrbitIndex side_index;
    for (int l : poly.labels) side_index.insert(cands[l].orbit);
    std::vector<int> partner(m, -1);
    bool paired = true;
    for (std::size_t k = 0; k < m; ++k) {
      const Isometry inv = cands[poly.labels[k]].g.inverse();
      const int j = side_index.find(lorentz(inv) * base);
      if (j < 0) paired = false;
      partner[k] = j;
    }
    if (!paired) {
      radius *= 1.5;
      continue;
    }
    std::vector<Isometry> out_gens;
    std::vector<std::string> names;
    std::vector<int> inverse;
    std::vector<int> side_gen(m, -1);
    for (std::size_t k = 0; k < m; ++k) {
      if (side_gen[k] >= 0) continue;
      const int idx = static_cast<int>(out_gens.size());
      const char letter = static_cast<char>('a' + idx / 2);
      out_gens.push_back(cands[poly.labels[k]].g);
      out_gens.push_back(cands[poly.labels[k]].g.inverse());
      names.push_back(std::string(1, letter));
      names.push_back(std::string(1, static_cast<char>(letter - 'a' + 'A')));
      inverse.push_back(idx + 1);
      inverse.push_back(idx);
      side_gen[k] = idx;
      side_gen[partner[k]] = idx + 1;
    }
    // Vertex k of the surface starts side k: it is the end of side k-1.
    std::vector<HPoint> verts;
    for (const auto& v : poly.vertices) verts.push_back(from_hyperboloid(v));
    SurfaceGroup group(out_gens, names, inverse, verts, side_gen, basepoint, genus, {});
    const double area = domain_area(group);
    if (std::abs(area - target_area) > 1e-6) {
      radius *= 1.5;
      continue;
    }
    auto relators = vertex_cycle_relators(group);
    return SurfaceGroup(out_gens, names, inverse, verts, side_gen, basepoint, genus, relators);
  }
  throw Error(ErrorCode::ConstructionFailed, "Dirichlet domain did not close up");
}

std::vector<Word> vertex_cycle_relators(const SurfaceGroup& group) {
  const auto& sides = group.sides();
  const int m = static_cast<int>(sides.size());
  std::vector<bool> seen(m, false);
  std::vector<Word> out;
  for (int v0 = 0; v0 < m; ++v0) {
    if (seen[v0]) continue;
    Word word;
    int v = v0;
    do {
      seen[v] = true;
      word.push_back(sides[v].generator);
      // Vertex v starts side v; the pairing maps it to the end of the partner side.
      v = (sides[v].partner + 1) % m;
      if (static_cast<int>(word.size()) > m) {
        throw Error(ErrorCode::ConstructionFailed, "vertex cycle does not close");
      }
    } while (v != v0);
    out.push_back(word);
  }
  return out;
}

double domain_angle_sum(const SurfaceGroup& group) {
  const auto& verts = group.vertices();
  const std::size_t m = verts.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sum += vertex_angle(to_hyperboloid(verts[k]), to_hyperboloid(verts[(k + m - 1) % m]),
                        to_hyperboloid(verts[(k + 1) % m]));
  }
  return sum;
}

double domain_area(const SurfaceGroup& group) {
  const double m = static_cast<double>(group.vertices().size());
  return (m - 2.0) * kPi - domain_angle_sum(group);
}

// ---------------------------------------------------------------------------
// Fenchel-Nielsen construction

namespace {

// 2x2 real matrix acting on the half-plane; orientation reversing when det < 0
// (the map is then applied to the conjugate point).
struct Gl2 {
  double a = 1, b = 0, c = 0, d = 1;

  static Gl2 of(const Isometry& g) { return {g.a(), g.b(), g.c(), g.d()}; }
  friend Gl2 operator*(const Gl2& l, const Gl2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
            l.c * r.b + l.d * r.d};
  }
  Gl2 inverse() const {
    const double det = a * d - b * c;
    return {d / det, -b / det, -c / det, a / det};
  }
  Isometry orientation_preserving() const {
    const double det = a * d - b * c;
    if (!(det > 0)) throw Error(ErrorCode::ConstructionFailed, "orientation-reversing product");
    return Isometry(a, b, c, d).renormalized();
  }
};

// Frame taking i to q and the upward direction at i to direction phi at q.
Isometry frame(HPoint q, double phi) {
  return Isometry::moving_i_to(q) * Isometry::rotation_about_i(phi - kPi / 2);
}

Isometry translation_along(HPoint q, double phi, double t) {
  const Isometry f = frame(q, phi);
  return f * Isometry::axial_translation(t) * f.inverse();
}

Gl2 reflection_in(HPoint q, double phi) {
  const Isometry f = frame(q, phi);
  return Gl2::of(f) * Gl2{-1, 0, 0, 1} * Gl2::of(f.inverse());
}

// Direction of travel at distance `dist` along the geodesic leaving `from` in direction `dir`.
double arrival_direction(HPoint from, double dir, double dist) {
  const TangentRay ray{to_hyperboloid(from), tangent_at(from, dir)};
  const Vec3 p = ray.at(dist);
  return tangent_direction(from_hyperboloid(p), ray.velocity(dist));
}

double opposite_seam(double a1, double a2, double a3) {
  return std::acosh((std::cosh(a1) * std::cosh(a2) + std::cosh(a3)) / (std::sinh(a1) * std::sinh(a2)));
}

}  // namespace

SurfaceGroup build_custom(std::span<const FenchelNielsen> fn) {
  if (fn.size() != 3) throw Error(ErrorCode::ConstructionFailed, "genus 2 needs three pants curves");
  for (const auto& c : fn) {
    if (!(c.length > 0.0) || !std::isfinite(c.length) || !std::isfinite(c.twist)) {
      throw Error(ErrorCode::ConstructionFailed, "pants-curve lengths must be positive");
    }
  }
  const double l1 = fn[0].length, l2 = fn[1].length, l3 = fn[2].length;
  const double a1 = l1 / 2, a2 = l2 / 2, a3 = l3 / 2;
  // Right-angled hexagon with alternate sides a1, a2, a3 on the cuff axes.
  // Cuff 1 is the imaginary axis; the seams to cuffs 3 and 2 leave it
  // horizontally at i and i*e^{a1}.
  const double b3 = opposite_seam(a1, a2, a3);
  const double b2 = opposite_seam(a1, a3, a2);
  const HPoint p1{0, 1}, p2{0, std::exp(a1)};
  const HPoint q2 = point_along(p2, 0.0, b3);
  const double dir2 = arrival_direction(p2, 0.0, b3) - kPi / 2;
  const HPoint q3 = point_along(p1, 0.0, b2);
  const double dir3 = arrival_direction(p1, 0.0, b2) - kPi / 2;

  const Isometry c1 = Isometry::axial_translation(l1);
  const Isometry c2 = translation_along(q2, dir2, l2);
  const Isometry c3 = translation_along(q3, dir3, l3);
  if ((c3 * c2 * c1).distance_to(Isometry()) > 1e-6) {
    throw Error(ErrorCode::ConstructionFailed, "pants holonomy does not close");
  }
  // The second pants is the mirror image across cuff 1, slid by the first twist.
  const Gl2 mirror = Gl2::of(Isometry::axial_translation(fn[0].twist)) * Gl2{-1, 0, 0, 1};
  const Gl2 mirror_inv = mirror.inverse();
  const Isometry c2p = (mirror * Gl2::of(c2) * mirror_inv).orientation_preserving();
  const Isometry u2 =
      (Gl2::of(translation_along(q2, dir2, fn[1].twist)) * reflection_in(q2, dir2) * mirror_inv)
          .orientation_preserving();
  const Isometry u3 =
      (Gl2::of(translation_along(q3, dir3, fn[2].twist)) * reflection_in(q3, dir3) * mirror_inv)
          .orientation_preserving();

  // u3 * (u2^-1 c2 u2 c1)^-1 * u3^-1 * (c2 c1) = 1
  const Isometry glued = u2.inverse() * c2 * u2 * c1;
  const Isometry residual = u3 * glued.inverse() * u3.inverse() * c2 * c1;
  if (residual.distance_to(Isometry()) > 1e-6 || (u2 * c2p * u2.inverse()).distance_to(c2) > 1e-6) {
    throw Error(ErrorCode::ConstructionFailed, "relator residual above 1e-6");
  }
  for (const auto& [g, l] : {std::pair{c1, l1}, std::pair{c2, l2}, std::pair{c3, l3}}) {
    if (std::abs(translation_length(g) - l) > 1e-6) {
      throw Error(ErrorCode::ConstructionFailed, "pants-curve length mismatch");
    }
  }

  // Basepoint: Klein centroid of the hexagon.
  const HPoint r2 = point_along(q2, dir2, a2);
  const HPoint r3 = point_along(q3, dir3 + kPi, a3);
  double kx = 0, ky = 0;
  for (HPoint v : {p1, p2, q2, r2, r3, q3}) {
    const Vec3 h = to_hyperboloid(v);
    kx += h.x / h.t / 6;
    ky += h.y / h.t / 6;
  }
  const HPoint base = from_hyperboloid(normalize_point({1.0, kx, ky}));
  return dirichlet_domain({c1, c2, u2, u3}, base, 2);
}

// ---------------------------------------------------------------------------
// Point location and rays

LocateResult locate(HPoint point, const SurfaceGroup& group) {
  if (!point.interior()) throw Error(ErrorCode::Domain, "locate() needs an interior point");
  Vec3 x = to_hyperboloid(point);
  Isometry deck;
  const auto& sides = group.sides();
  constexpr int kBudget = 64;
  for (int step = 0; step <= kBudget; ++step) {
    int worst = -1;
    double worst_val = -tol::kVertex;
    for (std::size_t k = 0; k < sides.size(); ++k) {
      const double v = mdot(x, sides[k].normal);
      if (v < worst_val) {
        worst_val = v;
        worst = static_cast<int>(k);
      }
    }
    if (worst < 0) return {from_hyperboloid(x), deck};
    if (step == kBudget) break;
    const int back = group.inverse(sides[worst].generator);
    x = normalize_point(group.lorentz_generator(back) * x);
    deck = group.generators()[back] * deck;
  }
  throw Error(ErrorCode::LookupFailed, "point not located within 64 wall crossings");
}

TangentRay basepoint_ray(const SurfaceGroup& group, Angle direction) {
  const HPoint p = group.basepoint();
  return TangentRay{to_hyperboloid(p), tangent_at(p, direction.value)}.renormalized();
}

RayFolder::RayFolder(const SurfaceGroup& group, TangentRay start, VertexPolicy policy)
    : group_(&group), ray_(start), policy_(policy) {}

FoldedSegment RayFolder::next(double remaining) {
  const auto& sides = group_->sides();
  double best = 1e300;
  int best_side = -1;
  for (std::size_t k = 0; k < sides.size(); ++k) {
    if (static_cast<int>(k) == entry_side_) continue;
    // <X(s), n> = a cosh(s) + b sinh(s); the ray leaves this half-plane only if b < 0.
    const double a = mdot(ray_.point, sides[k].normal);
    const double b = mdot(ray_.dir, sides[k].normal);
    if (!(b < 0.0)) continue;
    double s = 0.0;
    if (a > 0.0) {
      const double r = -a / b;
      if (r >= 1.0) continue;
      s = std::atanh(r);
    }
    if (s < best) {
      best = s;
      best_side = static_cast<int>(k);
    }
  }
  if (best_side < 0) throw Error(ErrorCode::DegenerateConfiguration, "ray does not leave the domain");
  FoldedSegment seg;
  seg.ray = ray_;
  if (best >= remaining) {
    seg.length = remaining;
    ray_ = TangentRay{ray_.at(remaining), ray_.velocity(remaining)}.renormalized();
    return seg;
  }
  const DomainSide& side = sides[best_side];
  const Vec3 exit = ray_.at(best);
  if (policy_ == VertexPolicy::Throw) {
    for (HPoint corner : {side.from, side.to}) {
      if (hdistance(exit, to_hyperboloid(corner)) < tol::kVertex) {
        throw Error(ErrorCode::VertexHit, "ray passes through a domain vertex");
      }
    }
  }
  seg.length = best;
  seg.exit_generator = side.generator;
  const Mat3& back = group_->lorentz_generator(group_->inverse(side.generator));
  ray_ = TangentRay{back * exit, back * ray_.velocity(best)}.renormalized();
  entry_side_ = side.partner;
  return seg;
}

std::vector<Isometry> tiles_along(const SurfaceGroup& group, Vec3 from, Vec3 to) {
  const LocateResult loc = locate(from_hyperboloid(from), group);
  const Isometry start = loc.deck.inverse();  // tile containing `from`
  const Mat3 m = lorentz(loc.deck);
  const Vec3 p = m * from, q = m * to;
  const double len = hdistance(p, q);
  std::vector<Isometry> out{start};
  if (len == 0.0) return out;
  RayFolder folder(group, TangentRay{p, q - mdot(q, p) * p}.renormalized(), VertexPolicy::PassThrough);
  Isometry w = start;
  double travelled = 0.0;
  while (travelled < len) {
    const FoldedSegment seg = folder.next(len - travelled);
    travelled += seg.length;
    if (seg.exit_generator < 0) break;
    w = w * group.generators()[seg.exit_generator];
    out.push_back(w);
    if (out.size() > 100000) throw Error(ErrorCode::BudgetExceeded, "segment crosses too many tiles");
  }
  return out;
}

CoverPath unfold_ray(const SurfaceGroup& group, Angle direction, double max_length) {
  if (!(max_length > 0.0)) throw Error(ErrorCode::Domain, "max_length must be positive");
  RayFolder folder(group, basepoint_ray(group, direction));
  CoverPath path;
  Isometry deck;
  double travelled = 0.0;
  while (travelled < max_length) {
    const FoldedSegment seg = folder.next(max_length - travelled);
    const HPoint a = from_hyperboloid(seg.ray.at(0.0));
    const HPoint b = from_hyperboloid(seg.ray.at(seg.length));
    path.segments.push_back({apply(deck, a), apply(deck, b), seg.length});
    travelled += seg.length;
    if (seg.exit_generator < 0) break;
    path.deck_word.push_back(seg.exit_generator);
    deck = deck * group.generators()[seg.exit_generator];
  }
  path.total_length = travelled;
  return path;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const SurfaceGroup& group) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : group.generators()) {
    gens.push_back({round16(g.a()), round16(g.b()), round16(g.c()), round16(g.d())});
  }
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : group.vertices()) verts.push_back({round16(v.x), round16(v.y)});
  nlohmann::json pairing = nlohmann::json::array();
  for (const auto& s : group.sides()) pairing.push_back({{"generator", s.generator}, {"partner", s.partner}});
  j = nlohmann::json{{"generators", gens},
                     {"names", group.names()},
                     {"inverse", group.inverse_table()},
                     {"vertices", verts},
                     {"pairing", pairing},
                     {"basepoint", {round16(group.basepoint().x), round16(group.basepoint().y)}},
                     {"genus", group.genus()},
                     {"relators", group.relators()}};
}

SurfaceGroup surface_from_json(const nlohmann::json& j) {
  try {
    std::vector<Isometry> gens;
    for (const auto& g : j.at("generators")) {
      gens.emplace_back(g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>(),
                        g.at(3).get<double>());
    }
    std::vector<HPoint> verts;
    for (const auto& v : j.at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    std::vector<int> side_gen;
    for (const auto& s : j.at("pairing")) side_gen.push_back(s.at("generator").get<int>());
    const auto& bp = j.at("basepoint");
    return SurfaceGroup(gens, j.at("names").get<std::vector<std::string>>(),
                        j.at("inverse").get<std::vector<int>>(), verts, side_gen,
                        {bp.at(0).get<double>(), bp.at(1).get<double>()}, j.at("genus").get<int>(),
                        j.at("relators").get<std::vector<Word>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("surface JSON: ") + e.what());
  }
}

}  // namespace mcshane
