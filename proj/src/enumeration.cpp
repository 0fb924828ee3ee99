#include "mcshane/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

#include "mcshane/orbit_index.hpp"
#include "mcshane/parallel.hpp"

namespace mcshane {

namespace {

// Through the half-plane: stays on the hyperboloid far from the basepoint,
// where normalising a Lorentz image loses every digit.
Vec3 orbit_point(const Isometry& h, const SurfaceGroup& group) {
  return to_hyperboloid(apply(h, group.basepoint()));
}

Vec3 image(const Isometry& h, Vec3 x) { return to_hyperboloid(apply(h, from_hyperboloid(x))); }

// Orbit distances in the half-plane, which keeps full relative precision
// where hyperboloid coordinates of far points cancel.
double orbit_distance(const Isometry& h, const Isometry& k, const SurfaceGroup& group) {
  return distance(apply(h, group.basepoint()), apply(k, group.basepoint()));
}

bool same_element(const Isometry& h, const Isometry& k, const SurfaceGroup& group) {
  return orbit_distance(h, k, group) < 1e-7;
}

// Elements h = W_i V U_j^-1 with W_i, U_j tiles along two paths and V in the
// vertex star: every h whose translate of the second path can meet the first
// passes through a tile of the first path that touches one of the second.
// Deduplicated by orbit point; h with d(p, h p) > reach cannot matter.
std::vector<Isometry> tile_pair_candidates(const SurfaceGroup& group, const std::vector<Isometry>& first,
                                           const std::vector<Isometry>& second, double reach) {
  std::vector<Isometry> out;
  OrbitIndex seen;
  const auto& star = group.vertex_star();
  for (const Isometry& w : first)
    for (const Isometry& v : star) {
      const Isometry wv = w * v;
      for (const Isometry& u : second) {
        const Isometry h = wv * u.inverse();
        if (orbit_distance(h, Isometry(), group) > reach) continue;
        if (seen.insert(orbit_point(h, group)).second) out.push_back(h);
      }
    }
  return out;
}

// Axis normal of a hyperbolic element from the antisymmetric part of its
// Lorentz matrix: L - L^-1 is proportional to X -> n x X.
Vec3 axis_normal(const Isometry& g) {
  const Mat3 l = lorentz(g), li = lorentz(g.inverse());
  std::array<double, 9> a{};
  for (int i = 0; i < 9; ++i) a[i] = l.m[i] - li.m[i];
  return normalize_spacelike(Vec3{-a[7], a[6], -a[3]});
}

enum class Meeting { Disjoint, Crossing, Collinear };

// The open segment [p, q] (line normal n) against its translate by h. Only
// transported normals are paired with p and q, so a far translate costs no
// precision.
Meeting meets_translate(Vec3 p, Vec3 q, Vec3 n, const Isometry& h) {
  const Vec3 back = lorentz(h.inverse()) * n;  // <h x, n> = <x, h^-1 n>
  const Vec3 fwd = lorentz(h) * n;
  const double a1 = mdot(p, back), b1 = mdot(q, back);
  const double a2 = mdot(p, fwd), b2 = mdot(q, fwd);
  const double eps = tol::kIntersection * std::max({1.0, p.t, q.t});
  if (std::abs(a1) <= eps && std::abs(b1) <= eps) return Meeting::Collinear;
  if (std::min({std::abs(a1), std::abs(b1), std::abs(a2), std::abs(b2)}) <= eps) return Meeting::Disjoint;
  return a1 * b1 < 0.0 && a2 * b2 < 0.0 ? Meeting::Crossing : Meeting::Disjoint;
}

}  // namespace

std::pair<double, double> AxisFrame::coordinates(Vec3 x) const {
  const double signed_dist = std::asinh(mdot(x, normal));
  const Vec3 proj = normalize_point(x + mdot(x, normal) * normal);
  return {std::asinh(-mdot(proj, direction)), signed_dist};
}

AxisFrame axis_frame(const Isometry& g, const SurfaceGroup& group) {
  if (g.kind() != IsometryKind::Hyperbolic) throw Error(ErrorCode::NotHyperbolic, "loop element is not hyperbolic");
  AxisFrame f;
  const Vec3 o = group.basepoint_h();
  Vec3 n = axis_normal(g);
  if (mdot(o, n) < 0.0) n = -1.0 * n;
  f.normal = n;
  f.tip_distance = std::asinh(mdot(o, n));
  f.foot = normalize_point(o + mdot(o, n) * n);
  const Vec3 moved = image(g, f.foot);
  f.direction = normalize_spacelike(moved - mdot(moved, f.foot) * f.foot);
  return f;
}

GeodesicLoop make_loop(const SurfaceGroup& group, const Word& word) {
  GeodesicLoop loop;
  loop.word = word;
  loop.matrix = group.word_matrix(word);
  loop.l_loop = orbit_distance(loop.matrix, Isometry(), group);
  loop.l_free = translation_length(loop.matrix);
  loop.loop_is_simple = is_simple_loop(loop, group);
  loop.loop_meets_free = loop_meets_free(loop, group);
  return loop;
}

bool is_simple_loop(const GeodesicLoop& loop, const SurfaceGroup& group) {
  const Vec3 p = group.basepoint_h();
  const Vec3 q = orbit_point(loop.matrix, group);
  const Vec3 n = normalize_spacelike(mcross(p, q));
  const Isometry& g = loop.matrix;
  const auto tiles = tiles_along(group, p, q);
  for (const Isometry& h : tile_pair_candidates(group, tiles, tiles, 2.0 * loop.l_loop + 1e-6)) {
    if (same_element(h, Isometry(), group)) continue;
    // Consecutive lifts share an endpoint.
    if (same_element(h, g, group) || same_element(h * g, Isometry(), group)) continue;
    switch (meets_translate(p, q, n, h)) {
      case Meeting::Crossing: return false;
      case Meeting::Collinear:
        // Translates along a common axis overlap only when shifted by less than their length.
        if (orbit_distance(h, Isometry(), group) < loop.l_loop - 1e-9) return false;
        break;
      case Meeting::Disjoint: {
        // The chord running through another lift of the marked point.
        const double to_start = orbit_distance(h, Isometry(), group), to_end = orbit_distance(h, g, group);
        if (std::abs(mdot(orbit_point(h, group), n)) <= 1e-9 * std::max(1.0, q.t) &&
            to_start < loop.l_loop && to_end < loop.l_loop)
          return false;
        break;
      }
    }
  }
  return true;
}

bool loop_meets_free(const GeodesicLoop& loop, const SurfaceGroup& group) {
  const Vec3 p = group.basepoint_h();
  const Vec3 q = orbit_point(loop.matrix, group);
  const AxisFrame f = axis_frame(loop.matrix, group);
  const Vec3 foot_next = image(loop.matrix, f.foot);
  const auto chord_tiles = tiles_along(group, p, q);
  const auto axis_tiles = tiles_along(group, f.foot, foot_next);
  const double reach = loop.l_loop + loop.l_free + f.tip_distance + 1e-6;
  for (const Isometry& h : tile_pair_candidates(group, chord_tiles, axis_tiles, reach)) {
    const Vec3 n = lorentz(h) * f.normal;
    // A lift through an endpoint of the chord touches the loop at the basepoint;
    // rounding in far translates decides its sign, so it never counts as a crossing.
    const double a = mdot(p, n), b = mdot(q, n);
    const double eps = 1e-9 * std::max(1.0, std::abs(n.t)) * std::max(1.0, q.t);
    if (std::abs(a) > eps && std::abs(b) > eps && a * b < 0.0) return true;
  }
  return false;
}

bool is_proper_power(const Isometry& g, const SurfaceGroup& group) {
  const double len = translation_length(g);
  // g = cosh(l/2) I + sinh(l/2) M with M^2 = I; its k-th root swaps l for l/k.
  const double sgn = g.trace() < 0.0 ? -1.0 : 1.0;
  const double ch = std::cosh(len / 2), sh = std::sinh(len / 2);
  const double ma = (sgn * g.a() - ch) / sh, mb = sgn * g.b() / sh, mc = sgn * g.c() / sh,
               md = (sgn * g.d() - ch) / sh;
  const Vec3 o = group.basepoint_h();
  for (int k = 2; k <= 64 && len / k > 1e-2; ++k) {
    const double c = std::cosh(len / (2 * k)), s = std::sinh(len / (2 * k));
    const Isometry root = Isometry(c + s * ma, s * mb, s * mc, c + s * md).renormalized();
    const HPoint image = apply(root, group.basepoint());
    const LocateResult loc = locate(image, group);
    if (hdistance(to_hyperboloid(loc.point), o) > 1e-6) continue;
    // deck * root fixes the basepoint; in a torsion-free group it is the identity.
    if (loc.deck.inverse().distance_to(root) < 1e-6 * std::max(1.0, std::abs(root.trace()))) return true;
  }
  return false;
}

Word chord_word(const Isometry& g, const SurfaceGroup& group) {
  const HPoint base = group.basepoint();
  for (int attempt = 0; attempt < 12; ++attempt) {
    // Perturb the start off any corner the chord might graze.
    const HPoint start = attempt == 0 ? base : point_along(base, 0.3 + 0.77 * attempt, 1e-6 * attempt);
    const Vec3 p = to_hyperboloid(start);
    const Vec3 q = to_hyperboloid(apply(g, start));
    const double len = hdistance(p, q);
    try {
      RayFolder folder(group, TangentRay{p, q - mdot(q, p) * p}.renormalized(), VertexPolicy::Throw);
      Word word;
      double travelled = 0.0;
      while (travelled < len) {
        const FoldedSegment seg = folder.next(len - travelled);
        travelled += seg.length;
        if (seg.exit_generator < 0) break;
        if (len - travelled < 1e-9) break;  // arrival at the translate of the start
        word.push_back(seg.exit_generator);
        if (word.size() > 100000) throw Error(ErrorCode::BudgetExceeded, "chord crosses too many tiles");
      }
      return word;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::VertexHit) throw;
    }
  }
  throw Error(ErrorCode::VertexHit, "chord runs through a vertex for every perturbation");
}

Word canonical_word(const Isometry& g, const SurfaceGroup& group) {
  return std::min(chord_word(g, group), chord_word(g.inverse(), group));
}

std::vector<GeodesicLoop> enumerate_loops(const SurfaceGroup& group, double length_bound,
                                          const EnumerationOptions& options) {
  if (!(length_bound > 0.0) || !std::isfinite(length_bound)) {
    throw Error(ErrorCode::InvalidParameters, "length bound must be positive");
  }
  const double prune = length_bound + group.diameter();
  const Vec3 o = group.basepoint_h();
  struct Node {
    Isometry element;
    Word word;
  };
  std::vector<Node> found;
  OrbitIndex seen;
  seen.insert(o);
  std::deque<Node> queue{{Isometry(), {}}};
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    for (int gen = 0; gen < group.generator_count(); ++gen) {
      Isometry next = node.element * group.generators()[gen];
      const Vec3 x = orbit_point(next, group);
      const double d = hdistance(o, x);
      if (d > prune) continue;
      if (!seen.insert(x).second) continue;
      if (seen.size() > options.max_candidates) {
        throw Error(ErrorCode::BudgetExceeded, "orbit enumeration exceeded " +
                                                   std::to_string(options.max_candidates) + " points");
      }
      Word word = node.word;
      word.push_back(gen);
      if (d <= length_bound) found.push_back({next, word});
      queue.push_back({std::move(next), std::move(word)});
    }
  }
  std::vector<GeodesicLoop> loops(found.size());
  parallel_for(found.size(), options.threads, [&](std::size_t i) {
    loops[i] = make_loop(group, found[i].word);
    loops[i].matrix = found[i].element;
  });
  std::sort(loops.begin(), loops.end(), [](const GeodesicLoop& a, const GeodesicLoop& b) {
    if (a.l_loop != b.l_loop) return a.l_loop < b.l_loop;
    return a.word < b.word;
  });
  return loops;
}

std::vector<Isometry> strip_interior_points(const GeodesicLoop& loop, const SurfaceGroup& group) {
  const AxisFrame f = axis_frame(loop.matrix, group);
  const Vec3 p = group.basepoint_h();
  const Vec3 q = orbit_point(loop.matrix, group);
  const Vec3 foot_next = image(loop.matrix, f.foot);
  const double period = loop.l_free;
  Vec3 chord = normalize_spacelike(mcross(p, q));
  if (mdot(f.foot, chord) < 0.0) chord = -1.0 * chord;

  const double eps = 1e-9;
  auto inside = [&](Vec3 x) {
    const auto [offset, dist] = f.coordinates(x);
    return dist > -eps && mdot(x, chord) > eps && offset > -eps && offset < period - eps;
  };
  auto near_region = [&](Vec3 x) {
    if (inside(x)) return true;
    const double r = group.circumradius() + 1e-6;
    return distance_to_segment(x, p, q) <= r || distance_to_segment(x, f.foot, p) <= r ||
           distance_to_segment(x, q, foot_next) <= r || distance_to_segment(x, f.foot, foot_next) <= r;
  };

  std::vector<Isometry> out;
  OrbitIndex seen;
  seen.insert(p);
  std::deque<Isometry> queue{Isometry()};
  while (!queue.empty()) {
    const Isometry h = queue.front();
    queue.pop_front();
    for (int gen = 0; gen < group.generator_count(); ++gen) {
      const Isometry next = h * group.generators()[gen];
      const Vec3 x = orbit_point(next, group);
      if (!near_region(x)) continue;
      if (!seen.insert(x).second) continue;
      if (seen.size() > 1'000'000) throw Error(ErrorCode::BudgetExceeded, "strip search too large");
      queue.push_back(next);
      if (inside(x) && hdistance(x, q) > 1e-7) out.push_back(next);
    }
  }
  return out;
}

int cuff_intersection(const Isometry& h, const Isometry& g, const SurfaceGroup& group) {
  const Vec3 p = group.basepoint_h();
  const Vec3 q = orbit_point(h, group);
  const AxisFrame f = axis_frame(g, group);
  const Vec3 foot_next = image(g, f.foot);
  std::vector<Vec3> lifts;
  int total = 0;
  const double reach = hdistance(p, q) + translation_length(g) + f.tip_distance + 1e-6;
  for (const Isometry& c : tile_pair_candidates(group, tiles_along(group, p, q),
                                                tiles_along(group, f.foot, foot_next), reach)) {
    const Vec3 n = lorentz(c) * f.normal;
    const bool dup = std::any_of(lifts.begin(), lifts.end(), [&](Vec3 m) {
      const double scale = std::max({1.0, std::abs(m.t), std::abs(m.x), std::abs(m.y)});
      return std::abs(m.t - n.t) + std::abs(m.x - n.x) + std::abs(m.y - n.y) < 1e-7 * scale;
    });
    if (dup) continue;
    lifts.push_back(n);
    if (segment_crosses_line(p, q, n)) total += mdot(p, n) < 0.0 ? 1 : -1;
  }
  return total;
}

std::pair<int, int> perpendicular_wraps(const GeodesicLoop& loop, const Isometry& interior,
                                        const SurfaceGroup& group) {
  const AxisFrame f = axis_frame(loop.matrix, group);
  const Vec3 p = group.basepoint_h();
  const auto tiles = tiles_along(group, p, f.foot);
  int crossings = 0;
  const Vec3 n = normalize_spacelike(mcross(p, f.foot));
  for (const Isometry& h : tile_pair_candidates(group, tiles, tiles, 2.0 * f.tip_distance + 1e-6)) {
    if (same_element(h, Isometry(), group)) continue;
    if (meets_translate(p, f.foot, n, h) == Meeting::Crossing) ++crossings;
  }
  // Direction in which the perpendicular leaves the interior preimage.
  const Vec3 start = image(interior, p), end = image(interior, f.foot);
  const TangentRay ray{start, end - mdot(end, start) * start};
  const Vec3 ahead = ray.renormalized().at(1e-4);
  const double sign = f.coordinates(ahead).first - f.coordinates(start).first;
  return {crossings, sign >= 0.0 ? 1 : -1};
}

ExtractedParams extract_params(const GeodesicLoop& loop, const SurfaceGroup& group) {
  const auto interior = strip_interior_points(loop, group);
  if (interior.empty()) {
    throw Error(ErrorCode::InvalidParameters, "no interior preimage of the marked point");
  }
  if (interior.size() > 1) {
    throw Error(ErrorCode::DegenerateConfiguration,
                std::to_string(interior.size()) + " interior preimages of the marked point");
  }
  const AxisFrame f = axis_frame(loop.matrix, group);
  const auto [offset, dist] = f.coordinates(orbit_point(interior.front(), group));
  ExtractedParams out;
  out.delta = dist;
  out.tau = std::clamp(offset, 0.0, std::nextafter(loop.l_free, 0.0));
  if (out.delta < 1e-9) throw Error(ErrorCode::DegeneratePosition, "interior preimage lies on the cuff");
  const auto [crossings, sign] = perpendicular_wraps(loop, interior.front(), group);
  out.n = sign * crossings / 2;
  return out;
}

HalfPantsRecord classify(const GeodesicLoop& loop, const SurfaceGroup& group, RatioOrientation orient) {
  if (!loop.loop_is_simple && loop.loop_meets_free) {
    throw Error(ErrorCode::NotLassoInducible, "loop is not simple and meets its free geodesic");
  }
  if (is_proper_power(loop.matrix, group)) throw Error(ErrorCode::NotPrimitive, "loop is a proper power");
  HalfPantsRecord rec;
  const Word forward = chord_word(loop.matrix, group);
  const Word backward = chord_word(loop.matrix.inverse(), group);
  GeodesicLoop rep = loop;
  if (backward < forward) rep.matrix = loop.matrix.inverse();
  rec.canonical = std::min(forward, backward);
  rec.canonical_word = group.word_string(rec.canonical);
  rec.params.l_cuff = loop.l_free;
  rec.params.l_loop = loop.l_loop;
  if (axis_frame(rep.matrix, group).tip_distance < 1e-9) {
    throw Error(ErrorCode::DegeneratePosition, "marked point lies on the free geodesic");
  }
  if (loop.loop_is_simple && !loop.loop_meets_free) {
    rec.params.topo_type = TopoType::Embedded;
  } else {
    rec.params.topo_type = loop.loop_is_simple ? TopoType::OneHoledTorus : TopoType::ThriceHoled;
    const ExtractedParams e = extract_params(rep, group);
    rec.params.tau = e.tau;
    rec.params.delta = e.delta;
    rec.params.n = e.n;
  }
  rec.gap = gap(rec.params, orient);
  return rec;
}

std::vector<HalfPantsRecord> enumerate_half_pants(const SurfaceGroup& group, double length_bound,
                                                  const EnumerationOptions& options,
                                                  std::vector<ExcludedLoop>* excluded) {
  const auto loops = enumerate_loops(group, length_bound, options);
  // One record per pair {g, g^-1}: keep the representative whose word sorts first.
  std::vector<std::size_t> picked;
  {
    OrbitIndex reps;
    for (std::size_t i = 0; i < loops.size(); ++i) {
      const Vec3 x = orbit_point(loops[i].matrix, group);
      const Vec3 xi = orbit_point(loops[i].matrix.inverse(), group);
      if (reps.find(xi) >= 0) continue;
      reps.insert(x);
      picked.push_back(i);
    }
  }
  std::vector<std::optional<HalfPantsRecord>> slots(picked.size());
  std::vector<std::string> reasons(picked.size());
  parallel_for(picked.size(), options.threads, [&](std::size_t k) {
    const GeodesicLoop& loop = loops[picked[k]];
    try {
      slots[k] = classify(loop, group);
    } catch (const Error& e) {
      reasons[k] = e.what();
    }
  });
  std::vector<HalfPantsRecord> out;
  for (std::size_t k = 0; k < picked.size(); ++k) {
    if (slots[k]) {
      out.push_back(std::move(*slots[k]));
    } else if (excluded) {
      const GeodesicLoop& loop = loops[picked[k]];
      excluded->push_back({group.word_string(loop.word), loop.l_loop, reasons[k]});
    }
  }
  std::sort(out.begin(), out.end(), [](const HalfPantsRecord& a, const HalfPantsRecord& b) {
    if (a.gap.gap.value != b.gap.gap.value) return a.gap.gap.value > b.gap.gap.value;
    return a.canonical_word < b.canonical_word;
  });
  return out;
}

std::string half_pants_csv(const std::vector<HalfPantsRecord>& records) {
  std::ostringstream os;
  os << "canonical_word,topo_type,l_cuff,l_loop,tau,delta,n,gap\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    os << r.canonical_word << ',' << to_string(r.params.topo_type) << ',' << num(r.params.l_cuff) << ','
       << num(r.params.l_loop) << ',' << num(r.params.tau) << ',' << num(r.params.delta) << ','
       << r.params.n << ',' << num(r.gap.gap.value) << '\n';
  }
  return os.str();
}

}  // namespace mcshane
