#include "mcshane/halfpants.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace mcshane {

using Quad = boost::multiprecision::cpp_bin_float_quad;

const char* to_string(TopoType t) {
  switch (t) {
    case TopoType::Embedded: return "embedded";
    case TopoType::ThriceHoled: return "thrice-holed";
    case TopoType::OneHoledTorus: return "one-holed-torus";
  }
  return "unknown";
}

double GapBreakdown::term(const std::string& label) const {
  for (const auto& t : terms)
    if (t.label == label) return t.value;
  throw Error(ErrorCode::Domain, "no gap term '" + label + "'");
}

namespace {

template <typename Real>
Real spiral_kernel(const Real& l_cuff, const Real& l_zip) {
  using std::asin;
  using std::cosh;
  using std::sinh;
  const Real half_c = l_cuff / 2, half_z = l_zip / 2;
  return asin(cosh(half_c) / cosh(half_z)) - asin(sinh(half_c) / sinh(half_z));
}

template <typename Real>
Real psi_argument(const Real& l_cuff, const Real& l_loop, const Real& delta) {
  using std::cosh;
  using std::sinh;
  const Real c = cosh(delta);
  const Real s1 = sinh(l_cuff / 2), s2 = sinh(l_loop / 2);
  return c * c / (s1 * s1) - c * c / (s2 * s2);
}

void check_lengths(double l_cuff, double l_loop) {
  if (!(l_cuff > 0.0) || !(l_loop > l_cuff) || !std::isfinite(l_loop)) {
    throw Error(ErrorCode::InvalidHalfPants, "need 0 < cuff length < loop length");
  }
}

// sinh(l_cuff/2) / sinh(l_loop/2): sine of the angle between the perpendicular
// from the zipper tip and the boundary of the spiral region.
double sinh_ratio(double l_cuff, double l_loop) {
  return std::sinh(l_cuff / 2) / std::sinh(l_loop / 2);
}

// Theta with domain failures reported as invalid parameters.
double theta_checked(double x, double y, double z, const char* what) {
  try {
    return theta(x, y, z).value;
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidParameters, std::string(what) + ": " + e.what());
  }
}

GapBreakdown finish(double raw, std::vector<GapTerm> terms) {
  GapBreakdown out;
  terms.push_back({"raw", raw});
  if (raw < 0.0) terms.push_back({"clamped", 1.0});
  out.gap = Angle{std::clamp(raw, 0.0, kPi)};
  out.terms = std::move(terms);
  return out;
}

void check_params(const HalfPantsParams& p) {
  check_lengths(p.l_cuff, p.l_loop);
  if (!(p.delta >= 0.0) || !(p.tau >= 0.0) || !(p.tau < p.l_cuff) || !std::isfinite(p.delta)) {
    throw Error(ErrorCode::InvalidParameters, "need tau in [0, l_cuff) and delta >= 0");
  }
}

}  // namespace

double tip_distance(double l_cuff, double l_loop, RatioOrientation orient) {
  check_lengths(l_cuff, l_loop);
  const double r = sinh_ratio(l_cuff, l_loop);
  const double arg = orient == RatioOrientation::Reciprocal ? 1.0 / r : r;
  if (!(arg >= 1.0)) {
    throw Error(ErrorCode::InvalidParameters, "arccosh argument below 1: " + std::to_string(arg));
  }
  return std::acosh(arg);
}

Angle spiral_angle(double l_cuff, double l_zip) {
  check_lengths(l_cuff, l_zip);
  return {spiral_kernel(l_cuff, l_zip)};
}

GapBreakdown gap_embedded(double l_cuff, double l_loop) {
  check_lengths(l_cuff, l_loop);
  const double t1 = std::asin(std::cosh(l_cuff / 2) / std::cosh(l_loop / 2));
  const double t2 = std::asin(sinh_ratio(l_cuff, l_loop));
  return finish(2.0 * spiral_angle(l_cuff, l_loop).value, {{"asin_cosh", t1}, {"asin_sinh", t2}});
}

GapBreakdown gap_three_holed_n0(const HalfPantsParams& p, RatioOrientation orient) {
  if (p.topo_type != TopoType::ThriceHoled || p.n != 0) {
    throw Error(ErrorCode::InvalidParameters, "expected a thrice-holed half-pants with n = 0");
  }
  check_params(p);
  const double z = tip_distance(p.l_cuff, p.l_loop, orient);
  const double a = std::asin(sinh_ratio(p.l_cuff, p.l_loop));
  const double t1 = theta_checked(p.delta, p.tau, z, "theta(delta, tau, z)");
  const double t2 = theta_checked(p.delta, p.l_cuff - p.tau, z, "theta(delta, l - tau, z)");
  const double b1 = std::max(t1 - a, 0.0), b2 = std::max(t2 - a, 0.0);
  return finish(b1 + b2, {{"z", z}, {"asin_sinh", a}, {"theta_tau", t1}, {"theta_rest", t2},
                          {"branch_tau", b1}, {"branch_rest", b2}});
}

GapBreakdown gap_three_holed_nonzero(const HalfPantsParams& p, RatioOrientation orient) {
  if (p.topo_type != TopoType::ThriceHoled || p.n == 0) {
    throw Error(ErrorCode::InvalidParameters, "expected a thrice-holed half-pants with n != 0");
  }
  check_params(p);
  const double z = tip_distance(p.l_cuff, p.l_loop, orient);
  const double a = std::asin(sinh_ratio(p.l_cuff, p.l_loop));
  // Axis distance from the interior preimage to the zipper-tip lift that beta
  // reaches after |n| wraps. For n < 0 this is |n l - tau|; for n > 0 tau is
  // measured the other way round the cuff, which keeps the gap invariant
  // under (n, tau) -> (-n, l - tau).
  const double y = p.n < 0 ? p.tau - p.n * p.l_cuff : (p.n + 1) * p.l_cuff - p.tau;
  const double outer = theta_checked(p.delta, y, z, "theta(delta, |n l - tau|, z)");
  const double y_inner = y - p.l_cuff;
  std::vector<GapTerm> terms{{"z", z}, {"asin_sinh", a}, {"theta_outer", outer}};
  double inner = a;
  if (y_inner < 0.0) {
    // No adjacent triangle lift on this side: the branch is vacuous.
    terms.push_back({"inner_vacuous", 1.0});
    terms.push_back({"theta_inner_abs", theta_checked(p.delta, -y_inner, z, "theta inner")});
  } else {
    const double t = theta_checked(p.delta, y_inner, z, "theta(delta, |n l - tau| - l, z)");
    terms.push_back({"theta_inner", t});
    inner = std::max(a, t);
  }
  terms.push_back({"inner", inner});
  return finish(outer - inner, std::move(terms));
}

double psi(double l_cuff, double l_loop, double delta) {
  const double arg = psi_argument(l_cuff, l_loop, delta);
  if (!(arg > 0.0) || !std::isfinite(arg)) {
    throw Error(ErrorCode::InvalidParameters, "psi: log argument not positive");
  }
  return 0.5 * std::log(arg);
}

double spiral_threshold(double z, double delta) {
  if (!(z > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::InvalidParameters, "spiral threshold needs z > 0 and delta > 0");
  }
  return std::log(std::tanh(z) / std::tanh(delta));
}

GapBreakdown gap_one_holed_torus(const HalfPantsParams& p, RatioOrientation orient,
                                 SpiralThreshold threshold) {
  if (p.topo_type != TopoType::OneHoledTorus) {
    throw Error(ErrorCode::InvalidParameters, "expected a one-holed-torus half-pants");
  }
  check_params(p);
  const double l = p.l_cuff;
  const double z = tip_distance(l, p.l_loop, orient);
  const double s = threshold == SpiralThreshold::Geometric ? spiral_threshold(z, p.delta)
                                                          : psi(l, p.l_loop, p.delta);
  const double k1 = std::ceil((s - p.tau) / l) + 0.0;
  const double k2 = std::ceil((s - (l - p.tau)) / l) + 0.0;
  const double lead = 2.0 * std::asin(std::cosh(l / 2) / std::cosh(p.l_loop / 2));
  // Theta is even in its second argument; a negative shift is the same lift
  // seen from the other side of the foot.
  const double t1 = theta_checked(p.delta, std::abs(l * k1 + p.tau), z, "theta first spiral");
  const double t2 = theta_checked(p.delta, std::abs(l * k2 + l - p.tau), z, "theta second spiral");
  return finish(lead - t1 - t2, {{"z", z}, {"threshold", s}, {"index_tau", k1}, {"index_rest", k2},
                                 {"lead", lead}, {"theta_tau", t1}, {"theta_rest", t2}});
}

GapBreakdown gap(const HalfPantsParams& p, RatioOrientation orient) {
  switch (p.topo_type) {
    case TopoType::Embedded: return gap_embedded(p.l_cuff, p.l_loop);
    case TopoType::ThriceHoled:
      return p.n == 0 ? gap_three_holed_n0(p, orient) : gap_three_holed_nonzero(p, orient);
    case TopoType::OneHoledTorus: return gap_one_holed_torus(p, orient);
  }
  throw Error(ErrorCode::InvalidParameters, "unknown topological type");
}

// ---------------------------------------------------------------------------
// Cone-point pants

double zipper_length(double l1, double l2, double theta_p) {
  if (!(l1 >= 0.0) || !(l2 >= 0.0) || !(theta_p > 0.0) || !(theta_p < kTwoPi)) {
    throw Error(ErrorCode::InvalidPants, "need l1, l2 >= 0 and 0 < theta_p < 2pi");
  }
  const double c1 = std::cosh(l1 / 2), c2 = std::cosh(l2 / 2);
  const double s = std::sin(theta_p / 2);
  const double sq = (c1 * c1 + c2 * c2 + 2.0 * std::cos(theta_p / 2) * c1 * c2) / (s * s);
  if (!(sq >= 1.0)) throw Error(ErrorCode::InvalidPants, "cosh^2 of half zipper below 1");
  return 2.0 * std::acosh(std::sqrt(sq));
}

double zipper_length_constructed(double l1, double l2, double theta_p) {
  if (!(l1 >= 0.0) || !(l2 >= 0.0) || !(theta_p > 0.0) || !(theta_p < kTwoPi)) {
    throw Error(ErrorCode::InvalidPants, "need l1, l2 >= 0 and 0 < theta_p < 2pi");
  }
  const double t2 = 2.0 * std::cosh(l2 / 2), tc = -2.0 * std::cos(theta_p / 2);
  Isometry a_mat, b_mat;
  if (l1 > 0.0) {
    const double e = std::exp(l1 / 2);
    const double a = (tc - t2 / e) / (e - 1.0 / e), d = t2 - a;
    a_mat = Isometry(e, 0.0, 0.0, 1.0 / e);
    b_mat = Isometry(a, 1.0, a * d - 1.0, d);
  } else {
    const double a = t2 / 2, c = tc - t2;
    a_mat = Isometry(1.0, 1.0, 0.0, 1.0);
    b_mat = Isometry(a, (a * a - 1.0) / c, c, a);
  }
  const Isometry rot = a_mat * b_mat;
  const double tr = rot.trace();
  if (!(std::abs(tr) < 2.0) || rot.c() == 0.0) {
    throw Error(ErrorCode::InvalidPants, "holonomy of the cone point is not elliptic");
  }
  // sqrt(4 - tr^2) cancels badly for small angles; the trace is
  // -2cos(theta_p/2) by construction, so use 2sin(theta_p/2).
  const HPoint fixed{(rot.a() - rot.d()) / (2.0 * rot.c()), std::sin(theta_p / 2) / std::abs(rot.c())};
  return distance(fixed, apply(a_mat, fixed));
}

namespace {

void check_cone(double l1, double l2, double theta_p) {
  if (!(l1 >= 0.0) || !(l2 >= 0.0) || !(theta_p > 0.0) || !(theta_p <= kPi)) {
    throw Error(ErrorCode::InvalidPants, "need l1, l2 >= 0 and 0 < theta_p <= pi");
  }
}

double half_pants_pair(double lc, double lz) {
  return std::asin(std::cosh(lc / 2) / std::cosh(lz / 2)) -
         std::asin(std::sinh(lc / 2) / std::sinh(lz / 2));
}

}  // namespace

Angle twz_interior_summand(double l1, double l2, double theta_p) {
  check_cone(l1, l2, theta_p);
  const double h = theta_p / 2;
  return {2.0 * std::atan(std::sin(h) / (std::cos(h) + std::exp((l1 + l2) / 2)))};
}

double twz_interior_via_zipper(double l1, double l2, double theta_p) {
  check_cone(l1, l2, theta_p);
  const double lz = zipper_length(l1, l2, theta_p);
  return half_pants_pair(l1, lz) + half_pants_pair(l2, lz);
}

Angle twz_exterior_summand(double l1, double l2, double theta_p) {
  check_cone(l1, l2, theta_p);
  const double h = theta_p / 2;
  const double num = std::sin(h) * std::sinh(l1 / 2);
  const double den = std::cos(h) * std::cosh(l1 / 2) + std::cosh(l2 / 2);
  return {h - std::atan(num / den)};
}

double twz_exterior_via_zipper(double l1, double l2, double theta_p) {
  check_cone(l1, l2, theta_p);
  const double lz = zipper_length(l1, l2, theta_p);
  return half_pants_pair(l1, lz) + std::asin(std::cosh(l2 / 2) / std::cosh(lz / 2));
}

namespace {

template <typename Real>
Real gap_kernel(const HalfPantsParams& p) {
  using std::abs;
  using std::acosh;
  using std::asin;
  using std::ceil;
  using std::cosh;
  using std::log;
  using std::sinh;
  using std::tanh;
  const Real l = p.l_cuff, lp = p.l_loop, tau = p.tau, d = p.delta;
  if (p.topo_type == TopoType::Embedded) return Real(2) * spiral_kernel<Real>(l, lp);
  const Real ratio = sinh(l / 2) / sinh(lp / 2);
  const Real z = acosh(Real(1) / ratio);
  const Real a = asin(ratio);
  auto th = [&](const Real& y) { return theta_kernel<Real>(d, abs(y), z); };
  if (p.topo_type == TopoType::ThriceHoled && p.n == 0) {
    return std::max(th(tau) - a, Real(0)) + std::max(th(l - tau) - a, Real(0));
  }
  if (p.topo_type == TopoType::ThriceHoled) {
    const Real y = p.n < 0 ? tau - p.n * l : (p.n + 1) * l - tau;
    const Real inner = y - l < 0 ? a : std::max(a, th(y - l));
    return th(y) - inner;
  }
  const Real s = log(tanh(z) / tanh(d));
  const Real k1 = ceil((s - tau) / l), k2 = ceil((s - (l - tau)) / l);
  const Real lead = Real(2) * asin(cosh(l / 2) / cosh(lp / 2));
  return lead - th(l * k1 + tau) - th(l * k2 + l - tau);
}

}  // namespace

namespace extended {

double gap(const HalfPantsParams& p) {
  // Same validation as the double path; only the arithmetic differs.
  mcshane::gap(p);
  const double raw = static_cast<double>(gap_kernel<Quad>(p));
  return std::clamp(raw, 0.0, kPi);
}

double theta(double x, double y, double z) { return static_cast<double>(theta_kernel<Quad>(x, y, z)); }

double psi(double l_cuff, double l_loop, double delta) {
  const Quad arg = psi_argument<Quad>(l_cuff, l_loop, delta);
  if (!(arg > 0)) throw Error(ErrorCode::InvalidParameters, "psi: log argument not positive");
  return static_cast<double>(log(arg) / 2);
}

double spiral_angle(double l_cuff, double l_zip) {
  return static_cast<double>(spiral_kernel<Quad>(l_cuff, l_zip));
}

}  // namespace extended

}  // namespace mcshane
