#pragma once

// Gap-angle formulas for lasso-induced half-pants, plus the cone-point
// summands they reduce to.

#include <string>
#include <vector>

#include "mcshane/hyperbolic.hpp"

namespace mcshane {

enum class TopoType { Embedded, ThriceHoled, OneHoledTorus };

const char* to_string(TopoType t);

struct HalfPantsParams {
  TopoType topo_type = TopoType::Embedded;
  double l_cuff = 0.0;  // length of the free geodesic (cuff)
  double l_loop = 0.0;  // length of the based geodesic loop (zipper)
  double tau = 0.0;
  double delta = 0.0;
  int n = 0;
};

struct GapTerm {
  std::string label;
  double value = 0.0;
};

struct GapBreakdown {
  Angle gap;
  std::vector<GapTerm> terms;

  /// Value of a recorded term; throws Domain if absent.
  double term(const std::string& label) const;
};

/// Which ratio feeds the arccosh giving the tip-to-cuff distance z.
/// Reciprocal: z = arccosh(sinh(l_loop/2) / sinh(l_cuff/2)), the distance from
/// the zipper tip to the cuff axis. AsPrinted uses the inverted ratio, which
/// is below 1 for every half-pants and so always raises InvalidParameters.
enum class RatioOrientation { Reciprocal, AsPrinted };

Angle spiral_angle(double l_cuff, double l_zip);
GapBreakdown gap_embedded(double l_cuff, double l_loop);
GapBreakdown gap_three_holed_n0(const HalfPantsParams& p,
                                RatioOrientation orient = RatioOrientation::Reciprocal);
GapBreakdown gap_three_holed_nonzero(const HalfPantsParams& p,
                                     RatioOrientation orient = RatioOrientation::Reciprocal);
double psi(double l_cuff, double l_loop, double delta);

/// Offset along the cuff axis beyond which a lift of the overlap triangle is
/// first cut by the boundary spiral. Geometric: log(tanh z / tanh delta), where
/// the spiral from the zipper tip reaches distance delta from the axis.
/// AsPrinted: psi(l_cuff, l_loop, delta).
enum class SpiralThreshold { Geometric, AsPrinted };

double spiral_threshold(double z, double delta);

GapBreakdown gap_one_holed_torus(const HalfPantsParams& p,
                                 RatioOrientation orient = RatioOrientation::Reciprocal,
                                 SpiralThreshold threshold = SpiralThreshold::Geometric);
GapBreakdown gap(const HalfPantsParams& p, RatioOrientation orient = RatioOrientation::Reciprocal);

/// Distance from the zipper tip to the cuff axis.
double tip_distance(double l_cuff, double l_loop, RatioOrientation orient = RatioOrientation::Reciprocal);

/// Zipper length of the pants with boundary lengths l1, l2 (0 = cusp) and a
/// cone point of angle theta_p.
double zipper_length(double l1, double l2, double theta_p);
/// The same length read off explicit holonomy: A and B with traces
/// 2cosh(l1/2) and 2cosh(l2/2) (parabolic for 0) and AB elliptic of angle
/// theta_p; the zipper is the chord from the fixed point of AB to its A-image.
double zipper_length_constructed(double l1, double l2, double theta_p);

Angle twz_interior_summand(double l1, double l2, double theta_p);
/// The same summand as the difference of the two half-pants arcsines,
/// routed through zipper_length.
double twz_interior_via_zipper(double l1, double l2, double theta_p);
/// Exterior summand, arctan form.
Angle twz_exterior_summand(double l1, double l2, double theta_p);
/// Exterior summand, arcsin form through zipper_length.
double twz_exterior_via_zipper(double l1, double l2, double theta_p);

/// Extended-precision (113-bit) re-evaluations used as oracles.
namespace extended {
double theta(double x, double y, double z);
double psi(double l_cuff, double l_loop, double delta);
double spiral_angle(double l_cuff, double l_zip);
/// Gap value with every kernel evaluated in 113-bit arithmetic.
double gap(const HalfPantsParams& p);
}  // namespace extended

}  // namespace mcshane
