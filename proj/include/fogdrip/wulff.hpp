#pragma once

#include <vector>

#include "fogdrip/tension.hpp"

namespace fogdrip {

struct Vec2 {
  double x = 0;
  double y = 0;
};

/// Counter-clockwise convex polygon.
using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p);
/// Sum over edges of |e| * tau(outward normal of e).
double polygon_tension_cost(const Polygon& p, const SurfaceTension& tau);

struct WulffShape {
  SurfaceTension tension = SurfaceTension::isotropic(1.0);
  Polygon polygon;          ///< unit area, centred at the origin
  double cost_unit = 0;     ///< tau-weighted perimeter of the unit-area shape
  double width = 0;
  double height = 0;
  double bounding_side = 0; ///< side of the smallest enclosing axis-parallel square
  double s1 = 0;            ///< 1 / bounding_side^2: largest scaled area that fits the unit square
  int directions = 0;       ///< direction count of the final construction
  bool refined = true;      ///< false when doubling hit the direction cap first
};

struct WulffOptions {
  int directions = 720;
  bool refine = true;
  double refine_tolerance = 1e-6;  ///< relative change in the unit cost that ends doubling
  int max_directions = 92160;
};

/// Intersection of the half-planes x.n <= tau(n) over a uniform direction grid,
/// rescaled to unit area. Throws DomainError when tau <= 0 somewhere.
WulffShape wulff_construct(const SurfaceTension& tension, const WulffOptions& options = {});

/// sqrt(S) times the unit cost.
double wulff_cost(const WulffShape& shape, double S);

/// The square [0, 1-r]^2 with corners rounded by r times the Wulff shape
/// normalised to fit the unit square. r = 0 is the unit square itself, r = 1
/// the normalised Wulff shape touching all four sides.
struct PlaquetteSolution {
  double r = 0;
  double area = 1;
  double cost = 0;
  Polygon loop;  ///< inside [0, 1]^2
};

PlaquetteSolution plaquette(const WulffShape& shape, double r);
/// Area and cost without building the polygon.
double plaquette_area(const WulffShape& shape, double r);
double plaquette_cost(const WulffShape& shape, double r);
/// Corner scale with plaquette_area(r) = S for S in [S1, 1], by bisection.
double plaquette_radius(const WulffShape& shape, double S);

enum class RestrictedRegime {
  kWulff,              ///< one scaled Wulff shape
  kPlaquette,          ///< one plaquette
  kPlaquetteAndWulff,  ///< full square layer plus a second Wulff-shaped layer
  kTwoPlaquettes,      ///< two identical plaquettes of area S/2
};

const char* to_string(RestrictedRegime regime);

struct RestrictedSolution {
  int k = 1;
  RestrictedRegime regime = RestrictedRegime::kWulff;
  double value = 0;
  double r = 0;              ///< corner scale shared by the loops (0 for a pure Wulff shape)
  std::vector<double> areas; ///< enclosed area of each loop
};

/// Minimal tau-cost of at most two nested loops in the unit square enclosing
/// total area S, for 0 <= S < 2. Throws DomainError outside that range.
RestrictedSolution restricted_wulff(const WulffShape& shape, double S);
/// Loops of a restricted solution, placed in the unit square.
std::vector<Polygon> restricted_loops(const WulffShape& shape, const RestrictedSolution& solution);

struct SingularityFit {
  double below = 0;  ///< exponent of |w(S) - w(1)| against 1 - S
  double above = 0;  ///< same for S - 1
  double small_s = 0;  ///< exponent of w(S) against S near 0
};

/// Least-squares log-log fits on |S - 1| in [lo, hi]. Throws DomainError when
/// S1 is 1 (no corners to round, so the problem has no singularity at S = 1).
SingularityFit singularity_exponents(const WulffShape& shape, double lo = 1e-4, double hi = 1e-2);

}  // namespace fogdrip
