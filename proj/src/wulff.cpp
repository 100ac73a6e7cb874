#include "fogdrip/wulff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fogdrip/errors.hpp"

namespace fogdrip {

namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

struct DualPoint {
  Vec2 p;
  int index;
};

// Andrew's monotone chain; returns the hull counter-clockwise with collinear
// points removed.
std::vector<DualPoint> convex_hull(std::vector<DualPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const DualPoint& a, const DualPoint& b) {
    return a.p.x < b.p.x || (a.p.x == b.p.x && a.p.y < b.p.y);
  });
  double scale = 0;
  for (const auto& d : pts) scale = std::max({scale, std::abs(d.p.x), std::abs(d.p.y)});
  const double eps = 1e-13 * scale * scale;
  std::vector<DualPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2].p, hull[k - 1].p, pts[i].p) <= eps) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2].p, hull[k - 1].p, pts[i].p) <= eps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

struct Construction {
  Polygon polygon;  // unit area
  double cost = 0;
};

Construction construct_once(const SurfaceTension& tau, int m) {
  std::vector<DualPoint> pts(static_cast<std::size_t>(m));
  std::vector<Vec2> normal(pts.size());
  std::vector<double> value(pts.size());
  for (int i = 0; i < m; ++i) {
    const double th = 2 * std::numbers::pi * i / m;
    normal[i] = {std::cos(th), std::sin(th)};
    value[i] = tau(normal[i].x, normal[i].y);
    if (!(value[i] > 0) || !std::isfinite(value[i]))
      throw DomainError("surface tension must be positive and finite in every direction");
    pts[i] = {{normal[i].x / value[i], normal[i].y / value[i]}, i};
  }
  auto hull = convex_hull(std::move(pts));
  if (hull.size() < 3) throw DomainError("degenerate surface tension");
  std::sort(hull.begin(), hull.end(), [](const DualPoint& a, const DualPoint& b) { return a.index < b.index; });

  // Each active direction contributes one edge; neighbouring lines meet at a vertex.
  Polygon poly;
  poly.reserve(hull.size());
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const int i = hull[k].index, j = hull[(k + 1) % hull.size()].index;
    const Vec2 a = normal[i], b = normal[j];
    const double det = a.x * b.y - a.y * b.x;
    poly.push_back({(value[i] * b.y - value[j] * a.y) / det, (a.x * value[j] - b.x * value[i]) / det});
  }
  const double s = 1 / std::sqrt(polygon_area(poly));
  for (auto& v : poly) {
    v.x *= s;
    v.y *= s;
  }
  Construction out;
  out.polygon = std::move(poly);
  out.cost = polygon_tension_cost(out.polygon, tau);
  return out;
}

double side_cost(const SurfaceTension& tau) {
  return tau(1, 0) + tau(-1, 0) + tau(0, 1) + tau(0, -1);
}

// Bisection for f(r) = target on [0, 1], f decreasing or increasing.
template <class F>
double solve_monotone(F f, double target) {
  double lo = 0, hi = 1;
  const bool increasing = f(1.0) > f(0.0);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if ((v < target) == increasing) lo = mid;
    else hi = mid;
    if (std::abs(v - target) <= 1e-15) return mid;
  }
  return 0.5 * (lo + hi);
}

// Convex Minkowski sum by merging edge sequences in angular order.
Polygon minkowski_sum(const Polygon& a, const Polygon& b) {
  auto start = [](const Polygon& p) {
    std::size_t s = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i].y < p[s].y || (p[i].y == p[s].y && p[i].x < p[s].x)) s = i;
    return s;
  };
  const std::size_t sa = start(a), sb = start(b);
  const std::size_t na = a.size(), nb = b.size();
  Polygon out;
  out.reserve(na + nb);
  std::size_t i = 0, j = 0;
  while (i < na || j < nb) {
    const Vec2 pa = a[(sa + i) % na], pb = b[(sb + j) % nb];
    out.push_back({pa.x + pb.x, pa.y + pb.y});
    const Vec2 ea{a[(sa + i + 1) % na].x - pa.x, a[(sa + i + 1) % na].y - pa.y};
    const Vec2 eb{b[(sb + j + 1) % nb].x - pb.x, b[(sb + j + 1) % nb].y - pb.y};
    const double c = ea.x * eb.y - ea.y * eb.x;
    if (j == nb || (i < na && c > 0)) ++i;
    else if (i == na || c < 0) ++j;
    else {
      ++i;
      ++j;
    }
  }
  return out;
}

Polygon translated(const Polygon& p, double dx, double dy, double scale = 1) {
  Polygon out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = {p[i].x * scale + dx, p[i].y * scale + dy};
  return out;
}

}  // namespace

double polygon_area(const Polygon& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p[i], v = p[(i + 1) % p.size()];
    a += u.x * v.y - u.y * v.x;
  }
  return 0.5 * a;
}

double polygon_tension_cost(const Polygon& p, const SurfaceTension& tau) {
  double c = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p[i], v = p[(i + 1) % p.size()];
    const double ex = v.x - u.x, ey = v.y - u.y;
    const double len = std::hypot(ex, ey);
    if (len == 0) continue;
    c += len * tau(ey / len, -ex / len);
  }
  return c;
}

WulffShape wulff_construct(const SurfaceTension& tension, const WulffOptions& options) {
  if (options.directions < 8) throw ConfigError("the Wulff construction needs at least 8 directions");
  int m = options.directions;
  Construction c = construct_once(tension, m);
  bool refined = !options.refine;
  while (options.refine && 2 * m <= options.max_directions) {
    Construction next = construct_once(tension, 2 * m);
    m *= 2;
    const double change = std::abs(next.cost - c.cost);
    c = std::move(next);
    if (change < options.refine_tolerance * c.cost) {
      refined = true;
      break;
    }
  }

  WulffShape s;
  s.tension = tension;
  s.polygon = std::move(c.polygon);
  s.cost_unit = c.cost;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& v : s.polygon) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  s.width = x1 - x0;
  s.height = y1 - y0;
  s.bounding_side = std::max(s.width, s.height);
  // A shape that fills its bounding square up to rounding is the square itself.
  s.s1 = s.bounding_side <= 1 + 1e-12 ? 1.0 : 1 / (s.bounding_side * s.bounding_side);
  s.directions = m;
  s.refined = refined;
  return s;
}

double wulff_cost(const WulffShape& shape, double S) {
  if (!(S >= 0)) throw DomainError("area must be non-negative");
  return std::sqrt(S) * shape.cost_unit;
}

double plaquette_area(const WulffShape& shape, double r) {
  if (!(r >= 0 && r <= 1)) throw DomainError("corner scale must lie in [0, 1]");
  const double w = shape.width / shape.bounding_side, h = shape.height / shape.bounding_side;
  // Mixed area of the square and the normalised Wulff shape.
  return (1 - r) * (1 - r) + r * (1 - r) * (w + h) + r * r * shape.s1;
}

double plaquette_cost(const WulffShape& shape, double r) {
  if (!(r >= 0 && r <= 1)) throw DomainError("corner scale must lie in [0, 1]");
  return (1 - r) * side_cost(shape.tension) + r * shape.cost_unit / shape.bounding_side;
}

double plaquette_radius(const WulffShape& shape, double S) {
  const double top = plaquette_area(shape, 0), bottom = plaquette_area(shape, 1);
  if (!(S >= std::min(top, bottom) - 1e-12 && S <= std::max(top, bottom) + 1e-12))
    throw DomainError("plaquette area out of range");
  if (std::abs(top - bottom) < 1e-15) return 0;
  return solve_monotone([&](double r) { return plaquette_area(shape, r); }, S);
}

PlaquetteSolution plaquette(const WulffShape& shape, double r) {
  PlaquetteSolution out;
  out.r = r;
  out.area = plaquette_area(shape, r);
  out.cost = plaquette_cost(shape, r);
  const double s = 1 - r;
  const Polygon square{{0, 0}, {s, 0}, {s, s}, {0, s}};
  double x0 = 1e300, y0 = 1e300;
  for (const auto& v : shape.polygon) {
    x0 = std::min(x0, v.x);
    y0 = std::min(y0, v.y);
  }
  const double k = r / shape.bounding_side;
  if (r == 0) out.loop = square;
  else if (r == 1) out.loop = translated(shape.polygon, -x0 * k, -y0 * k, k);
  else out.loop = minkowski_sum(square, translated(shape.polygon, -x0 * k, -y0 * k, k));
  return out;
}

const char* to_string(RestrictedRegime regime) {
  switch (regime) {
    case RestrictedRegime::kWulff: return "wulff";
    case RestrictedRegime::kPlaquette: return "plaquette";
    case RestrictedRegime::kPlaquetteAndWulff: return "plaquette+wulff";
    case RestrictedRegime::kTwoPlaquettes: return "two-plaquettes";
  }
  return "unknown";
}

RestrictedSolution restricted_wulff(const WulffShape& shape, double S) {
  if (!(S >= 0 && S < 2)) throw DomainError("restricted problem needs 0 <= S < 2");
  const double s1 = shape.s1;
  const double corner_cost = shape.cost_unit / shape.bounding_side;
  RestrictedSolution out;
  if (S <= s1) {
    out.value = wulff_cost(shape, S);
    out.areas = {S};
    return out;
  }
  if (S <= 1) {
    out.regime = RestrictedRegime::kPlaquette;
    out.r = plaquette_radius(shape, S);
    out.value = plaquette_cost(shape, out.r);
    out.areas = {S};
    return out;
  }
  out.k = 2;
  if (S <= 2 * s1) {
    // Square layer whose corners match a second Wulff-shaped layer of scale r.
    out.regime = RestrictedRegime::kPlaquetteAndWulff;
    out.r = solve_monotone([&](double r) { return plaquette_area(shape, r) + r * r * s1; }, S);
    out.value = plaquette_cost(shape, out.r) + out.r * corner_cost;
    out.areas = {plaquette_area(shape, out.r), out.r * out.r * s1};
    return out;
  }
  out.regime = RestrictedRegime::kTwoPlaquettes;
  out.r = plaquette_radius(shape, S / 2);
  out.value = 2 * plaquette_cost(shape, out.r);
  out.areas = {S / 2, S / 2};
  return out;
}

std::vector<Polygon> restricted_loops(const WulffShape& shape, const RestrictedSolution& sol) {
  switch (sol.regime) {
    case RestrictedRegime::kWulff:
      return {translated(shape.polygon, 0.5, 0.5, std::sqrt(sol.areas.at(0)))};
    case RestrictedRegime::kPlaquette:
      return {plaquette(shape, sol.r).loop};
    case RestrictedRegime::kPlaquetteAndWulff:
      return {plaquette(shape, sol.r).loop,
              translated(shape.polygon, 0.5, 0.5, sol.r / shape.bounding_side)};
    case RestrictedRegime::kTwoPlaquettes: {
      auto p = plaquette(shape, sol.r).loop;
      return {p, p};
    }
  }
  return {};
}

SingularityFit singularity_exponents(const WulffShape& shape, double lo, double hi) {
  if (shape.s1 >= 1 - 1e-9) throw DomainError("Wulff shape fills the square: no corner singularity to fit");
  if (!(lo > 0 && hi > lo && hi < 0.5)) throw DomainError("fit window must satisfy 0 < lo < hi < 1/2");
  const double w1 = restricted_wulff(shape, 1.0).value;
  auto slope = [&](auto&& y_of) {
    const int n = 25;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double t = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
      const double x = std::log(t), y = std::log(y_of(t));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  SingularityFit fit;
  fit.below = slope([&](double t) { return std::abs(restricted_wulff(shape, 1 - t).value - w1); });
  fit.above = slope([&](double t) { return std::abs(restricted_wulff(shape, 1 + t).value - w1); });
  fit.small_s = slope([&](double t) { return restricted_wulff(shape, t * shape.s1).value; });
  return fit;
}

}  // namespace fogdrip
