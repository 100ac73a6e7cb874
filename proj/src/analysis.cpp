#include "fogdrip/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "fogdrip/errors.hpp"
#include "fogdrip/parallel.hpp"
#include "fogdrip/phase_diagram.hpp"

namespace fogdrip {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kFlat: return "flat";
    case Verdict::kOneMonolayer: return "one-monolayer";
    case Verdict::kTwoMonolayers: return "two-monolayer";
    case Verdict::kOther: return "other";
  }
  return "unknown";
}

namespace {

ContourStats stats_of(const OrientedContour& c) {
  return {c.sign(), c.length(), c.interior_area(), c.level()};
}

std::uint64_t site_key(const Site& s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) | static_cast<std::uint32_t>(s.y);
}

}  // namespace

MonolayerReport monolayer_census(const HeightField& field, double epsilon,
                                 const std::optional<VolumeBoundCheck>& bound, std::string sample_id) {
  const LatticeGeometry& g = field.geometry();
  const ContourFamily family = extract_contours(field);
  const ContourClasses cls = classify_contours(family, g, epsilon);

  MonolayerReport rep;
  rep.sample_id = std::move(sample_id);
  rep.epsilon = epsilon;
  rep.small_threshold = cls.small_threshold;
  rep.large_threshold = cls.large_threshold;
  rep.total = family.size();
  rep.small = cls.small.size();
  rep.intermediate = cls.intermediate.size();
  rep.large = cls.large.size();
  for (int y = 1; y < g.side() - 1; ++y)
    for (int x = 1; x < g.side() - 1; ++x) ++rep.height_histogram[field.at(x, y)];

  if (cls.large.empty()) {
    rep.verdict = Verdict::kFlat;
    return rep;
  }

  // Large contours by decreasing area; the order of extraction does not matter.
  std::vector<std::size_t> large = cls.large;
  std::sort(large.begin(), large.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = family.contours[a];
    const auto& cb = family.contours[b];
    if (ca.interior_area() != cb.interior_area()) return ca.interior_area() > cb.interior_area();
    return a < b;
  });

  // Level-set contours are nested or disjoint, so one interior site decides containment.
  std::vector<std::unordered_set<std::uint64_t>> interiors;
  for (std::size_t i : large) {
    std::unordered_set<std::uint64_t> s;
    for (const Site& site : family.contours[i].interior_sites()) s.insert(site_key(site));
    interiors.push_back(std::move(s));
  }
  auto inside = [&](std::size_t inner, std::size_t outer) {
    const auto sites = family.contours[large[inner]].interior_sites();
    return family.contours[large[inner]].interior_area() < family.contours[large[outer]].interior_area() &&
           interiors[outer].count(site_key(sites.front())) > 0;
  };
  std::vector<int> depth(large.size(), 1);
  for (std::size_t i = 0; i < large.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (inside(i, j)) depth[i] = std::max(depth[i], depth[j] + 1);
  rep.nesting_depth = *std::max_element(depth.begin(), depth.end());

  const OrientedContour& g0 = family.contours[large[0]];
  rep.gamma0 = stats_of(g0);
  for (std::size_t i = 1; i < large.size(); ++i)
    if (inside(i, 0)) {
      rep.gamma1 = stats_of(family.contours[large[i]]);
      break;
    }

  const bool g0_plus = g0.sign() == Sign::kPlus;
  if (large.size() == 1 && g0_plus) rep.verdict = Verdict::kOneMonolayer;
  else if (large.size() == 2 && g0_plus && rep.gamma1 && rep.gamma1->sign == Sign::kPlus)
    rep.verdict = Verdict::kTwoMonolayers;
  else rep.verdict = Verdict::kOther;

  if (bound) {
    const double n2 = static_cast<double>(g.N) * g.N;
    const double threshold = bound->slack * 2 * bound->delta / (3 * bound->params.psv()) * n2;
    rep.volume_bound = static_cast<double>(g0.interior_area()) > threshold;
  }
  return rep;
}

Polygon contour_polygon(const OrientedContour& contour) {
  Polygon p;
  p.reserve(contour.vertices().size());
  for (const auto& v : contour.vertices()) p.push_back({v.x2 / 2.0, v.y2 / 2.0});
  return p;
}

namespace {

double point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

std::vector<Vec2> sample_boundary(const Polygon& p, double spacing) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 a = p[i], b = p[(i + 1) % p.size()];
    const int k = std::max(1, static_cast<int>(std::ceil(std::hypot(b.x - a.x, b.y - a.y) / spacing)));
    for (int j = 0; j < k; ++j) out.push_back({a.x + (b.x - a.x) * j / k, a.y + (b.y - a.y) * j / k});
  }
  return out;
}

double directed(const std::vector<Vec2>& pts, const Polygon& p, Vec2 shift) {
  double worst = 0;
  for (const Vec2& q0 : pts) {
    const Vec2 q{q0.x - shift.x, q0.y - shift.y};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size() && best > worst; ++i)
      best = std::min(best, point_segment(q, p[i], p[(i + 1) % p.size()]));
    worst = std::max(worst, best);
  }
  return worst;
}

// Drops vertices closer than min_gap to the previous kept one.
Polygon decimate(const Polygon& p, double min_gap) {
  Polygon out;
  for (const Vec2& v : p)
    if (out.empty() || std::hypot(v.x - out.back().x, v.y - out.back().y) >= min_gap) out.push_back(v);
  return out.size() >= 3 ? out : p;
}

Vec2 centroid(const Polygon& p) {
  double a = 0, cx = 0, cy = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p[i], v = p[(i + 1) % p.size()];
    const double c = u.x * v.y - v.x * u.y;
    a += c;
    cx += (u.x + v.x) * c;
    cy += (u.y + v.y) * c;
  }
  if (a == 0) return p.empty() ? Vec2{} : p.front();
  return {cx / (3 * a), cy / (3 * a)};
}

}  // namespace

double hausdorff_distance(const Polygon& a, const Polygon& b, double spacing) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance needs non-empty curves");
  return std::max(directed(sample_boundary(a, spacing), b, {}), directed(sample_boundary(b, spacing), a, {}));
}

ShapeFit hausdorff_fit(const Polygon& contour, const Polygon& target, double b) {
  if (contour.empty() || target.empty()) throw DomainError("Hausdorff fit needs non-empty curves");
  const double spacing = 0.25;
  const Polygon tgt = decimate(target, spacing / 2);
  const auto pts_c = sample_boundary(contour, spacing);
  const auto pts_t = sample_boundary(tgt, spacing);
  // Distance with the target moved by s.
  auto dist = [&](Vec2 s) {
    return std::max(directed(pts_c, tgt, s), directed(pts_t, contour, {-s.x, -s.y}));
  };
  const Vec2 cc = centroid(contour), ct = centroid(tgt);
  Vec2 best{cc.x - ct.x, cc.y - ct.y};
  double best_d = dist(best);
  const Vec2 start = best;
  for (int dx = -2; dx <= 2; ++dx)
    for (int dy = -2; dy <= 2; ++dy) {
      const Vec2 s{start.x + dx, start.y + dy};
      const double d = dist(s);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
  for (double step = 0.5; step >= 1.0 / 64; step /= 2) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        const Vec2 s{best.x + step * dir.x, best.y + step * dir.y};
        const double d = dist(s);
        if (d < best_d - 1e-12) {
          best_d = d;
          best = s;
          moved = true;
        }
      }
    }
  }
  ShapeFit fit;
  fit.translation = best;
  fit.target.reserve(target.size());
  for (const Vec2& v : target) fit.target.push_back({v.x + best.x, v.y + best.y});
  fit.distance = best_d;
  fit.normalized = b > 0 ? best_d / std::cbrt(b) : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

Polygon scaled_wulff(const WulffShape& shape, double b) {
  if (!(b >= 0)) throw DomainError("area must be non-negative");
  const double s = std::sqrt(b);
  Polygon p;
  p.reserve(shape.polygon.size());
  for (const Vec2& v : shape.polygon) p.push_back({v.x * s, v.y * s});
  return p;
}

std::uint64_t derived_seed(std::uint64_t seed, std::size_t grid_index, std::size_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(grid_index), static_cast<std::uint32_t>(replicate)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SweepReport sweep_experiment(const SweepConfig& cfg) {
  SweepReport report;
  if (cfg.deltas.empty()) return report;
  if (cfg.replicates < 1) throw ConfigError("at least one replicate is needed");
  if (cfg.sweeps < 0) throw ConfigError("sweeps must be non-negative");

  // Grid points that fit the sweep budget, in order.
  std::size_t points = cfg.deltas.size();
  if (cfg.budget_sweeps > 0) {
    const std::int64_t per_point = static_cast<std::int64_t>(cfg.replicates) * std::max<std::int64_t>(cfg.sweeps, 1);
    points = std::min<std::size_t>(points, static_cast<std::size_t>(cfg.budget_sweeps / per_point));
    report.partial = points < cfg.deltas.size();
  }

  const LatticeGeometry& g = cfg.geometry;
  const std::int64_t reach = g.interior_sites() * g.hmax;
  std::vector<LogWeightTable> tables;
  for (std::size_t i = 0; i < points; ++i)
    tables.push_back(canonical_log_weight_table(g, cfg.params, cfg.deltas[i], -reach, reach, cfg.weights));

  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  std::vector<std::vector<MonolayerReport>> per_chain(points * reps);
  std::vector<double> chain_alpha(points * reps), chain_iat(points * reps);
  parallel_for(points * reps, [&](std::size_t job) {
    const std::size_t i = job / reps, r = job % reps;
    ChainConfig cc;
    cc.geometry = g;
    cc.beta = cfg.beta;
    cc.ensemble = CanonicalEnsemble{tables[i]};
    cc.sweeps = cfg.sweeps;
    cc.burnin = cfg.burnin;
    cc.thinning = cfg.thinning;
    cc.seed = derived_seed(cfg.seed, i, r);
    const ChainResult res = run_chain(cc);
    const VolumeBoundCheck check{tables[i].target.delta_effective, cfg.params, cfg.bound_slack};
    std::vector<MonolayerReport> out;
    const std::string id = "d" + std::to_string(i) + "-r" + std::to_string(r);
    if (cfg.thinning > 0) {
      for (const auto& [sweep, field] : res.snapshots)
        out.push_back(monolayer_census(field, cfg.epsilon, check, id + "-s" + std::to_string(sweep)));
    } else {
      out.push_back(monolayer_census(res.final_field, cfg.epsilon, check, id + "-final"));
    }
    per_chain[job] = std::move(out);
    chain_alpha[job] = res.mean_alpha;
    chain_iat[job] = res.iat_alpha;
  });

  const WulffShape shape = wulff_construct(SurfaceTension::make(cfg.tension, cfg.tension_beta, cfg.tension_path_length));
  const PhaseModel model{cfg.params, shape, static_cast<double>(g.R)};
  const double n2 = static_cast<double>(g.N) * g.N;
  for (std::size_t i = 0; i < points; ++i) {
    SweepRow row;
    row.delta = cfg.deltas[i];
    std::size_t with_g0 = 0, one = 0, bound_ok = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t job = i * reps + r;
      row.mean_alpha += chain_alpha[job] / static_cast<double>(reps);
      row.mean_iat += chain_iat[job] / static_cast<double>(reps);
      for (const auto& s : per_chain[job]) {
        ++row.samples;
        switch (s.verdict) {
          case Verdict::kFlat: row.flat += 1; break;
          case Verdict::kOneMonolayer: row.one += 1; break;
          case Verdict::kTwoMonolayers: row.two += 1; break;
          case Verdict::kOther: row.other += 1; break;
        }
        if (s.gamma0) {
          ++with_g0;
          row.mean_gamma0_area += static_cast<double>(s.gamma0->area);
        }
        if (s.verdict == Verdict::kOneMonolayer) {
          ++one;
          if (s.volume_bound.value_or(false)) ++bound_ok;
        }
        report.samples.push_back(s);
      }
    }
    const double n = static_cast<double>(std::max<std::size_t>(row.samples, 1));
    row.flat /= n;
    row.one /= n;
    row.two /= n;
    row.other /= n;
    row.mean_gamma0_area = with_g0 ? row.mean_gamma0_area / static_cast<double>(with_g0) : 0;
    row.bound_fraction = one ? static_cast<double>(bound_ok) / static_cast<double>(one) : 0;
    const RadiiRow pred = radii_at(model, std::max(0.0, tables[i].target.delta_effective));
    row.predicted_b = pred.rho_star * n2;
    row.predicted_k = pred.k;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace fogdrip
