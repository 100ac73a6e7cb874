#include "fogdrip/phase_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fogdrip/errors.hpp"

namespace fogdrip {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rho_top(const PhaseModel& m) { return 2 * m.R * m.R * (1 - 1e-12); }

template <class F>
double golden_section(F f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  const double tol = 1e-14 * std::max(1.0, std::abs(b));
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

// Bisection on a predicate that is false at lo and true at hi.
template <class P>
std::pair<double, double> bisect_predicate(P pred, double lo, double hi, double rel_tol) {
  while (hi - lo > rel_tol * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) hi = mid;
    else lo = mid;
  }
  return {lo, hi};
}

}  // namespace

double kappa_c() { return 0.5 * std::pow(1.5, 1.5); }

double free_energy(const PhaseModel& m, double rho, double delta) {
  const double R2 = m.R * m.R;
  if (!(rho >= 0 && rho < 2 * R2)) throw DomainError("rho must lie in [0, 2R^2)");
  const double q = delta - m.params.psv() * rho;
  return q * q / (2 * m.params.D() * R2) + m.R * restricted_wulff(m.shape, rho / R2).value;
}

double phi(double kappa, double lambda) {
  return kappa * (1 - lambda) * (1 - lambda) + std::sqrt(lambda);
}

double kappa_of(const PhaseModel& m, double delta) {
  if (!(delta >= 0)) throw DomainError("kappa needs delta >= 0");
  return std::pow(delta, 1.5) * std::sqrt(m.params.psv()) /
         (2 * m.params.D() * m.R * m.R * m.shape.cost_unit);
}

std::vector<double> phi_minimizers(double kappa) {
  if (!(kappa >= 0)) throw DomainError("kappa must be non-negative");
  const double kc = kappa_c();
  if (std::abs(kappa - kc) <= 1e-12) return {0.0, kLambdaC};
  if (kappa < kc) return {0.0};
  // 4 kappa sqrt(l) (1 - l) decreases on [1/3, 1]; its value there spans (0, 1]
  // and above, so the largest root is bracketed.
  auto g = [kappa](double l) { return 4 * kappa * std::sqrt(l) * (1 - l) - 1; };
  double lo = 1.0 / 3.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0) lo = mid;
    else hi = mid;
  }
  return {0.5 * (lo + hi)};
}

double delta1_analytic(const PhaseModel& m) {
  const double D = m.params.D(), w1 = m.shape.cost_unit;
  return 1.5 * std::cbrt(D * D * w1 * w1 / m.params.psv()) * std::pow(m.R, 4.0 / 3.0);
}

double fitting_required_R(const PhaseParams& params, const WulffShape& shape) {
  const double psv = params.psv();
  return params.D() * shape.cost_unit / (psv * psv) * std::pow(shape.s1, -1.5);
}

std::vector<std::pair<double, double>> free_energy_local_minima(const PhaseModel& m, double delta,
                                                                const MinimizerOptions& options) {
  if (options.grid < 10) throw ConfigError("free-energy grid too coarse");
  const int n = options.grid;
  const double top = rho_top(m);
  auto F = [&](double rho) { return free_energy(m, rho, delta); };
  std::vector<double> x(n + 1), y(n + 1);
  for (int i = 0; i <= n; ++i) {
    x[i] = top * i / n;
    y[i] = F(x[i]);
  }
  std::vector<std::pair<double, double>> mins;
  for (int i = 0; i <= n; ++i) {
    const bool left = i == 0 || y[i] <= y[i - 1];
    const bool right = i == n || y[i] <= y[i + 1];
    if (!(left && right)) continue;
    if (i == 0) {
      mins.emplace_back(0.0, y[0]);
      continue;
    }
    const double a = x[i - 1], b = i == n ? top : x[i + 1];
    const double r = golden_section(F, a, b);
    const double fr = F(r);
    if (fr <= y[i]) mins.emplace_back(r, fr);
    else mins.emplace_back(x[i], y[i]);
  }
  std::sort(mins.begin(), mins.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : mins) {
    if (!merged.empty() && p.first - merged.back().first < 1e-7 * top) {
      if (p.second < merged.back().second) merged.back() = p;
      continue;
    }
    merged.push_back(p);
  }
  return merged;
}

FreeEnergyMinimum minimize_free_energy(const PhaseModel& m, double delta, const MinimizerOptions& options) {
  const auto mins = free_energy_local_minima(m, delta, options);
  FreeEnergyMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& p : mins) out.value = std::min(out.value, p.second);
  for (const auto& p : mins)
    if (p.second <= out.value + options.tie_tolerance) out.minimizers.push_back(p.first);
  out.rho = out.minimizers.front();
  return out;
}

RadiiRow radii_at(const PhaseModel& m, double delta, const MinimizerOptions& options) {
  const auto min = minimize_free_energy(m, delta, options);
  RadiiRow row;
  row.delta = delta;
  // On a tie report the larger minimiser, the state the system jumps to.
  row.rho_star = min.minimizers.back();
  row.f_min = min.value;
  row.multiplicity = min.multiplicity();
  row.r1 = row.r1_tilde = row.r2 = kNaN;
  if (row.rho_star <= 0) return row;
  const double S = row.rho_star / (m.R * m.R);
  const auto sol = restricted_wulff(m.shape, S);
  row.k = sol.k;
  const double corner = sol.r * m.R / 2;
  switch (sol.regime) {
    case RestrictedRegime::kWulff: row.r1 = std::sqrt(row.rho_star) * m.shape.bounding_side / 2; break;
    case RestrictedRegime::kPlaquette: row.r1_tilde = corner; break;
    case RestrictedRegime::kPlaquetteAndWulff:
    case RestrictedRegime::kTwoPlaquettes:
      row.r1_tilde = corner;
      row.r2 = corner;
      break;
  }
  return row;
}

CriticalValues critical_values(const PhaseModel& m, const CriticalOptions& options) {
  CriticalValues cv;
  cv.required_R = fitting_required_R(m.params, m.shape);
  cv.fits = m.R >= cv.required_R;
  if (options.enforce_fitting && !cv.fits) throw FittingConditionError(m.R, cv.required_R);
  cv.delta1_analytic = delta1_analytic(m);
  cv.r_cr = m.shape.bounding_side / 2 * std::sqrt(kLambdaC * cv.delta1_analytic / m.params.psv());

  const auto& mo = options.minimizer;
  // Transitions are located with strict comparisons; the tie tolerance only
  // decides which minimisers are reported at the located points.
  MinimizerOptions strict = mo;
  strict.tie_tolerance = 0;
  const double tol = options.relative_tolerance;
  const double R2 = m.R * m.R;
  auto rho_star = [&](double d) { return minimize_free_energy(m, d, strict).rho; };
  auto top_rho = [&](double d) { return minimize_free_energy(m, d, strict).minimizers.back(); };

  // The minimiser is 0 at delta = 0 and is pushed towards 2R^2 for large delta.
  auto bracket = [&](auto pred, double lo) {
    double hi = std::max(2 * lo, 2 * cv.delta1_analytic);
    for (int i = 0; i < 60 && !pred(hi); ++i) {
      lo = hi;
      hi *= 2;
    }
    return std::pair{lo, hi};
  };

  auto positive = [&](double d) { return rho_star(d) > 0; };
  auto [l1, h1] = bracket(positive, 0.0);
  std::tie(l1, h1) = bisect_predicate(positive, l1, h1, tol);
  cv.delta1 = h1;
  const auto at1 = minimize_free_energy(m, h1, mo);
  cv.multiplicity_delta1 = at1.multiplicity();
  cv.rho_at_delta1 = at1.minimizers.back();

  auto beyond = [&](double d) { return rho_star(d) > R2; };
  auto [l2, h2] = bracket(beyond, h1);
  std::tie(l2, h2) = bisect_predicate(beyond, l2, h2, tol);
  cv.delta2 = h2;
  cv.multiplicity_delta2 = minimize_free_energy(m, h2, mo).multiplicity();
  cv.rho_minus = top_rho(l2);
  cv.rho_plus = rho_star(h2);

  const double s1R2 = m.shape.s1 * R2;
  auto plaquette_reached = [&](double d) { return top_rho(d) >= s1R2; };
  if (plaquette_reached(h1)) {
    cv.delta15 = cv.delta1;
    cv.delta15_at_delta1 = true;
  } else if (!plaquette_reached(l2)) {
    cv.delta15 = kNaN;
  } else {
    cv.delta15 = bisect_predicate(plaquette_reached, h1, l2, tol).second;
  }

  const double two_s1R2 = 2 * s1R2;
  auto two_plaquettes = [&](double d) { return rho_star(d) >= two_s1R2 * (1 - 1e-12); };
  if (two_s1R2 >= rho_top(m)) {
    cv.delta25 = kNaN;
  } else if (two_plaquettes(h2)) {
    cv.delta25 = cv.delta2;
    cv.delta25_at_delta2 = true;
  } else {
    auto [l3, h3] = bracket(two_plaquettes, h2);
    cv.delta25 = two_plaquettes(h3) ? bisect_predicate(two_plaquettes, l3, h3, tol).second : kNaN;
  }

  if (options.table_points > 1) {
    const double end = 1.25 * (std::isnan(cv.delta25) ? cv.delta2 : std::max(cv.delta2, cv.delta25));
    for (int i = 0; i < options.table_points; ++i)
      cv.table.push_back(radii_at(m, end * i / (options.table_points - 1), mo));
  }
  return cv;
}

CaseBounds case_bounds(const PhaseModel& m, int N, double b, double delta, const EnvelopeOptions& o) {
  if (!(b >= 0)) throw DomainError("volume must be non-negative");
  const double D = m.params.D(), R2 = m.R * m.R, psv = m.params.psv();
  const double n = N;
  const double base = -delta * delta * n / (2 * D * R2);
  CaseBounds cb;
  if (b <= std::pow(n, 1 + o.eta)) {
    cb.regime = 1;
    cb.upper = base - 1.5 * std::log(n);
    cb.lower = base - b * b / (n * n) - 1.5 * std::log(n);
  } else if (b <= o.c9 * n * n) {
    cb.regime = 2;
    cb.upper = base + delta * psv * b / (n * R2 * D) - o.c8 * std::min(b * b / (n * n), n);
    cb.lower = kNaN;
  } else {
    cb.regime = 3;
    const double rho = b / (n * n);
    const double q = delta - psv * rho;
    const double w = m.R * restricted_wulff(m.shape, rho / R2).value;
    cb.upper = -n * (q * q / (2 * D * R2) + w);
    cb.lower = -n * (q * q / (D * R2) + w);
  }
  return cb;
}

EnvelopeReport case_envelope(const PhaseModel& m, int N, double delta, const EnvelopeOptions& o) {
  EnvelopeReport rep;
  rep.delta = delta;
  const auto min = minimize_free_energy(m, delta);
  rep.rho_star = min.minimizers.back();
  rep.dominant = rep.rho_star > 0 ? 3 : 1;
  rep.typical_b = rep.rho_star * N * N;
  const auto c1 = case_bounds(m, N, 0, delta, o);
  rep.case1_upper = c1.upper;
  rep.case1_lower = c1.lower;
  const double n2 = static_cast<double>(N) * N;
  const double b_lo = std::pow(static_cast<double>(N), 1 + o.eta), b_hi = o.c9 * n2;
  rep.case2_upper = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 200 && b_hi > b_lo; ++i)
    rep.case2_upper = std::max(rep.case2_upper, case_bounds(m, N, b_lo + (b_hi - b_lo) * i / 200, delta, o).upper);
  rep.case3_upper = rep.case3_lower = -std::numeric_limits<double>::infinity();
  const double top = rho_top(m) * n2;
  for (int i = 1; i <= 2000; ++i) {
    const double b = b_hi + (top - b_hi) * i / 2000;
    const auto c3 = case_bounds(m, N, std::min(b, top), delta, o);
    if (c3.regime != 3) continue;
    rep.case3_upper = std::max(rep.case3_upper, c3.upper);
    rep.case3_lower = std::max(rep.case3_lower, c3.lower);
  }
  return rep;
}

}  // namespace fogdrip
