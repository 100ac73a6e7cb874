#include "fogdrip/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fogdrip/errors.hpp"

namespace fogdrip {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Terms smaller than 1e-15 of the largest one are dropped.
const double kLogCutoff = std::log(1e-15);

void check_probabilities(double pv, double ps) {
  if (!(pv > 0.0 && ps < 1.0)) throw ConfigError("occupation probabilities must lie in (0, 1)");
  if (!(ps > pv)) throw ConfigError("ordering violated: ps must exceed pv");
}

// Log-pmf of Bin(n, p) restricted to the window where it is within the cutoff
// of its peak. Returns the first index; the values go into out.
std::int64_t truncated_binomial(const LogFactorialTable& lf, std::int64_t n, double p,
                                std::vector<double>& out) {
  const double lp = std::log(p), lq = std::log1p(-p);
  auto g = [&](std::int64_t k) { return lf.log_choose(n, k) + k * lp + (n - k) * lq; };
  const std::int64_t mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor((n + 1) * p)), 0, n);
  const double gmax = g(mode);
  std::int64_t lo = mode, hi = mode;
  while (lo > 0 && g(lo - 1) - gmax >= kLogCutoff) --lo;
  while (hi < n && g(hi + 1) - gmax >= kLogCutoff) ++hi;
  out.clear();
  for (std::int64_t k = lo; k <= hi; ++k) out.push_back(g(k));
  return lo;
}

}  // namespace

PhaseParams PhaseParams::from_probabilities(double pv, double ps, double f) {
  if (!std::isfinite(pv) || !std::isfinite(ps) || !std::isfinite(f))
    throw ConfigError("phase parameters must be finite");
  check_probabilities(pv, ps);
  PhaseParams p;
  p.f = f;
  p.pv = pv;
  p.ps = ps;
  p.a = f - std::log(pv);
  p.b = f - std::log1p(-pv);
  p.c = f - std::log(ps);
  p.d = f - std::log1p(-ps);
  return p;
}

PhaseParams PhaseParams::from_potentials(double a, double b, double c, double d) {
  for (double v : {a, b, c, d})
    if (!std::isfinite(v)) throw ConfigError("chemical potentials must be finite");
  const double zv = std::exp(-a) + std::exp(-b);
  const double zs = std::exp(-c) + std::exp(-d);
  if (std::abs(zv - zs) > 1e-12 * std::max(zv, zs))
    throw ConfigError("equilibrium condition violated: exp(-a)+exp(-b) != exp(-c)+exp(-d)");
  PhaseParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  p.f = -std::log(zv);
  p.pv = std::exp(p.f - a);
  p.ps = std::exp(p.f - c);
  check_probabilities(p.pv, p.ps);
  return p;
}

LogFactorialTable::LogFactorialTable(std::int64_t n) : lf_(static_cast<std::size_t>(n) + 1, 0.0) {
  for (std::int64_t k = 2; k <= n; ++k) lf_[k] = lf_[k - 1] + std::log(static_cast<double>(k));
}

double binomial_convolution_log_pmf(const LogFactorialTable& lf, std::int64_t nS, double ps,
                                    std::int64_t nV, double pv, std::int64_t target) {
  if (nS < 0 || nV < 0) throw DomainError("region sizes must be non-negative");
  if (lf.size() < nS + nV) throw DomainError("log-factorial table too small");
  if (target < 0 || target > nS + nV) return kNegInf;
  const double lps = std::log(ps), lqs = std::log1p(-ps);
  const double lpv = std::log(pv), lqv = std::log1p(-pv);
  // k solid particles, target - k vapour particles; the summand is log-concave in k.
  auto g = [&](std::int64_t k) {
    const std::int64_t j = target - k;
    return lf.log_choose(nS, k) + k * lps + (nS - k) * lqs + lf.log_choose(nV, j) + j * lpv +
           (nV - j) * lqv;
  };
  const std::int64_t kmin = std::max<std::int64_t>(0, target - nV);
  const std::int64_t kmax = std::min(nS, target);
  std::int64_t lo = kmin, hi = kmax;
  while (lo < hi) {  // first k whose forward difference is not positive
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (g(mid + 1) > g(mid)) lo = mid + 1;
    else hi = mid;
  }
  const std::int64_t mode = lo;
  const double gmax = g(mode);
  double sum = 1.0;
  for (std::int64_t k = mode - 1; k >= kmin; --k) {
    const double r = g(k) - gmax;
    if (r < kLogCutoff) break;
    sum += std::exp(r);
  }
  for (std::int64_t k = mode + 1; k <= kmax; ++k) {
    const double r = g(k) - gmax;
    if (r < kLogCutoff) break;
    sum += std::exp(r);
  }
  return gmax + std::log(sum);
}

RegionSizes region_sizes(std::int64_t alpha, const LatticeGeometry& geometry) {
  const std::int64_t h = geometry.half_volume();
  return {h + alpha, h - alpha};
}

double sigma_exact(std::int64_t alpha, const LatticeGeometry& geometry, const PhaseParams& params,
                   std::int64_t target) {
  const RegionSizes r = region_sizes(alpha, geometry);
  const LogFactorialTable lf(geometry.box_volume());
  return binomial_convolution_log_pmf(lf, r.solid, params.ps, r.vapour, params.pv, target);
}

double SigmaLaw::total_mass() const {
  double s = 0;
  for (double v : log_p) s += std::exp(v);
  return s;
}

double SigmaLaw::mean() const {
  double s = 0, m = 0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    const double p = std::exp(log_p[i]);
    s += p;
    m += p * static_cast<double>(first + static_cast<std::int64_t>(i));
  }
  return m / s;
}

double SigmaLaw::variance() const {
  const double mu = mean();
  double s = 0, v = 0;
  for (std::size_t i = 0; i < log_p.size(); ++i) {
    const double p = std::exp(log_p[i]);
    const double x = static_cast<double>(first + static_cast<std::int64_t>(i)) - mu;
    s += p;
    v += p * x * x;
  }
  return v / s;
}

SigmaLaw sigma_exact_law(std::int64_t alpha, const LatticeGeometry& geometry,
                         const PhaseParams& params) {
  const RegionSizes r = region_sizes(alpha, geometry);
  if (r.solid < 0 || r.vapour < 0) throw DomainError("|alpha| exceeds half the box volume");
  const LogFactorialTable lf(geometry.box_volume());
  std::vector<double> ls, lv;
  const std::int64_t s0 = truncated_binomial(lf, r.solid, params.ps, ls);
  const std::int64_t v0 = truncated_binomial(lf, r.vapour, params.pv, lv);
  const double ms = *std::max_element(ls.begin(), ls.end());
  const double mv = *std::max_element(lv.begin(), lv.end());
  std::vector<double> a(ls.size()), b(lv.size());
  for (std::size_t i = 0; i < ls.size(); ++i) a[i] = std::exp(ls[i] - ms);
  for (std::size_t i = 0; i < lv.size(); ++i) b[i] = std::exp(lv[i] - mv);
  std::vector<double> conv(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) conv[i + j] += a[i] * b[j];
  SigmaLaw law;
  law.alpha = alpha;
  law.first = s0 + v0;
  law.log_p.resize(conv.size());
  for (std::size_t i = 0; i < conv.size(); ++i) law.log_p[i] = std::log(conv[i]) + ms + mv;
  return law;
}

double sigma_llt(std::int64_t alpha, const LatticeGeometry& geometry, const PhaseParams& params,
                 double delta) {
  const double B = static_cast<double>(geometry.box_volume());
  const double N2 = static_cast<double>(geometry.N) * geometry.N;
  const double DB = params.D() * B;
  const double x = static_cast<double>(alpha) * params.psv() - delta * N2;
  return -0.5 * std::log(std::numbers::pi * DB) - x * x / DB;
}

CanonicalTarget canonical_target(const LatticeGeometry& geometry, const PhaseParams& params,
                                 double delta) {
  const double N = geometry.N;
  const double base = params.a0(geometry.R) * N * N * N;
  CanonicalTarget t;
  t.delta_requested = delta;
  t.sigma = std::llround(base + delta * N * N);
  t.delta_effective = (static_cast<double>(t.sigma) - base) / (N * N);
  return t;
}

std::int64_t LogWeightTable::argmax() const {
  const auto it = std::max_element(log_q.begin(), log_q.end());
  return alpha_min + (it - log_q.begin());
}

LogWeightTable canonical_log_weight_table(const LatticeGeometry& geometry,
                                          const PhaseParams& params, double delta,
                                          std::int64_t alpha_min, std::int64_t alpha_max,
                                          WeightMethod method) {
  if (alpha_max < alpha_min) throw DomainError("empty alpha range");
  LogWeightTable t;
  t.alpha_min = alpha_min;
  t.target = canonical_target(geometry, params, delta);
  if (method == WeightMethod::kAuto)
    method = geometry.box_volume() <= kExactSigmaSiteLimit ? WeightMethod::kExact
                                                           : WeightMethod::kLLT;
  t.method = method;
  t.log_q.reserve(static_cast<std::size_t>(alpha_max - alpha_min + 1));
  if (method == WeightMethod::kExact) {
    const LogFactorialTable lf(geometry.box_volume());
    for (std::int64_t a = alpha_min; a <= alpha_max; ++a) {
      const RegionSizes r = region_sizes(a, geometry);
      if (r.solid < 0 || r.vapour < 0) {
        t.log_q.push_back(kNegInf);
        continue;
      }
      t.log_q.push_back(binomial_convolution_log_pmf(lf, r.solid, params.ps, r.vapour, params.pv,
                                                     t.target.sigma));
    }
  } else {
    // The surrogate aims at the same rounded particle number as the exact law.
    for (std::int64_t a = alpha_min; a <= alpha_max; ++a)
      t.log_q.push_back(sigma_llt(a, geometry, params, t.target.delta_effective));
  }
  return t;
}

}  // namespace fogdrip
