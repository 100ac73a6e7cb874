#include "fogdrip/wang_landau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fogdrip/errors.hpp"
#include "fogdrip/sampler.hpp"

namespace fogdrip {

namespace {

struct WindowResult {
  std::vector<double> log_g;
  std::vector<bool> visited;
  bool converged = true;
  double log_f = 0;
  std::int64_t sweeps = 0;
  std::vector<WangLandauStage> stages;
};

WindowResult run_window(const WangLandauConfig& cfg, int window, std::int64_t lo, std::int64_t hi) {
  const std::size_t bins = static_cast<std::size_t>(hi - lo + 1);
  WindowResult out;
  out.log_g.assign(bins, 0.0);
  out.visited.assign(bins, false);
  std::vector<std::int64_t> hist(bins, 0);

  std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(window)};
  std::mt19937_64 rng(seq);
  ChainState state(seed_droplet(cfg.geometry, lo + (hi - lo) / 2), rng());

  HeightField& f = state.field;
  const int L = f.geometry().interior_side();
  const int hmax = f.geometry().hmax;
  const std::size_t st = f.stride();
  const auto n = static_cast<unsigned __int128>(f.geometry().interior_sites());
  const std::int64_t steps = f.geometry().interior_sites();
  double* lg = out.log_g.data();

  double log_f = cfg.log_f_initial;
  std::int64_t stage_sweeps = 0;
  while (log_f >= cfg.log_f_final) {
    if (out.sweeps >= cfg.max_sweeps_per_window) {
      out.converged = false;
      break;
    }
    for (std::int64_t s = 0; s < cfg.check_every; ++s) {
      for (std::int64_t i = 0; i < steps; ++i) {
        const std::uint64_t r = state.rng();
        const int dh = (r & 1) ? 1 : -1;
        const auto k = static_cast<int>(((r >> 1) * n) >> 63);
        const std::size_t idx = static_cast<std::size_t>(1 + k / L) * st + 1 + k % L;
        const int h = f.raw(idx);
        const int hn = h + dh;
        const std::int64_t an = state.alpha + dh;
        if (hn <= hmax && hn >= -hmax && an >= lo && an <= hi) {
          const int a = f.raw(idx - 1), b = f.raw(idx + 1), c = f.raw(idx - st), d = f.raw(idx + st);
          const int de = std::abs(hn - a) - std::abs(h - a) + std::abs(hn - b) - std::abs(h - b) +
                         std::abs(hn - c) - std::abs(h - c) + std::abs(hn - d) - std::abs(h - d);
          const double x = -cfg.beta * de + lg[state.alpha - lo] - lg[an - lo];
          if (x >= 0 || static_cast<double>(state.rng() >> 11) * 0x1.0p-53 < std::exp(x)) {
            f.add_raw(idx, dh);
            state.energy += de;
            state.alpha = an;
          }
        }
        const std::size_t cur = static_cast<std::size_t>(state.alpha - lo);
        lg[cur] += log_f;
        ++hist[cur];
        out.visited[cur] = true;
      }
    }
    out.sweeps += cfg.check_every;
    stage_sweeps += cfg.check_every;
    state.sweeps = out.sweeps;

    const auto mn = *std::min_element(hist.begin(), hist.end());
    double mean = 0;
    for (auto v : hist) mean += static_cast<double>(v);
    mean /= static_cast<double>(bins);
    if (mn > 0 && static_cast<double>(mn) >= cfg.flatness * mean) {
      out.stages.push_back({window, log_f, stage_sweeps});
      log_f *= 0.5;
      std::fill(hist.begin(), hist.end(), 0);
      stage_sweeps = 0;
    }
  }
  state.check_consistency();
  out.log_f = log_f;
  return out;
}

}  // namespace

HeightField seed_droplet(const LatticeGeometry& geometry, std::int64_t b) {
  HeightField f(geometry);
  const int L = geometry.interior_side();
  const std::int64_t area = static_cast<std::int64_t>(L) * L;
  if (std::llabs(b) > area * geometry.hmax) throw DomainError("|b| exceeds the reachable volume");
  const int sign = b < 0 ? -1 : 1;
  std::int64_t remaining = std::llabs(b);
  while (remaining > 0) {
    const std::int64_t cells = std::min(remaining, area);
    // Near-square block: w columns, full rows plus one partial row, centred.
    const int w = std::min<int>(L, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cells)))));
    const int rows = static_cast<int>((cells + w - 1) / w);
    const int x0 = 1 + (L - w) / 2, y0 = 1 + (L - rows) / 2;
    for (std::int64_t c = 0; c < cells; ++c) {
      const int x = x0 + static_cast<int>(c % w), y = y0 + static_cast<int>(c / w);
      f.set(x, y, f.at(x, y) + sign);
    }
    remaining -= cells;
  }
  return f;
}

DensityOfStates wang_landau_alpha(const WangLandauConfig& cfg) {
  if (cfg.b_max < cfg.b_min) throw ConfigError("empty b range");
  if (cfg.windows < 1) throw ConfigError("at least one window is needed");
  if (!(cfg.flatness > 0 && cfg.flatness < 1)) throw ConfigError("flatness must lie in (0, 1)");
  if (!(cfg.log_f_initial > 0 && cfg.log_f_final > 0)) throw ConfigError("modification factors must be positive");
  if (cfg.check_every < 1) throw ConfigError("check period must be positive");
  const std::int64_t reach = cfg.geometry.interior_sites() * cfg.geometry.hmax;
  if (cfg.b_min < -reach || cfg.b_max > reach) throw ConfigError("b range exceeds the reachable alpha range");

  const std::int64_t total = cfg.b_max - cfg.b_min + 1;
  const int k = cfg.windows;
  const std::int64_t ov = cfg.overlap >= 0 ? cfg.overlap : std::max<std::int64_t>(2, total / (4 * k));
  const std::int64_t w = (total + (k - 1) * ov + k - 1) / k;
  if (k > 1 && w <= ov) throw ConfigError("window overlap too large for the b range");

  DensityOfStates dos;
  dos.b_min = cfg.b_min;
  dos.log_g.assign(static_cast<std::size_t>(total), std::numeric_limits<double>::quiet_NaN());

  std::int64_t prev_lo = 0, prev_hi = 0;
  std::vector<double> prev;
  for (int i = 0; i < k; ++i) {
    const std::int64_t lo = cfg.b_min + i * (w - ov);
    const std::int64_t hi = i == k - 1 ? cfg.b_max : std::min(cfg.b_max, lo + w - 1);
    WindowResult res = run_window(cfg, i, lo, hi);
    dos.converged = dos.converged && res.converged;
    dos.final_log_f = std::max(dos.final_log_f, res.log_f);
    dos.total_sweeps += res.sweeps;
    dos.stages.insert(dos.stages.end(), res.stages.begin(), res.stages.end());
    for (std::size_t j = 0; j < res.log_g.size(); ++j)
      if (!res.visited[j]) res.log_g[j] = std::numeric_limits<double>::quiet_NaN();

    std::int64_t from = lo;
    if (i > 0) {
      // Match the mean over the shared bins, then hand over at their midpoint.
      double diff = 0;
      int cnt = 0;
      for (std::int64_t b = lo; b <= prev_hi; ++b) {
        const double a = prev[b - prev_lo], c = res.log_g[b - lo];
        if (std::isnan(a) || std::isnan(c)) continue;
        diff += a - c;
        ++cnt;
      }
      if (cnt > 0) diff /= cnt;
      for (double& v : res.log_g) v += diff;
      from = lo + (prev_hi - lo + 1) / 2;
    }
    for (std::int64_t b = from; b <= hi; ++b) dos.log_g[b - cfg.b_min] = res.log_g[b - lo];
    prev = std::move(res.log_g);
    prev_lo = lo;
    prev_hi = hi;
  }

  const std::int64_t zero = std::clamp<std::int64_t>(0, cfg.b_min, cfg.b_max);
  const double ref = dos(zero);
  for (double& v : dos.log_g) v -= ref;
  return dos;
}

}  // namespace fogdrip
