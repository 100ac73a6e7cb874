#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fogdrip/errors.hpp"
#include "fogdrip/oracle.hpp"
#include "fogdrip/sampler.hpp"

using namespace fogdrip;

namespace {

// Full transition matrix of the single-site kernel on an enumerated box.
std::vector<std::vector<double>> transition_matrix(const EnumeratedEnsemble& ens,
                                                   const MetropolisSampler& k) {
  const auto n = static_cast<std::size_t>(ens.count());
  const double sites = static_cast<double>(ens.geometry().interior_sites());
  std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    const HeightField f = ens.field(static_cast<std::int64_t>(x));
    double out = 0;
    for (std::int64_t s = 0; s < ens.geometry().interior_sites(); ++s) {
      const Site site = f.interior_site(s);
      for (int dh : {1, -1}) {
        const double a = k.acceptance(f, ens.alpha(static_cast<std::int64_t>(x)), site, dh);
        if (a == 0) continue;
        HeightField g = f;
        g.set(site, f.at(site) + dh);
        const double p = a / (2.0 * sites);
        P[x][static_cast<std::size_t>(ens.code_of(g))] += p;
        out += p;
      }
    }
    P[x][x] += 1.0 - out;
  }
  return P;
}

void check_detailed_balance(const EnumeratedEnsemble& ens, double beta, const Ensemble& e) {
  const MetropolisSampler k(beta, e);
  const auto pi = exact_law(ens, beta, e);
  const auto P = transition_matrix(ens, k);
  const std::size_t n = pi.size();
  double worst_flow = 0, worst_stationary = 0;
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0;
    for (std::size_t y = 0; y < n; ++y) {
      worst_flow = std::max(worst_flow, std::abs(pi[x] * P[x][y] - pi[y] * P[y][x]));
      s += pi[y] * P[y][x];
    }
    worst_stationary = std::max(worst_stationary, std::abs(s - pi[x]));
  }
  CHECK(worst_flow <= 1e-12);
  CHECK(worst_stationary <= 1e-12);
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("acceptance of a first step off the flat field") {
    const auto g = LatticeGeometry::from_interior(3, 2);
    const HeightField flat(g);
    const double beta = 6.0;
    CHECK(MetropolisSampler(beta, GrandEnsemble{}).acceptance(flat, 0, {2, 2}, 1) ==
          doctest::Approx(std::exp(-4 * beta)).epsilon(1e-14));
    CHECK(MetropolisSampler(beta, PinnedEnsemble{-1, 0}).acceptance(flat, 0, {2, 2}, 1) == 0.0);
    CHECK(MetropolisSampler(beta, PinnedEnsemble{-1, 1}).acceptance(flat, 0, {2, 2}, 1) ==
          doctest::Approx(std::exp(-4 * beta)).epsilon(1e-14));
    const auto params = PhaseParams::from_probabilities(0.2, 0.8);
    const auto can = exact_canonical_ensemble(g, params, 0.5);
    const double w = std::exp(can.table(1) - can.table(0));
    CHECK(MetropolisSampler(beta, can).acceptance(flat, 0, {2, 2}, 1) ==
          doctest::Approx(std::min(1.0, std::exp(-4 * beta) * w)).epsilon(1e-13));
  }

  TEST_CASE("detailed balance on the 2x2 box") {
    const auto g = LatticeGeometry::from_interior(2, 1);
    const EnumeratedEnsemble ens(g);
    const auto params = PhaseParams::from_probabilities(0.2, 0.8);
    check_detailed_balance(ens, 1.5, GrandEnsemble{});
    check_detailed_balance(ens, 0.7, exact_canonical_ensemble(g, params, 0.5));
    check_detailed_balance(ens, 1.5, PinnedEnsemble{-1, 2});
  }

  TEST_CASE("zero sweeps and determinism") {
    ChainConfig cfg;
    cfg.geometry = LatticeGeometry::make(8, 1, 3);
    cfg.beta = 1.0;
    cfg.thinning = 5;
    cfg.seed = 42;
    const ChainResult zero = run_chain(cfg);
    REQUIRE(zero.series.size() == 1);
    CHECK(zero.series[0].energy == 0);
    CHECK(zero.snapshots.size() == 1);
    CHECK(zero.final_field == HeightField(cfg.geometry));

    cfg.sweeps = 300;
    const ChainResult a = run_chain(cfg);
    const ChainResult b = run_chain(cfg);
    CHECK(a.series.size() == 301);
    CHECK(a.burnin == 30);
    CHECK(a.snapshots.size() == 55);
    CHECK(a.final_field == b.final_field);
    bool same = a.series.size() == b.series.size();
    for (std::size_t i = 0; same && i < a.series.size(); ++i)
      same = a.series[i].energy == b.series[i].energy && a.series[i].alpha == b.series[i].alpha;
    CHECK(same);
    cfg.seed = 43;
    CHECK_FALSE(run_chain(cfg).final_field == a.final_field);
  }

  TEST_CASE("empirical law matches the exact law on the 2x2 box") {
    const auto g = LatticeGeometry::from_interior(2, 1);
    const EnumeratedEnsemble ens(g);
    const auto exact = exact_law(ens, 1.5, GrandEnsemble{});
    std::vector<double> hist(exact.size(), 0.0);
    ChainConfig cfg;
    cfg.geometry = g;
    cfg.beta = 1.5;
    cfg.sweeps = 200000;
    cfg.seed = 5;
    cfg.record_series = false;
    long long n = 0;
    run_chain(cfg, [&](const ChainState& s) {
      if (s.sweeps < 1000) return;
      hist[static_cast<std::size_t>(ens.code_of(s.field))] += 1;
      ++n;
    });
    double tv = 0;
    for (std::size_t i = 0; i < hist.size(); ++i) tv += std::abs(hist[i] / n - exact[i]);
    CHECK(0.5 * tv <= 0.02);
  }

  TEST_CASE("canonical chain at delta 0 is symmetric in alpha") {
    const auto g = LatticeGeometry::make(6, 1, 2);
    const auto params = PhaseParams::from_probabilities(0.2, 0.8);  // pv + ps = 1
    ChainConfig cfg;
    cfg.geometry = g;
    cfg.beta = 0.8;
    cfg.ensemble = exact_canonical_ensemble(g, params, 0.0);
    cfg.sweeps = 100000;
    cfg.seed = 11;
    cfg.record_series = false;
    std::map<std::int64_t, double> hist;
    double n = 0;
    run_chain(cfg, [&](const ChainState& s) {
      hist[s.alpha] += 1;
      n += 1;
    });
    double worst = 0;
    for (auto [a, c] : hist) {
      const double mirror = hist.count(-a) ? hist[-a] : 0.0;
      worst = std::max(worst, std::abs(c - mirror) / n);
    }
    CHECK(worst < 0.01);
  }

  TEST_CASE("pinned chain stays in its window") {
    ChainConfig cfg;
    cfg.geometry = LatticeGeometry::make(6, 1, 2);
    cfg.beta = 1.0;
    cfg.ensemble = PinnedEnsemble{-2, 3};
    cfg.sweeps = 2000;
    bool inside = true;
    run_chain(cfg, [&](const ChainState& s) { inside = inside && s.alpha >= -2 && s.alpha <= 3; });
    CHECK(inside);
    cfg.ensemble = PinnedEnsemble{1, 3};
    CHECK_THROWS_AS(run_chain(cfg), ConfigError);
  }

  TEST_CASE("shifting the canonical table leaves the trajectory unchanged") {
    const auto g = LatticeGeometry::make(6, 1, 2);
    const auto params = PhaseParams::from_probabilities(0.3, 0.9);
    auto e1 = exact_canonical_ensemble(g, params, 0.8);
    auto e2 = e1;
    for (double& v : e2.table.log_q) v += 3.75;
    ChainConfig cfg;
    cfg.geometry = g;
    cfg.beta = 1.0;
    cfg.sweeps = 500;
    cfg.seed = 8;
    cfg.ensemble = e1;
    const auto a = run_chain(cfg);
    cfg.ensemble = e2;
    const auto b = run_chain(cfg);
    CHECK(a.final_field == b.final_field);
    CHECK(a.accepted == b.accepted);
  }

  TEST_CASE("consistency checkpoints catch drift") {
    ChainState s(HeightField(LatticeGeometry::make(5, 1, 2)), 1);
    CHECK_NOTHROW(s.check_consistency());
    s.energy += 1;
    CHECK_THROWS_AS(s.check_consistency(), ConsistencyError);
  }

  TEST_CASE("Peierls frequency of a unit droplet") {
    const auto g = LatticeGeometry::make(8, 1, 2);
    const double beta = 1.0;
    ChainConfig cfg;
    cfg.geometry = g;
    cfg.beta = beta;
    cfg.sweeps = 40000;
    cfg.seed = 21;
    cfg.record_series = false;
    // The unit plus contour around (3,3) at level 1 is present iff h(3,3) >= 1
    // while all four neighbours are below 1.
    double hits = 0, n = 0;
    run_chain(cfg, [&](const ChainState& s) {
      const auto& f = s.field;
      const bool present = f.at(3, 3) >= 1 && f.at(2, 3) < 1 && f.at(4, 3) < 1 && f.at(3, 2) < 1 &&
                           f.at(3, 4) < 1;
      hits += present;
      n += 1;
    });
    const double freq = hits / n;
    const double se = std::sqrt(freq * (1 - freq) / n) * 3.0;  // generous for correlation
    CHECK(freq <= std::exp(-4 * beta) + 3 * se);
  }

  TEST_CASE("integrated autocorrelation time") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    std::vector<double> x(200000);
    const double phi = 0.5;
    x[0] = z(rng);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = phi * x[i - 1] + z(rng);
    CHECK(integrated_autocorrelation_time(x) == doctest::Approx(1.5).epsilon(0.05));
    std::vector<double> c(100, 2.0);
    CHECK(integrated_autocorrelation_time(c) == 0.5);
  }

  TEST_CASE("contour classification") {
    const auto g64 = LatticeGeometry::make(64, 1, 2);
    ContourFamily none;
    const auto e = classify_contours(none, g64, 1.0);
    CHECK(e.small.empty());
    CHECK(e.intermediate.empty());
    CHECK(e.large.empty());

    HeightField f(g64);
    f.set(5, 5, 1);                                  // unit square, length 4 <= log 64
    for (int x = 10; x <= 14; ++x) f.set(x, 10, 1);  // length 12
    for (int x = 20; x <= 40; ++x)
      for (int y = 20; y <= 31; ++y) f.set(x, y, 1);  // length 66 >= 64
    const auto fam = extract_contours(f);
    const auto cls = classify_contours(fam, g64, 1.0);
    REQUIRE(cls.small.size() == 1);
    CHECK(fam.contours[cls.small[0]].length() == 4);
    REQUIRE(cls.intermediate.size() == 1);
    CHECK(fam.contours[cls.intermediate[0]].length() == 12);
    REQUIRE(cls.large.size() == 1);
    CHECK(fam.contours[cls.large[0]].length() == 66);
    CHECK(cls.small_threshold == doctest::Approx(std::log(64.0)));
    CHECK(cls.large_threshold == 64.0);

    // With N = 8 the unit square is above log 8 and becomes intermediate.
    const auto g8 = LatticeGeometry::make(8, 1, 2);
    HeightField u(g8);
    u.set(3, 3, 1);
    CHECK(classify_contours(extract_contours(u), g8, 1.0).intermediate.size() == 1);
    CHECK_THROWS_AS(classify_contours(none, g8, 0.0), ConfigError);
  }
}
