#include <cmath>

#include "doctest.h"
#include "fogdrip/errors.hpp"
#include "fogdrip/oracle.hpp"
#include "fogdrip/wang_landau.hpp"

using namespace fogdrip;

TEST_SUITE("wang_landau") {
  TEST_CASE("seeded droplets hit the requested volume") {
    const auto g = LatticeGeometry::make(10, 1, 2);
    for (long long b : {0LL, 1LL, 7LL, -13LL, 64LL, 100LL, -128LL}) {
      const HeightField f = seed_droplet(g, b);
      CHECK(alpha(f) == b);
    }
    CHECK_THROWS_AS(seed_droplet(g, 129), DomainError);
  }

  TEST_CASE("flat-histogram estimate matches the exact alpha marginal") {
    const auto g = LatticeGeometry::from_interior(3, 1);
    const EnumeratedEnsemble ens(g);
    const double beta = 1.0;
    const auto exact = alpha_marginal(ens, exact_law(ens, beta, GrandEnsemble{}));
    for (int windows : {1, 3}) {
      WangLandauConfig cfg;
      cfg.geometry = g;
      cfg.beta = beta;
      cfg.b_min = -9;
      cfg.b_max = 9;
      cfg.windows = windows;
      cfg.overlap = 3;
      cfg.log_f_final = 1e-6;
      cfg.check_every = 20000;
      cfg.seed = 17;
      const DensityOfStates dos = wang_landau_alpha(cfg);
      CHECK(dos.converged);
      CHECK(dos(0) == 0.0);
      CHECK(dos.stages.size() >= 20);
      double worst = 0;
      for (long long b = -9; b <= 9; ++b) {
        worst = std::max(worst, std::abs(dos(b) - std::log(exact.at(b) / exact.at(0))));
      }
      CHECK(worst < 0.15);
    }
  }

  TEST_CASE("budget exhaustion is flagged") {
    WangLandauConfig cfg;
    cfg.geometry = LatticeGeometry::make(8, 1, 2);
    cfg.beta = 1.0;
    cfg.b_min = -20;
    cfg.b_max = 20;
    cfg.max_sweeps_per_window = 30;
    const DensityOfStates dos = wang_landau_alpha(cfg);
    CHECK_FALSE(dos.converged);
    CHECK(dos.final_log_f > cfg.log_f_final);
  }

  TEST_CASE("configuration errors") {
    WangLandauConfig cfg;
    cfg.geometry = LatticeGeometry::make(5, 1, 1);
    cfg.b_min = 0;
    cfg.b_max = 10;
    CHECK_THROWS_AS(wang_landau_alpha(cfg), ConfigError);  // 9 interior sites only
    cfg.b_max = 5;
    cfg.windows = 3;
    cfg.overlap = 6;
    CHECK_THROWS_AS(wang_landau_alpha(cfg), ConfigError);
  }
}
