#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fogdrip/errors.hpp"
#include "fogdrip/particles.hpp"

using namespace fogdrip;

namespace {

// Plain O(n^2) convolution of the two pmfs in probability space.
std::vector<double> dp_convolution(int nS, double ps, int nV, double pv) {
  auto pmf = [](int n, double p) {
    std::vector<double> v(n + 1, 0.0);
    v[0] = 1.0;
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k >= 0; --k) v[k] = v[k] * (1 - p) + (k > 0 ? v[k - 1] * p : 0.0);
    return v;
  };
  const auto a = pmf(nS, ps), b = pmf(nV, pv);
  std::vector<double> c(nS + nV + 1, 0.0);
  for (int i = 0; i <= nS; ++i)
    for (int j = 0; j <= nV; ++j) c[i + j] += a[i] * b[j];
  return c;
}

double log_binomial_pmf(long long n, long long k, double p) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
         (n - k) * std::log1p(-p);
}

}  // namespace

TEST_SUITE("particles") {
  TEST_CASE("phase parameters from probabilities") {
    const auto p = PhaseParams::from_probabilities(0.2, 0.8);
    CHECK(p.psv() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(p.D() == doctest::Approx(0.32).epsilon(1e-15));
    CHECK(p.rho0() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.a0(2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(std::exp(-p.a) + std::exp(-p.b) == doctest::Approx(std::exp(-p.f)).epsilon(1e-14));
    CHECK(std::exp(-p.c) + std::exp(-p.d) == doctest::Approx(std::exp(-p.f)).epsilon(1e-14));

    const auto q = PhaseParams::from_probabilities(0.1, 0.7, 0.3);
    CHECK(std::exp(-q.a) + std::exp(-q.b) == doctest::Approx(std::exp(-0.3)).epsilon(1e-14));
    CHECK_THROWS_AS(PhaseParams::from_probabilities(0.5, 0.5), ConfigError);
    CHECK_THROWS_AS(PhaseParams::from_probabilities(0.6, 0.4), ConfigError);
    CHECK_THROWS_AS(PhaseParams::from_probabilities(0.0, 0.4), ConfigError);
  }

  TEST_CASE("phase parameters from potentials") {
    CHECK_THROWS_AS(PhaseParams::from_potentials(1.0, 2.0, 1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(PhaseParams::from_potentials(1.0, 2.0, 0.5, 2.0), ConfigError);
    const auto ref = PhaseParams::from_probabilities(0.2, 0.8, 0.7);
    const auto p = PhaseParams::from_potentials(ref.a, ref.b, ref.c, ref.d);
    CHECK(p.f == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(p.pv == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(p.ps == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(std::exp(-p.a) + std::exp(-p.b) == doctest::Approx(std::exp(-p.f)).epsilon(1e-14));
  }

  TEST_CASE("equal occupation probabilities reduce to one binomial") {
    const LogFactorialTable lf(200);
    for (long long t : {0LL, 37LL, 60LL, 61LL, 200LL}) {
      const double got = binomial_convolution_log_pmf(lf, 130, 0.3, 70, 0.3, t);
      CHECK(got == doctest::Approx(log_binomial_pmf(200, t, 0.3)).epsilon(1e-10));
    }
    CHECK(std::isinf(binomial_convolution_log_pmf(lf, 130, 0.3, 70, 0.3, 201)));
    CHECK(std::isinf(binomial_convolution_log_pmf(lf, 130, 0.3, 70, 0.3, -1)));
  }

  TEST_CASE("exact law matches a direct convolution") {
    const auto g = LatticeGeometry::make(4, 1, 2);  // |B| = 128
    const auto p = PhaseParams::from_probabilities(0.2, 0.8);
    for (long long a : {0LL, 5LL, -9LL}) {
      const auto r = region_sizes(a, g);
      const auto dp = dp_convolution(static_cast<int>(r.solid), p.ps, static_cast<int>(r.vapour), p.pv);
      const long long mean = std::llround(p.a0(1) * 64 + a * p.psv());
      for (long long t = mean - 10; t <= mean + 10; ++t)
        CHECK(std::exp(sigma_exact(a, g, p, t)) == doctest::Approx(dp[t]).epsilon(1e-11));
    }
  }

  TEST_CASE("normalisation, mean and variance of the exact law") {
    const auto g = LatticeGeometry::make(5, 2, 2);
    const auto p = PhaseParams::from_probabilities(0.15, 0.75);
    const LogFactorialTable lf(g.box_volume());
    for (long long a : {0LL, 40LL, -73LL}) {
      const auto r = region_sizes(a, g);
      double mass = 0;
      for (long long t = 0; t <= g.box_volume(); ++t)
        mass += std::exp(binomial_convolution_log_pmf(lf, r.solid, p.ps, r.vapour, p.pv, t));
      CHECK(std::abs(mass - 1.0) < 1e-10);

      const SigmaLaw law = sigma_exact_law(a, g, p);
      CHECK(std::abs(law.total_mass() - 1.0) < 1e-10);
      const double mean = p.a0(2) * 125 + a * p.psv();
      CHECK(law.mean() == doctest::Approx(mean).epsilon(1e-12));
      CHECK(law.variance() ==
            doctest::Approx(r.solid * p.Ds() + r.vapour * p.Dv()).epsilon(1e-9));
      // The table and the single-target evaluator agree away from the truncated tails.
      const double peak = *std::max_element(law.log_p.begin(), law.log_p.end());
      for (std::size_t i = 0; i < law.log_p.size(); i += 7)
        if (law.log_p[i] > peak - 12.0)
          CHECK(law.log_p[i] ==
              doctest::Approx(sigma_exact(a, g, p, law.first + static_cast<long long>(i)))
                  .epsilon(1e-9));
    }
  }

  TEST_CASE("local limit surrogate") {
    const auto g = LatticeGeometry::make(8, 2, 4);
    const auto p = PhaseParams::from_probabilities(0.2, 0.8);
    const double B = 2.0 * 4 * 512;
    const long long a = 30;
    const double delta = a * p.psv() / 64.0;
    CHECK(sigma_llt(a, g, p, delta) ==
          doctest::Approx(-0.5 * std::log(std::numbers::pi * p.D() * B)).epsilon(1e-14));
    const double d = 0.7;
    const double e1 = std::pow(10 * p.psv() - d * 64, 2) / (p.D() * B);
    const double e2 = std::pow(-50 * p.psv() - d * 64, 2) / (p.D() * B);
    CHECK(sigma_llt(10, g, p, d) - sigma_llt(-50, g, p, d) == doctest::Approx(e2 - e1).epsilon(1e-12));
  }

  TEST_CASE("canonical weight tables") {
    const auto g = LatticeGeometry::make(8, 2, 4);
    const auto p = PhaseParams::from_probabilities(0.2, 0.8);
    for (double delta : {0.0, 0.5, 1.25, -0.75}) {
      const auto ex = canonical_log_weight_table(g, p, delta, -256, 256, WeightMethod::kExact);
      const auto ll = canonical_log_weight_table(g, p, delta, -256, 256, WeightMethod::kLLT);
      CHECK(ex.method == WeightMethod::kExact);
      CHECK(ll.method == WeightMethod::kLLT);
      const long long expect = std::llround(delta * 64 / p.psv());
      CHECK(std::abs(ex.argmax() - expect) <= 1);
      CHECK(ex.argmax() == ll.argmax());
    }
    const auto sym = canonical_log_weight_table(g, p, 0.0, -200, 200);
    CHECK(sym.method == WeightMethod::kExact);
    for (long long a = 1; a <= 200; a += 7) CHECK(sym(a) == doctest::Approx(sym(-a)).epsilon(1e-10));

    const auto t = canonical_target(LatticeGeometry::make(5, 1, 2), p, 0.3);
    CHECK(t.sigma == std::llround(125 + 0.3 * 25));
    CHECK(t.delta_effective == doctest::Approx((t.sigma - 125.0) / 25.0));
  }
}
