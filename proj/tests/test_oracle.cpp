#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "doctest.h"
#include "fogdrip/contours.hpp"
#include "fogdrip/errors.hpp"
#include "fogdrip/oracle.hpp"

using namespace fogdrip;

namespace {

// Independent recount: walk the codes from the top down, decode by hand and
// sum the bond energies directly.
double reversed_log_partition(int L, int hmax, double beta) {
  const int base = 2 * hmax + 1;
  long long total = 1;
  for (int k = 0; k < L * L; ++k) total *= base;
  std::vector<int> h((L + 2) * (L + 2));
  double m = 0, acc = 0;  // flat field has energy 0, the maximal weight
  for (long long code = total - 1; code >= 0; --code) {
    std::fill(h.begin(), h.end(), 0);
    long long c = code;
    for (int k = 0; k < L * L; ++k) {
      h[(1 + k / L) * (L + 2) + 1 + k % L] = static_cast<int>(c % base) - hmax;
      c /= base;
    }
    long long e = 0;
    for (int y = 0; y < L + 2; ++y)
      for (int x = 0; x < L + 2; ++x) {
        if (x + 1 < L + 2) e += std::abs(h[y * (L + 2) + x] - h[y * (L + 2) + x + 1]);
        if (y + 1 < L + 2) e += std::abs(h[y * (L + 2) + x] - h[(y + 1) * (L + 2) + x]);
      }
    acc += std::exp(-beta * e - m);
  }
  return m + std::log(acc);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("single site enumeration") {
    const EnumeratedEnsemble ens(LatticeGeometry::from_interior(1, 1));
    REQUIRE(ens.count() == 3);
    CHECK(ens.alpha(0) == -1);
    CHECK(ens.alpha(1) == 0);
    CHECK(ens.alpha(2) == 1);
    CHECK(ens.energy(0) == 4);
    CHECK(ens.energy(1) == 0);
    CHECK(ens.energy(2) == 4);
  }

  TEST_CASE("2x2 enumeration and partition function") {
    const auto g = LatticeGeometry::from_interior(2, 1);
    const EnumeratedEnsemble ens(g);
    CHECK(ens.count() == 81);
    for (std::int64_t code = 0; code < ens.count(); ++code) {
      const HeightField f = ens.field(code);
      CHECK(ens.code_of(f) == code);
      CHECK(ens.energy(code) == perimeter_sum(f));
      CHECK(ens.alpha(code) == alpha(f));
    }
    CHECK(ens.log_partition(2.0) == doctest::Approx(reversed_log_partition(2, 1, 2.0)).epsilon(1e-13));
    CHECK(ens.log_partition(0.0) == doctest::Approx(std::log(81.0)).epsilon(1e-14));

    const EnumeratedEnsemble big(LatticeGeometry::from_interior(2, 2));
    CHECK(big.count() == 625);
    CHECK(big.log_partition(1.3) == doctest::Approx(reversed_log_partition(2, 2, 1.3)).epsilon(1e-13));
  }

  TEST_CASE("budget refusal") {
    CHECK_THROWS_AS(EnumeratedEnsemble(LatticeGeometry::from_interior(4, 2)), BudgetExceeded);
    CHECK_THROWS_AS(EnumeratedEnsemble(LatticeGeometry::from_interior(3, 1), 1000), BudgetExceeded);
    CHECK(enumeration_size(LatticeGeometry::from_interior(4, 2)) == 152587890625LL);
  }

  TEST_CASE("exact laws") {
    const auto g = LatticeGeometry::from_interior(3, 1);
    const EnumeratedEnsemble ens(g);
    CHECK(ens.count() == 19683);

    const auto cold = exact_law(ens, 50.0, GrandEnsemble{});
    const std::int64_t flat = ens.code_of(HeightField(g));
    double rest = 0;
    for (std::int64_t c = 0; c < ens.count(); ++c)
      if (c != flat) rest += cold[c];
    CHECK(rest <= 1e-20);

    const auto law = exact_law(ens, 1.5, GrandEnsemble{});
    CHECK(std::accumulate(law.begin(), law.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const auto marg = alpha_marginal(ens, law);
    for (auto [b, p] : marg) CHECK(p == doctest::Approx(marg.at(-b)).epsilon(1e-12));

    const auto params = PhaseParams::from_probabilities(0.2, 0.8);
    for (double delta : {0.5, -0.5}) {
      const auto can = exact_law(ens, 1.5, exact_canonical_ensemble(g, params, delta));
      CHECK(std::accumulate(can.begin(), can.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      double ea = 0;
      for (std::int64_t c = 0; c < ens.count(); ++c) ea += can[c] * ens.alpha(c);
      CHECK(ea * delta > 0);
    }

    const auto pinned = exact_law(ens, 1.5, PinnedEnsemble{2, 3});
    for (auto [b, p] : alpha_marginal(ens, pinned)) CHECK((b >= 2 && b <= 3));

    auto llt = exact_canonical_ensemble(g, params, 0.5);
    llt.table.method = WeightMethod::kLLT;
    CHECK_THROWS_AS(exact_law(ens, 1.5, llt), ConfigError);
  }

  TEST_CASE("exact Peierls bound for every contour of the 3x3 box") {
    const auto g = LatticeGeometry::from_interior(3, 1);
    const EnumeratedEnsemble ens(g);
    const double beta = 1.0;
    const auto law = exact_law(ens, beta, GrandEnsemble{});
    // Contour identity: orientation and vertex list.
    std::map<std::vector<std::pair<int, int>>, std::pair<double, int>> mass;
    for (std::int64_t c = 0; c < ens.count(); ++c) {
      const auto fam = extract_contours(ens.field(c));
      std::map<std::vector<std::pair<int, int>>, int> present;
      for (const auto& gm : fam.contours) {
        std::vector<std::pair<int, int>> key;
        for (const auto& p : gm.vertices()) key.emplace_back(p.x2, p.y2);
        std::rotate(key.begin(), std::min_element(key.begin(), key.end()), key.end());
        present[key] = gm.length();
      }
      for (const auto& [key, len] : present) {
        mass[key].first += law[c];
        mass[key].second = len;
      }
    }
    CHECK(mass.size() > 20);
    int violations = 0;
    for (const auto& [key, v] : mass)
      if (v.first > std::exp(-beta * v.second) * (1 + 1e-12)) ++violations;
    CHECK(violations == 0);
  }
}
