#include <random>

#include "doctest.h"
#include "fogdrip/contours.hpp"
#include "fogdrip/errors.hpp"

using namespace fogdrip;

namespace {

HeightField field_from_digits(const LatticeGeometry& g, long long code) {
  HeightField f(g);
  const int L = g.interior_side();
  const int base = 2 * g.hmax + 1;
  for (int k = 0; k < L * L; ++k) {
    f.set(1 + k % L, 1 + k / L, static_cast<int>(code % base) - g.hmax);
    code /= base;
  }
  return f;
}

void check_family_invariants(const HeightField& f) {
  const ContourFamily fam = extract_contours(f);
  CHECK(fam.total_length() == perimeter_sum(f));
  CHECK(fam.total_signed_volume() == alpha(f));
  for (const auto& c : fam.contours) {
    const double q = c.length() / 4.0;
    CHECK(static_cast<double>(c.interior_area()) <= q * q);
  }
  CHECK(reconstruct_height(fam, f.geometry()) == f);
}

}  // namespace

TEST_SUITE("contours") {
  TEST_CASE("simple extraction examples") {
    const auto g = LatticeGeometry::make(6, 1, 2);
    HeightField f(g);
    CHECK(extract_contours(f).empty());

    f.set(2, 3, 1);
    auto fam = extract_contours(f);
    REQUIRE(fam.size() == 1);
    CHECK(fam.contours[0].sign() == Sign::kPlus);
    CHECK(fam.contours[0].length() == 4);
    CHECK(fam.contours[0].interior_area() == 1);
    CHECK(fam.contours[0].signed_volume() == 1);

    HeightField b(g);
    for (int x = 2; x <= 3; ++x)
      for (int y = 2; y <= 3; ++y) b.set(x, y, -1);
    fam = extract_contours(b);
    REQUIRE(fam.size() == 1);
    CHECK(fam.contours[0].sign() == Sign::kMinus);
    CHECK(fam.contours[0].length() == 8);
    CHECK(fam.contours[0].signed_volume() == -4);
  }

  TEST_CASE("a height jump of two gives two stacked contours") {
    const auto g = LatticeGeometry::make(5, 1, 2);
    HeightField f(g);
    f.set(2, 2, 2);
    const auto fam = extract_contours(f);
    REQUIRE(fam.size() == 2);
    CHECK(fam.contours[0] == fam.contours[1]);
    CHECK(fam.contours[0].level() == 1);
    CHECK(fam.contours[1].level() == 2);
  }

  TEST_CASE("diagonal contacts split into separate loops") {
    const auto g = LatticeGeometry::make(6, 1, 1);
    for (int h : {1, -1}) {
      HeightField f(g);
      f.set(2, 2, h);
      f.set(3, 3, h);
      const auto fam = extract_contours(f);
      REQUIRE(fam.size() == 2);
      for (const auto& c : fam.contours) {
        CHECK(c.length() == 4);
        CHECK(c.signed_volume() == h);
      }
    }
    // A ring of raised sites touching itself diagonally around a hole.
    HeightField f(g);
    for (auto [x, y] : {std::pair{2, 2}, {3, 2}, {4, 2}, {4, 3}, {4, 4}, {3, 4}, {2, 3}}) f.set(x, y, 1);
    check_family_invariants(f);
  }

  TEST_CASE("rectangle contours carry the requested sign") {
    const auto p = OrientedContour::rectangle(1, 1, 3, 2, Sign::kPlus);
    CHECK(p.sign() == Sign::kPlus);
    CHECK(p.length() == 10);
    CHECK(p.interior_area() == 6);
    CHECK(p.interior_sites().size() == 6);
    const auto m = OrientedContour::rectangle(1, 1, 3, 2, Sign::kMinus);
    CHECK(m.signed_volume() == -6);
  }

  TEST_CASE("malformed vertex lists are rejected") {
    CHECK_THROWS_AS(OrientedContour({{1, 1}, {3, 1}, {3, 3}}), DomainError);
    CHECK_THROWS_AS(OrientedContour({{1, 1}, {5, 1}, {5, 3}, {1, 3}}), DomainError);
    CHECK_THROWS_AS(OrientedContour({{0, 1}, {2, 1}, {2, 3}, {0, 3}}), DomainError);
  }

  TEST_CASE("reconstruction of nested contours") {
    const auto g = LatticeGeometry::make(7, 1, 2);
    ContourFamily fam;
    CHECK(reconstruct_height(fam, g) == HeightField(g));
    fam.contours.push_back(OrientedContour::rectangle(1, 1, 5, 5, Sign::kPlus));
    fam.contours.push_back(OrientedContour::rectangle(2, 2, 3, 4, Sign::kPlus));
    const HeightField h = reconstruct_height(fam, g);
    for (int y = 0; y < 7; ++y)
      for (int x = 0; x < 7; ++x) {
        const int outer = x >= 1 && x <= 5 && y >= 1 && y <= 5;
        const int inner = x >= 2 && x <= 3 && y >= 2 && y <= 4;
        CHECK(h.at(x, y) == outer + inner);
      }
  }

  TEST_CASE("incompatible families name the offending pair") {
    const auto g = LatticeGeometry::make(8, 1, 2);
    ContourFamily overlap;
    overlap.contours.push_back(OrientedContour::rectangle(1, 1, 1, 1, Sign::kPlus));
    overlap.contours.push_back(OrientedContour::rectangle(1, 1, 3, 3, Sign::kPlus));
    overlap.contours.push_back(OrientedContour::rectangle(2, 2, 4, 4, Sign::kPlus));
    try {
      reconstruct_height(overlap, g);
      FAIL("expected IncompatibleFamily");
    } catch (const IncompatibleFamily& e) {
      CHECK(e.first() == 1);
      CHECK(e.second() == 2);
      CHECK(e.rule() == IncompatibleFamily::Rule::kInteriorsOverlap);
    }

    ContourFamily opposite;
    opposite.contours.push_back(OrientedContour::rectangle(1, 1, 1, 1, Sign::kPlus));
    opposite.contours.push_back(OrientedContour::rectangle(2, 1, 2, 1, Sign::kPlus));
    try {
      check_compatible(opposite, g);
      FAIL("expected IncompatibleFamily");
    } catch (const IncompatibleFamily& e) {
      CHECK(e.first() == 0);
      CHECK(e.second() == 1);
      CHECK(e.rule() == IncompatibleFamily::Rule::kOppositeBond);
    }

    ContourFamily lifted;
    lifted.contours.push_back(OrientedContour::rectangle(0, 0, 1, 1, Sign::kPlus));
    CHECK_THROWS_AS(reconstruct_height(lifted, g), DomainError);
  }

  TEST_CASE("adding a compatible contour shifts alpha by its signed volume") {
    const auto g = LatticeGeometry::make(8, 1, 3);
    HeightField f(g);
    for (int x = 2; x <= 5; ++x)
      for (int y = 2; y <= 4; ++y) f.set(x, y, 1);
    ContourFamily fam = extract_contours(f);
    const auto before = alpha(reconstruct_height(fam, g));
    const auto extra = OrientedContour::rectangle(3, 3, 4, 3, Sign::kMinus);
    fam.contours.push_back(extra);
    CHECK(alpha(reconstruct_height(fam, g)) == before + extra.signed_volume());
  }

  TEST_CASE("exhaustive round trip on the 3x3 interior") {
    const auto g = LatticeGeometry::from_interior(3, 1);
    int failures = 0;
    for (long long code = 0; code < 19683; ++code) {
      const HeightField f = field_from_digits(g, code);
      const ContourFamily fam = extract_contours(f);
      if (fam.total_length() != perimeter_sum(f) || !(reconstruct_height(fam, g) == f)) ++failures;
    }
    CHECK(failures == 0);
  }

  TEST_CASE("randomised round trip on larger boxes") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 200; ++rep) {
      const int N = 4 + static_cast<int>(rng() % 6);
      const int hmax = 1 + static_cast<int>(rng() % std::min(N, 4));
      const auto g = LatticeGeometry::make(N, 1 + static_cast<int>(rng() % 2), hmax);
      HeightField f(g);
      // Mix of noise and blocks so that nested and touching level sets occur.
      std::uniform_int_distribution<int> hd(-hmax, hmax);
      const int s = g.side();
      for (int y = 1; y < s - 1; ++y)
        for (int x = 1; x < s - 1; ++x) f.set(x, y, (rng() % 3 == 0) ? hd(rng) : 0);
      check_family_invariants(f);
    }
  }
}
