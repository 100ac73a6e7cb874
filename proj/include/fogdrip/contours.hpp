#pragma once

#include <cstdint>
#include <vector>

#include "fogdrip/lattice.hpp"

namespace fogdrip {

/// Dual-lattice point in doubled coordinates: the corner (x + 1/2, y + 1/2) of
/// the unit cell around site (x, y) is stored as (2x + 1, 2y + 1).
struct Point2 {
  int x2 = 0;
  int y2 = 0;
  bool operator==(const Point2&) const = default;
};

enum class Sign { kPlus, kMinus };

inline int sign_value(Sign s) noexcept { return s == Sign::kPlus ? 1 : -1; }

/// Closed oriented loop on the dual lattice. The set of higher columns lies to
/// the right of the direction of travel, so a clockwise loop bounds a raised
/// region and carries the plus sign.
class OrientedContour {
 public:
  OrientedContour() = default;
  /// Builds a contour from its cyclic vertex list (first vertex not repeated).
  /// Throws DomainError unless consecutive vertices are unit dual steps, the
  /// loop is closed and visits no vertex twice.
  explicit OrientedContour(std::vector<Point2> vertices, int level = 0);

  /// Boundary of the rectangle of sites [x0, x1] x [y0, y1], traversed so it
  /// carries the requested sign.
  static OrientedContour rectangle(int x0, int y0, int x1, int y1, Sign sign, int level = 0);

  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  Sign sign() const noexcept { return sign_; }
  int length() const noexcept { return static_cast<int>(vertices_.size()); }
  std::int64_t interior_area() const noexcept { return area_; }
  std::int64_t signed_volume() const noexcept { return sign_value(sign_) * area_; }
  /// Level t of the set {h >= t} this contour bounds (0 when built by hand).
  int level() const noexcept { return level_; }

  /// Sites enclosed by the loop, in row-major order.
  std::vector<Site> interior_sites() const;

  bool operator==(const OrientedContour& o) const {
    return vertices_ == o.vertices_ && sign_ == o.sign_;
  }

 private:
  std::vector<Point2> vertices_;
  Sign sign_ = Sign::kPlus;
  std::int64_t area_ = 0;
  int level_ = 0;
};

struct ContourFamily {
  std::vector<OrientedContour> contours;

  std::size_t size() const noexcept { return contours.size(); }
  bool empty() const noexcept { return contours.empty(); }
  std::int64_t total_length() const;
  std::int64_t total_signed_volume() const;
};

/// All contours of the level sets {h >= t}, t = -hmax+1 .. hmax, lowest level
/// first. Diagonal contacts of a level set are resolved by turning right, and a
/// boundary walk that touches itself is cut into simple loops.
ContourFamily extract_contours(const HeightField& field);

/// Throws IncompatibleFamily naming the first offending pair, if any.
void check_compatible(const ContourFamily& family, const LatticeGeometry& geometry);

/// h = sum of sign * indicator(interior) over the family. Checks compatibility
/// first; throws DomainError if the result leaves the box or exceeds hmax.
HeightField reconstruct_height(const ContourFamily& family, const LatticeGeometry& geometry);

}  // namespace fogdrip
