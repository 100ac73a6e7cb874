#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace fogdrip {

/// Box geometry: an (R*N) x (R*N) column lattice whose outer ring is pinned at
/// height 0, with heights capped at +/- hmax.
struct LatticeGeometry {
  int N = 1;
  int R = 1;
  int hmax = 1;

  /// Validating constructor; throws ConfigError.
  static LatticeGeometry make(int N, int R, int hmax);
  /// Geometry with an L x L interior (N = L + 2, R = 1).
  static LatticeGeometry from_interior(int L, int hmax);

  int side() const noexcept { return R * N; }
  int interior_side() const noexcept { return side() - 2; }
  std::int64_t interior_sites() const noexcept {
    return static_cast<std::int64_t>(interior_side()) * interior_side();
  }
  /// R^2 N^3: sites below (or above) a flat interface.
  std::int64_t half_volume() const noexcept {
    return static_cast<std::int64_t>(R) * R * N * N * N;
  }
  /// |B_N| = 2 R^2 N^3.
  std::int64_t box_volume() const noexcept { return 2 * half_volume(); }

  bool operator==(const LatticeGeometry&) const = default;
};

struct Site {
  int x = 0;
  int y = 0;
  bool operator==(const Site&) const = default;
};

/// Integer heights on the interior of the box. Storage covers the whole box so
/// neighbour reads at the pinned ring return 0 without branching.
class HeightField {
 public:
  HeightField() : HeightField(LatticeGeometry{}) {}
  explicit HeightField(LatticeGeometry geometry);

  const LatticeGeometry& geometry() const noexcept { return geometry_; }

  bool is_interior(int x, int y) const noexcept {
    const int s = geometry_.side();
    return x >= 1 && y >= 1 && x < s - 1 && y < s - 1;
  }
  /// Height at any integer point; 0 outside the interior.
  int at(int x, int y) const noexcept;
  int at(Site s) const noexcept { return at(s.x, s.y); }
  /// Throws DomainError for non-interior sites or heights beyond hmax.
  void set(int x, int y, int h);
  void set(Site s, int h) { set(s.x, s.y, h); }

  // Unchecked flat access for hot loops; idx = y * side + x.
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * geometry_.side() + x;
  }
  int raw(std::size_t idx) const noexcept { return cells_[idx]; }
  void add_raw(std::size_t idx, int dh) noexcept { cells_[idx] += dh; }
  std::size_t stride() const noexcept { return static_cast<std::size_t>(geometry_.side()); }
  std::span<const int> cells() const noexcept { return cells_; }

  /// Site of interior number k in row-major order, k in [0, interior_sites()).
  Site interior_site(std::int64_t k) const noexcept {
    const int L = geometry_.interior_side();
    return {1 + static_cast<int>(k % L), 1 + static_cast<int>(k / L)};
  }

  bool operator==(const HeightField& other) const {
    return geometry_ == other.geometry_ && cells_ == other.cells_;
  }

 private:
  LatticeGeometry geometry_;
  std::vector<int> cells_;
};

/// Signed volume under the interface: the sum of heights over interior sites.
std::int64_t alpha(const HeightField& field);

/// Sum of |h_i - h_j| over nearest-neighbour pairs, bonds to the pinned ring included.
std::int64_t perimeter_sum(const HeightField& field);

struct MoveDelta {
  bool valid = false;
  int energy = 0;  ///< change of perimeter_sum
  int alpha = 0;   ///< change of alpha (= dh when valid)
};

/// Effect of h(site) += dh, computed from the four neighbours only.
/// A move that leaves [-hmax, hmax] is returned with valid = false.
MoveDelta propose_delta(const HeightField& field, Site site, int dh);

/// Interior heights as CSV, one line per lattice row (y = 1 first).
void write_snapshot_csv(const HeightField& field, std::ostream& os);
/// Inverse of write_snapshot_csv; the geometry supplies the size and cap.
HeightField read_snapshot_csv(std::istream& is, const LatticeGeometry& geometry);

}  // namespace fogdrip
