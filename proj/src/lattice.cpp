#include "fogdrip/lattice.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fogdrip/errors.hpp"

namespace fogdrip {

LatticeGeometry LatticeGeometry::make(int N, int R, int hmax) {
  if (N < 1 || R < 1) throw ConfigError("N and R must be positive");
  if (R * N < 2) throw ConfigError("box side R*N must be at least 2");
  if (hmax < 1 || hmax > N) throw ConfigError("hmax must lie in [1, N]");
  return LatticeGeometry{N, R, hmax};
}

LatticeGeometry LatticeGeometry::from_interior(int L, int hmax) {
  if (L < 1) throw ConfigError("interior side must be positive");
  return make(L + 2, 1, hmax);
}

HeightField::HeightField(LatticeGeometry geometry)
    : geometry_(geometry),
      cells_(static_cast<std::size_t>(geometry.side()) * geometry.side(), 0) {}

int HeightField::at(int x, int y) const noexcept {
  const int s = geometry_.side();
  if (x < 0 || y < 0 || x >= s || y >= s) return 0;
  return cells_[index(x, y)];
}

void HeightField::set(int x, int y, int h) {
  if (!is_interior(x, y)) throw DomainError("site is not in the interior");
  if (std::abs(h) > geometry_.hmax) throw DomainError("height exceeds hmax");
  cells_[index(x, y)] = h;
}

std::int64_t alpha(const HeightField& field) {
  std::int64_t sum = 0;
  for (int v : field.cells()) sum += v;  // the pinned ring holds zeros
  return sum;
}

std::int64_t perimeter_sum(const HeightField& field) {
  const int s = field.geometry().side();
  const auto cells = field.cells();
  std::int64_t sum = 0;
  for (int y = 0; y < s; ++y) {
    const int* row = cells.data() + static_cast<std::size_t>(y) * s;
    for (int x = 0; x + 1 < s; ++x) sum += std::abs(row[x] - row[x + 1]);
    if (y + 1 < s) {
      const int* next = row + s;
      for (int x = 0; x < s; ++x) sum += std::abs(row[x] - next[x]);
    }
  }
  return sum;
}

MoveDelta propose_delta(const HeightField& field, Site site, int dh) {
  MoveDelta out;
  const std::size_t i = field.index(site.x, site.y);
  const int h = field.raw(i);
  const int hn = h + dh;
  if (std::abs(hn) > field.geometry().hmax) return out;
  const std::size_t st = field.stride();
  const int nb[4] = {field.raw(i - 1), field.raw(i + 1), field.raw(i - st), field.raw(i + st)};
  int de = 0;
  for (int v : nb) de += std::abs(hn - v) - std::abs(h - v);
  out.valid = true;
  out.energy = de;
  out.alpha = dh;
  return out;
}

void write_snapshot_csv(const HeightField& field, std::ostream& os) {
  const int s = field.geometry().side();
  for (int y = 1; y < s - 1; ++y) {
    for (int x = 1; x < s - 1; ++x) {
      if (x > 1) os << ',';
      os << field.at(x, y);
    }
    os << '\n';
  }
}

HeightField read_snapshot_csv(std::istream& is, const LatticeGeometry& geometry) {
  HeightField field(geometry);
  const int L = geometry.interior_side();
  std::string line;
  int y = 1;
  while (y <= L && std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    int x = 1;
    while (std::getline(row, cell, ',')) {
      if (x > L) throw ConfigError("snapshot row longer than the interior side");
      field.set(x, y, std::stoi(cell));
      ++x;
    }
    if (x != L + 1) throw ConfigError("snapshot row shorter than the interior side");
    ++y;
  }
  if (y != L + 1) throw ConfigError("snapshot has too few rows");
  return field;
}

}  // namespace fogdrip
