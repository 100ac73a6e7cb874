#include "fogdrip/contours.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "fogdrip/errors.hpp"

namespace fogdrip {

namespace {

// Directions E, N, W, S; a right turn is d -> d + 3 (mod 4).
constexpr int kDx[4] = {2, 0, -2, 0};
constexpr int kDy[4] = {0, 2, 0, -2};

int direction_of(Point2 a, Point2 b) {
  const int dx = b.x2 - a.x2;
  const int dy = b.y2 - a.y2;
  for (int d = 0; d < 4; ++d)
    if (dx == kDx[d] && dy == kDy[d]) return d;
  return -1;
}

std::int64_t twice_doubled_area(const std::vector<Point2>& v) {
  std::int64_t acc = 0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    acc += static_cast<std::int64_t>(a.x2) * b.y2 - static_cast<std::int64_t>(b.x2) * a.y2;
  }
  return acc;
}

using Mask = std::vector<std::uint64_t>;

Mask interior_mask(const OrientedContour& c, int side) {
  Mask m((static_cast<std::size_t>(side) * side + 63) / 64, 0);
  for (const Site& s : c.interior_sites()) {
    if (s.x < 0 || s.y < 0 || s.x >= side || s.y >= side)
      throw DomainError("contour encloses sites outside the box");
    const std::size_t k = static_cast<std::size_t>(s.y) * side + s.x;
    m[k / 64] |= std::uint64_t{1} << (k % 64);
  }
  return m;
}

bool intersects(const Mask& a, const Mask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

bool subset(const Mask& a, const Mask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

}  // namespace

OrientedContour::OrientedContour(std::vector<Point2> vertices, int level)
    : vertices_(std::move(vertices)), level_(level) {
  const std::size_t n = vertices_.size();
  if (n < 4) throw DomainError("a contour needs at least four bonds");
  std::map<std::pair<int, int>, int> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = vertices_[i];
    if ((p.x2 & 1) == 0 || (p.y2 & 1) == 0)
      throw DomainError("contour vertices must have odd doubled coordinates");
    if (direction_of(p, vertices_[(i + 1) % n]) < 0)
      throw DomainError("consecutive contour vertices must be dual neighbours");
    if (!seen.emplace(std::make_pair(p.x2, p.y2), 0).second)
      throw DomainError("contour visits a vertex twice");
  }
  const std::int64_t a2 = twice_doubled_area(vertices_);
  sign_ = a2 < 0 ? Sign::kPlus : Sign::kMinus;
  area_ = std::abs(a2) / 8;
}

OrientedContour OrientedContour::rectangle(int x0, int y0, int x1, int y1, Sign sign, int level) {
  if (x1 < x0 || y1 < y0) throw DomainError("empty rectangle");
  const int l = 2 * x0 - 1, r = 2 * x1 + 1, b = 2 * y0 - 1, t = 2 * y1 + 1;
  std::vector<Point2> v;
  for (int x = l; x < r; x += 2) v.push_back({x, t});
  for (int y = t; y > b; y -= 2) v.push_back({r, y});
  for (int x = r; x > l; x -= 2) v.push_back({x, b});
  for (int y = b; y < t; y += 2) v.push_back({l, y});
  if (sign == Sign::kMinus) std::reverse(v.begin(), v.end());
  return OrientedContour(std::move(v), level);
}

std::vector<Site> OrientedContour::interior_sites() const {
  // Every vertical bond crosses exactly one row of site centres.
  std::map<int, std::vector<int>> crossings;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[(i + 1) % n];
    if (a.x2 == b.x2) crossings[(a.y2 + b.y2) / 4].push_back(a.x2);
  }
  std::vector<Site> out;
  for (auto& [y, xs] : crossings) {
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2)
      for (int x = (xs[k] + 1) / 2; x <= (xs[k + 1] - 1) / 2; ++x) out.push_back({x, y});
  }
  return out;
}

std::int64_t ContourFamily::total_length() const {
  std::int64_t s = 0;
  for (const auto& c : contours) s += c.length();
  return s;
}

std::int64_t ContourFamily::total_signed_volume() const {
  std::int64_t s = 0;
  for (const auto& c : contours) s += c.signed_volume();
  return s;
}

ContourFamily extract_contours(const HeightField& field) {
  const int s = field.geometry().side();
  const int hmax = field.geometry().hmax;
  const int nv = s + 1;  // corner (i, j) sits at doubled (2i - 1, 2j - 1)
  auto vid = [nv](int x2, int y2) { return ((y2 + 1) / 2) * nv + (x2 + 1) / 2; };
  auto vpoint = [nv](int id) { return Point2{2 * (id % nv) - 1, 2 * (id / nv) - 1}; };

  ContourFamily family;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(nv) * nv);
  std::vector<std::uint8_t> initial(out.size());
  std::vector<int> stack_pos(out.size(), -1);
  std::vector<int> walk, stack;

  for (int t = -hmax + 1; t <= hmax; ++t) {
    std::fill(out.begin(), out.end(), 0);
    auto in_set = [&](int x, int y) { return field.at(x, y) >= t; };
    bool any = false;
    for (int y = 1; y < s - 1; ++y) {
      for (int x = 0; x < s - 1; ++x) {
        const bool p = in_set(x, y), q = in_set(x + 1, y);
        if (p == q) continue;
        any = true;
        if (p) out[vid(2 * x + 1, 2 * y + 1)] |= 1u << 3;  // set to the west: head south
        else out[vid(2 * x + 1, 2 * y - 1)] |= 1u << 1;     // set to the east: head north
      }
    }
    for (int y = 0; y < s - 1; ++y) {
      for (int x = 1; x < s - 1; ++x) {
        const bool p = in_set(x, y), q = in_set(x, y + 1);
        if (p == q) continue;
        any = true;
        if (p) out[vid(2 * x - 1, 2 * y + 1)] |= 1u << 0;  // set to the south: head east
        else out[vid(2 * x + 1, 2 * y + 1)] |= 1u << 2;     // set to the north: head west
      }
    }
    if (!any) continue;
    initial = out;

    for (int v0 = 0; v0 < static_cast<int>(out.size()); ++v0) {
      while (out[v0]) {
        const int e0 = std::countr_zero(out[v0]);
        walk.clear();
        walk.push_back(v0);
        int v = v0, d = e0;
        for (;;) {
          out[v] &= static_cast<std::uint8_t>(~(1u << d));
          const Point2 p = vpoint(v);
          v = vid(p.x2 + kDx[d], p.y2 + kDy[d]);
          walk.push_back(v);
          // At a saddle the incoming bond pairs with the right turn.
          const int next = std::popcount(initial[v]) == 2 ? (d + 3) % 4 : std::countr_zero(initial[v]);
          if (v == v0 && next == e0) break;
          d = next;
        }
        // Cut the closed walk into simple loops at repeated vertices.
        stack.clear();
        for (int w : walk) {
          if (stack_pos[w] >= 0) {
            const int k = stack_pos[w];
            std::vector<Point2> loop;
            for (std::size_t i = k; i < stack.size(); ++i) loop.push_back(vpoint(stack[i]));
            for (std::size_t i = k + 1; i < stack.size(); ++i) stack_pos[stack[i]] = -1;
            stack.resize(k + 1);
            family.contours.emplace_back(std::move(loop), t);
          } else {
            stack_pos[w] = static_cast<int>(stack.size());
            stack.push_back(w);
          }
        }
        for (int w : stack) stack_pos[w] = -1;
      }
    }
  }
  return family;
}

void check_compatible(const ContourFamily& family, const LatticeGeometry& geometry) {
  const int side = geometry.side();
  const auto& cs = family.contours;
  std::vector<Mask> masks;
  masks.reserve(cs.size());
  for (const auto& c : cs) masks.push_back(interior_mask(c, side));
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      if (intersects(masks[i], masks[j]) && !subset(masks[i], masks[j]) &&
          !subset(masks[j], masks[i]))
        throw IncompatibleFamily(i, j, IncompatibleFamily::Rule::kInteriorsOverlap);

  // A bond is keyed by its midpoint; the stored value is the travel direction.
  std::unordered_map<std::int64_t, std::pair<int, std::size_t>> bonds;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& v = cs[i].vertices();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Point2& a = v[k];
      const Point2& b = v[(k + 1) % v.size()];
      const std::int64_t key =
          (static_cast<std::int64_t>(a.x2 + b.x2) << 32) ^ static_cast<std::uint32_t>(a.y2 + b.y2);
      const int d = direction_of(a, b);
      auto [it, fresh] = bonds.emplace(key, std::make_pair(d, i));
      if (!fresh && it->second.first != d)
        throw IncompatibleFamily(it->second.second, i, IncompatibleFamily::Rule::kOppositeBond);
    }
  }
}

HeightField reconstruct_height(const ContourFamily& family, const LatticeGeometry& geometry) {
  check_compatible(family, geometry);
  const int s = geometry.side();
  std::vector<int> h(static_cast<std::size_t>(s) * s, 0);
  for (const auto& c : family.contours) {
    const int sg = sign_value(c.sign());
    for (const Site& p : c.interior_sites()) h[static_cast<std::size_t>(p.y) * s + p.x] += sg;
  }
  HeightField field(geometry);
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      const int v = h[static_cast<std::size_t>(y) * s + x];
      if (v == 0) continue;
      if (!field.is_interior(x, y)) throw DomainError("contours lift the pinned boundary ring");
      field.set(x, y, v);
    }
  }
  return field;
}

}  // namespace fogdrip
