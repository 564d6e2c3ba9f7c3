#pragma once

// Delaunay TIN construction and linear TIN-to-grid sampling.
//
// The triangulation is built by incremental Bowyer-Watson insertion. The
// outside of the convex hull is closed off with "ghost" triangles that share
// a single vertex at infinity, so points outside the current hull are handled
// by the same cavity logic as interior points. All geometric decisions go
// through the exact predicates in predicates.hpp.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roughkit/error.hpp"
#include "roughkit/parallel.hpp"
#include "roughkit/pointcloud.hpp"
#include "roughkit/predicates.hpp"
#include "roughkit/raster_types.hpp"

namespace roughkit {

struct Tin {
  std::vector<Point3> vertices;
  // Counter-clockwise vertex index triples.
  std::vector<std::array<std::size_t, 3>> triangles;
  // Input points dropped because a later point had the same (x, y).
  std::size_t duplicates_removed = 0;
};

namespace detail {

// Position along a 2^16 x 2^16 Hilbert curve; used only to order insertions.
inline std::uint64_t hilbert_key(std::uint32_t x, std::uint32_t y) {
  constexpr std::uint32_t n = 1u << 16;
  std::uint64_t d = 0;
  for (std::uint32_t s = n / 2; s > 0; s /= 2) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = n - 1 - x;
        y = n - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

class DelaunayBuilder {
 public:
  static constexpr int kGhost = -1;
  static constexpr int kNone = -1;

  explicit DelaunayBuilder(const std::vector<Point3>& pts) : pts_(pts) {}

  std::vector<std::array<std::size_t, 3>> run() {
    const std::vector<std::size_t> order = insertion_order();
    std::vector<std::size_t> rest = seed(order);
    for (std::size_t idx : rest) insert(static_cast<int>(idx));

    std::vector<std::array<std::size_t, 3>> out;
    for (const Tri& t : tris_) {
      if (!t.alive || is_ghost(t)) continue;
      out.push_back({static_cast<std::size_t>(t.v[0]), static_cast<std::size_t>(t.v[1]),
                     static_cast<std::size_t>(t.v[2])});
    }
    return out;
  }

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nb{kNone, kNone, kNone};  // nb[k] lies across the edge opposite v[k]
    bool alive = true;
  };

  struct BoundaryEdge {
    int u, v;
    int outer;      // triangle on the far side
    int outer_slot; // index k in outer with outer.nb[k] == cavity triangle
  };

  const std::vector<Point3>& pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> in_cavity_;
  std::uint32_t epoch_ = 0;
  int last_ = 0;

  static bool is_ghost(const Tri& t) {
    return t.v[0] == kGhost || t.v[1] == kGhost || t.v[2] == kGhost;
  }

  int orient(int a, int b, int c) const {
    return predicates::orient(pts_[a].x, pts_[a].y, pts_[b].x, pts_[b].y, pts_[c].x,
                              pts_[c].y);
  }

  std::vector<std::size_t> insertion_order() const {
    double xmin = pts_[0].x, xmax = pts_[0].x, ymin = pts_[0].y, ymax = pts_[0].y;
    for (const auto& p : pts_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
    const auto q = [&](double v, double lo) {
      double t = (v - lo) / span * 65535.0;
      return static_cast<std::uint32_t>(std::clamp(t, 0.0, 65535.0));
    };
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i)
      keyed[i] = {hilbert_key(q(pts_[i].x, xmin), q(pts_[i].y, ymin)), i};
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> order(pts_.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) order[i] = keyed[i].second;
    return order;
  }

  int new_tri(int a, int b, int c) {
    int id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      tris_[id] = Tri{};
    } else {
      id = static_cast<int>(tris_.size());
      tris_.emplace_back();
      stamp_.push_back(0);
      in_cavity_.push_back(0);
    }
    tris_[id].v = {a, b, c};
    return id;
  }

  // Builds the first real triangle and its three ghosts. Returns the
  // remaining points in insertion order.
  std::vector<std::size_t> seed(const std::vector<std::size_t>& order) {
    const std::size_t a = order[0];
    const std::size_t b = order[1];
    std::size_t c_pos = 0;
    int o = 0;
    for (std::size_t k = 2; k < order.size(); ++k) {
      o = orient(static_cast<int>(a), static_cast<int>(b), static_cast<int>(order[k]));
      if (o != 0) {
        c_pos = k;
        break;
      }
    }
    if (c_pos == 0) throw DegenerateGeometryError("all points are collinear in plan view");

    int ia = static_cast<int>(a), ib = static_cast<int>(b), ic = static_cast<int>(order[c_pos]);
    if (o < 0) std::swap(ia, ib);

    const int t = new_tri(ia, ib, ic);
    const int g0 = new_tri(ic, ib, kGhost);  // across edge (ib, ic)
    const int g1 = new_tri(ia, ic, kGhost);  // across edge (ic, ia)
    const int g2 = new_tri(ib, ia, kGhost);  // across edge (ia, ib)
    tris_[t].nb = {g0, g1, g2};
    // Ghost (u, v, g): nb[2] is the real triangle, nb[0] across (v, g), nb[1] across (g, u).
    tris_[g0].nb = {g2, g1, t};
    tris_[g1].nb = {g0, g2, t};
    tris_[g2].nb = {g1, g0, t};
    last_ = t;

    std::vector<std::size_t> rest;
    rest.reserve(order.size() - 3);
    for (std::size_t k = 2; k < order.size(); ++k)
      if (k != c_pos) rest.push_back(order[k]);
    return rest;
  }

  bool strictly_between(int u, int v, int p) const {
    const Point3 &a = pts_[u], &b = pts_[v], &q = pts_[p];
    if (a.x != b.x) return (q.x > std::min(a.x, b.x)) && (q.x < std::max(a.x, b.x));
    return (q.y > std::min(a.y, b.y)) && (q.y < std::max(a.y, b.y));
  }

  bool conflicts(int t, int p) const {
    const Tri& tr = tris_[t];
    for (int k = 0; k < 3; ++k) {
      if (tr.v[k] != kGhost) continue;
      const int u = tr.v[(k + 1) % 3], v = tr.v[(k + 2) % 3];
      const int o = orient(u, v, p);
      return o > 0 || (o == 0 && strictly_between(u, v, p));
    }
    const Point3 &a = pts_[tr.v[0]], &b = pts_[tr.v[1]], &c = pts_[tr.v[2]], &q = pts_[p];
    return predicates::incircle(a.x, a.y, b.x, b.y, c.x, c.y, q.x, q.y) > 0;
  }

  // Visibility walk toward p; returns a triangle whose circumdisk holds p.
  int locate(int p) const {
    int t = last_;
    if (!tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) ++t;
    }
    if (is_ghost(tris_[t])) {
      const Tri& g = tris_[t];
      for (int k = 0; k < 3; ++k)
        if (g.v[k] == kGhost) t = g.nb[k];
    }
    const std::size_t cap = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < cap; ++step) {
      const Tri& tr = tris_[t];
      if (is_ghost(tr)) return t;
      int next = kNone;
      for (int k = 0; k < 3; ++k) {
        if (orient(tr.v[(k + 1) % 3], tr.v[(k + 2) % 3], p) < 0) {
          next = tr.nb[k];
          break;
        }
      }
      if (next == kNone) return t;
      t = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i)
      if (tris_[i].alive && conflicts(static_cast<int>(i), p)) return static_cast<int>(i);
    throw DegenerateGeometryError("point location failed");
  }

  void insert(int p) {
    const int start = locate(p);
    ++epoch_;
    std::vector<int> cavity{start};
    std::vector<int> stack{start};
    stamp_[start] = epoch_;
    in_cavity_[start] = 1;
    std::vector<BoundaryEdge> boundary;

    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nb[k];
        if (stamp_[n] != epoch_) {
          stamp_[n] = epoch_;
          in_cavity_[n] = conflicts(n, p) ? 1 : 0;
          if (in_cavity_[n]) {
            cavity.push_back(n);
            stack.push_back(n);
            continue;
          }
        }
        if (in_cavity_[n]) continue;
        int slot = 0;
        while (tris_[n].nb[slot] != t) ++slot;
        boundary.push_back({tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3], n, slot});
      }
    }

    for (int t : cavity) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    // Reuse slots in a fixed order so the output is reproducible.
    std::sort(free_.begin(), free_.end(), std::greater<>());

    std::vector<std::pair<int, int>> by_start;  // (u, tri) for new tri (u, v, p)
    std::vector<std::pair<int, int>> by_end;    // (v, tri)
    by_start.reserve(boundary.size());
    by_end.reserve(boundary.size());
    for (const BoundaryEdge& e : boundary) {
      const int nt = new_tri(e.u, e.v, p);
      tris_[nt].nb[2] = e.outer;
      tris_[e.outer].nb[e.outer_slot] = nt;
      by_start.push_back({e.u, nt});
      by_end.push_back({e.v, nt});
    }
    const auto find = [](const std::vector<std::pair<int, int>>& m, int key) {
      for (const auto& [k, t] : m)
        if (k == key) return t;
      throw DegenerateGeometryError("cavity boundary is not a closed loop");
    };
    for (const auto& [u, nt] : by_start) {
      Tri& tr = tris_[nt];
      tr.nb[0] = find(by_start, tr.v[1]);  // across (v, p)
      tr.nb[1] = find(by_end, u);          // across (p, u)
      if (!is_ghost(tr)) last_ = nt;
    }
  }
};

}  // namespace detail

/// Delaunay triangulation of the plan-view projection. Points sharing (x, y)
/// collapse to the last occurrence.
inline Tin delaunay(const PointCloud& cloud) {
  struct Key {
    std::uint64_t x, y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>{}(k.x * 0x9E3779B97F4A7C15ull ^ k.y);
    }
  };
  const auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v + 0.0); };

  Tin tin;
  std::unordered_map<Key, std::size_t, KeyHash> seen;
  seen.reserve(cloud.size());
  for (const Point3& p : cloud.points()) {
    auto [it, fresh] = seen.try_emplace(Key{bits(p.x), bits(p.y)}, tin.vertices.size());
    if (fresh) {
      tin.vertices.push_back(p);
    } else {
      tin.vertices[it->second].z = p.z;
      ++tin.duplicates_removed;
    }
  }
  if (tin.vertices.size() < 3)
    throw DegenerateGeometryError("triangulation needs at least 3 distinct points");

  tin.triangles = detail::DelaunayBuilder(tin.vertices).run();
  return tin;
}

/// Grid covering the cloud's bounds from its south-west corner.
inline GridSpec make_grid_spec(const PointCloud& cloud, double cell) {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw ParameterError("cell size must be > 0");
  if (cloud.empty()) throw EmptyInputError("cannot size a grid for an empty cloud");
  const Bounds& b = cloud.bounds();
  const auto count = [&](double len) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / cell)));
  };
  GridSpec spec{b.xmin, b.ymin, count(b.width()), count(b.height()), cell};
  spec.validate();
  return spec;
}

namespace detail {

struct TriangleSample {
  bool inside = false;
  double z = 0.0;
};

// Boundary counts as inside. The value is the barycentric blend clamped to
// the vertex elevation range.
inline TriangleSample sample_triangle(const Point3& a, const Point3& b, const Point3& c,
                                      double px, double py) {
  if (predicates::orient(a.x, a.y, b.x, b.y, px, py) < 0 ||
      predicates::orient(b.x, b.y, c.x, c.y, px, py) < 0 ||
      predicates::orient(c.x, c.y, a.x, a.y, px, py) < 0)
    return {};
  const double area = predicates::orient_value(a.x, a.y, b.x, b.y, c.x, c.y);
  const double wa = predicates::orient_value(px, py, b.x, b.y, c.x, c.y) / area;
  const double wb = predicates::orient_value(a.x, a.y, px, py, c.x, c.y) / area;
  const double wc = predicates::orient_value(a.x, a.y, b.x, b.y, px, py) / area;
  const double z = wa * a.z + wb * b.z + wc * c.z;
  const double lo = std::min({a.z, b.z, c.z});
  const double hi = std::max({a.z, b.z, c.z});
  return {true, std::clamp(z, lo, hi)};
}

}  // namespace detail

/// Samples the TIN at every cell centre. Centres outside the hull are NoData;
/// a centre on a shared edge takes the lowest-indexed containing triangle.
inline Dem interpolate_grid(const Tin& tin, const GridSpec& spec, unsigned threads = 1) {
  spec.validate();
  Dem dem(spec);
  constexpr std::size_t kBand = 16;
  const std::size_t nbands = (spec.nrows + kBand - 1) / kBand;

  struct Span {
    std::size_t r0, r1, c0, c1;  // inclusive cell ranges
  };
  const auto clamp_idx = [](double v, std::size_t n) -> long {
    return static_cast<long>(std::clamp(v, -1.0, static_cast<double>(n)));
  };
  std::vector<Span> spans(tin.triangles.size());
  std::vector<std::uint8_t> touches(tin.triangles.size(), 0);
  std::vector<std::vector<std::size_t>> band_tris(nbands);
  for (std::size_t t = 0; t < tin.triangles.size(); ++t) {
    const auto& tri = tin.triangles[t];
    const Point3 &a = tin.vertices[tri[0]], &b = tin.vertices[tri[1]], &c = tin.vertices[tri[2]];
    const double xmin = std::min({a.x, b.x, c.x}), xmax = std::max({a.x, b.x, c.x});
    const double ymin = std::min({a.y, b.y, c.y}), ymax = std::max({a.y, b.y, c.y});
    // Pad by one cell; the exact inside test decides membership.
    long c0 = clamp_idx(std::floor((xmin - spec.x0) / spec.cell - 0.5), spec.ncols) - 1;
    long c1 = clamp_idx(std::ceil((xmax - spec.x0) / spec.cell - 0.5), spec.ncols) + 1;
    const double top = spec.y0 + static_cast<double>(spec.nrows) * spec.cell;
    long r0 = clamp_idx(std::floor((top - ymax) / spec.cell - 0.5), spec.nrows) - 1;
    long r1 = clamp_idx(std::ceil((top - ymin) / spec.cell - 0.5), spec.nrows) + 1;
    c0 = std::max(c0, 0L);
    r0 = std::max(r0, 0L);
    c1 = std::min(c1, static_cast<long>(spec.ncols) - 1);
    r1 = std::min(r1, static_cast<long>(spec.nrows) - 1);
    if (c0 > c1 || r0 > r1) continue;
    spans[t] = {static_cast<std::size_t>(r0), static_cast<std::size_t>(r1),
                static_cast<std::size_t>(c0), static_cast<std::size_t>(c1)};
    touches[t] = 1;
    for (std::size_t band = spans[t].r0 / kBand; band <= spans[t].r1 / kBand; ++band)
      band_tris[band].push_back(t);
  }

  parallel_for(nbands, threads, [&](std::size_t band) {
    const std::size_t row_lo = band * kBand;
    const std::size_t row_hi = std::min(spec.nrows, row_lo + kBand) - 1;
    for (std::size_t t : band_tris[band]) {
      const Span& s = spans[t];
      const auto& tri = tin.triangles[t];
      const Point3 &a = tin.vertices[tri[0]], &b = tin.vertices[tri[1]], &c = tin.vertices[tri[2]];
      for (std::size_t i = std::max(s.r0, row_lo); i <= std::min(s.r1, row_hi); ++i) {
        const double py = spec.center_y(i);
        for (std::size_t j = s.c0; j <= s.c1; ++j) {
          if (dem.valid(i, j)) continue;
          const auto hit = detail::sample_triangle(a, b, c, spec.center_x(j), py);
          if (hit.inside) dem.set(i, j, hit.z);
        }
      }
    }
  });
  return dem;
}

}  // namespace roughkit
