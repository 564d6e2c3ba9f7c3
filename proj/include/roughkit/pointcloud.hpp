#pragma once

// Scattered ground samples: XYZ text I/O, nearest-neighbour spacing and
// least-squares plane detrending.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughkit/error.hpp"
#include "roughkit/format.hpp"

namespace roughkit {

struct Point3 {
  double x = 0.0;  // easting, m
  double y = 0.0;  // northing, m
  double z = 0.0;  // elevation, m

  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Bounds {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Immutable point collection; bounds always match the stored points.
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw ParameterError("point coordinates must be finite");
    }
    if (points_.empty()) return;
    bounds_ = {points_[0].x, points_[0].y, points_[0].x, points_[0].y};
    for (const auto& p : points_) {
      bounds_.xmin = std::min(bounds_.xmin, p.x);
      bounds_.ymin = std::min(bounds_.ymin, p.y);
      bounds_.xmax = std::max(bounds_.xmax, p.x);
      bounds_.ymax = std::max(bounds_.ymax, p.y);
    }
  }

  std::span<const Point3> points() const { return points_; }
  const Bounds& bounds() const { return bounds_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<Point3> points_;
  Bounds bounds_;
};

/// Reads whitespace-separated "x y z" lines. '#' starts a comment line and
/// blank lines are skipped.
inline PointCloud load_xyz(std::istream& in) {
  std::vector<Point3> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    if (first == line.size() || line[first] == '#') continue;

    double v[3];
    std::size_t n = 0;
    bool bad_token = false;
    split_ws(line, [&](std::string_view tok) {
      if (n < 3) {
        auto d = parse_double(tok);
        if (!d) bad_token = true;
        else v[n] = *d;
      }
      ++n;
    });
    if (bad_token) throw ParseError(lineno, "non-numeric token");
    if (n != 3) throw ParseError(lineno, "expected 3 values, got " + std::to_string(n));
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]))
      throw ParseError(lineno, "non-finite coordinate");
    pts.push_back({v[0], v[1], v[2]});
  }
  if (pts.empty()) throw EmptyInputError("no points in input");
  return PointCloud(std::move(pts));
}

inline void write_xyz(std::ostream& out, const PointCloud& cloud) {
  for (const auto& p : cloud.points())
    out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z)
        << '\n';
}

/// Mean over all points of the planimetric distance to the nearest other
/// point. Uses a uniform bucket grid; the result equals an all-pairs scan.
inline double mean_spacing(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n < 2) throw InsufficientDataError("mean spacing needs at least 2 points");

  const Bounds& b = cloud.bounds();
  double extent = std::max(b.width(), b.height());
  double bucket = extent > 0.0 ? extent / std::sqrt(static_cast<double>(n)) : 1.0;
  if (!(bucket > 0.0)) bucket = 1.0;
  const auto dim = [&](double len) {
    return static_cast<std::size_t>(std::floor(len / bucket)) + 1;
  };
  const std::size_t nx = dim(b.width());
  const std::size_t ny = dim(b.height());
  const auto cell_of = [&](const Point3& p) {
    auto cx = std::min(nx - 1, static_cast<std::size_t>((p.x - b.xmin) / bucket));
    auto cy = std::min(ny - 1, static_cast<std::size_t>((p.y - b.ymin) / bucket));
    return std::pair{cx, cy};
  };

  // Counting-sort the point indices into buckets.
  std::vector<std::size_t> start(nx * ny + 1, 0);
  for (const auto& p : cloud.points()) {
    auto [cx, cy] = cell_of(p);
    ++start[cy * nx + cx + 1];
  }
  for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
  std::vector<std::size_t> members(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      auto [cx, cy] = cell_of(cloud[i]);
      members[fill[cy * nx + cx]++] = i;
    }
  }

  const std::size_t max_ring = std::max(nx, ny);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& p = cloud[i];
    auto [cx, cy] = cell_of(p);
    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t ring = 0; ring <= max_ring; ++ring) {
      const long r = static_cast<long>(ring);
      for (long gy = static_cast<long>(cy) - r; gy <= static_cast<long>(cy) + r; ++gy) {
        if (gy < 0 || gy >= static_cast<long>(ny)) continue;
        const bool edge_row = gy == static_cast<long>(cy) - r || gy == static_cast<long>(cy) + r;
        for (long gx = static_cast<long>(cx) - r; gx <= static_cast<long>(cx) + r; ++gx) {
          if (gx < 0 || gx >= static_cast<long>(nx)) continue;
          if (!edge_row && gx != static_cast<long>(cx) - r && gx != static_cast<long>(cx) + r)
            continue;
          const std::size_t c = static_cast<std::size_t>(gy) * nx + static_cast<std::size_t>(gx);
          for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
            const std::size_t j = members[k];
            if (j == i) continue;
            const double dx = cloud[j].x - p.x;
            const double dy = cloud[j].y - p.y;
            best2 = std::min(best2, dx * dx + dy * dy);
          }
        }
      }
      // Anything beyond this ring is at least ring * bucket away.
      const double reach = static_cast<double>(ring) * bucket;
      if (best2 <= reach * reach) break;
    }
    total += std::sqrt(best2);
  }
  return total / static_cast<double>(n);
}

/// z = b0 + b1 x + b2 y in the cloud's own coordinates.
struct PlaneFit {
  double b0 = 0.0;  // m
  double b1 = 0.0;  // dz/dx
  double b2 = 0.0;  // dz/dy

  double operator()(double x, double y) const { return b0 + b1 * x + b2 * y; }
};

namespace detail {

// Plane expressed about the sample centroid. z_ref is the first sample's
// elevation; offsets are taken from it so a constant field solves exactly.
struct CenteredPlane {
  double xm = 0.0, ym = 0.0;
  double z_ref = 0.0, dz_mean = 0.0;
  double b1 = 0.0, b2 = 0.0;

  double residual(double x, double y, double z) const {
    return ((z - z_ref) - dz_mean) - b1 * (x - xm) - b2 * (y - ym);
  }

  PlaneFit to_plane() const { return {z_ref + dz_mean - b1 * xm - b2 * ym, b1, b2}; }
};

// Degeneracy threshold on the centred normal matrix eigenvalue ratio.
inline constexpr double kMinEigenRatio = 1e-12;

template <class GetX, class GetY, class GetZ>
CenteredPlane fit_centered(std::size_t n, GetX gx, GetY gy, GetZ gz) {
  if (n < 3) throw DegenerateGeometryError("plane fit needs at least 3 points");
  const double dn = static_cast<double>(n);
  double sx = 0.0, sy = 0.0, sd = 0.0;
  const double z_ref = gz(0);
  for (std::size_t i = 0; i < n; ++i) {
    sx += gx(i);
    sy += gy(i);
    sd += gz(i) - z_ref;
  }
  CenteredPlane c;
  c.xm = sx / dn;
  c.ym = sy / dn;
  c.z_ref = z_ref;
  c.dz_mean = sd / dn;

  double sxx = 0.0, sxy = 0.0, syy = 0.0, sxz = 0.0, syz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = gx(i) - c.xm;
    const double v = gy(i) - c.ym;
    const double w = (gz(i) - z_ref) - c.dz_mean;
    sxx += u * u;
    sxy += u * v;
    syy += v * v;
    sxz += u * w;
    syz += v * w;
  }

  // Centred normal matrix is diag(n, [[sxx, sxy], [sxy, syy]]).
  const double half_tr = 0.5 * (sxx + syy);
  const double half_diff = 0.5 * (sxx - syy);
  const double lam_hi = half_tr + std::sqrt(half_diff * half_diff + sxy * sxy);
  const double det = sxx * syy - sxy * sxy;
  const double lam_lo = lam_hi > 0.0 ? det / lam_hi : 0.0;
  const double largest = std::max(dn, lam_hi);
  const double smallest = std::min(dn, lam_lo);
  if (!(smallest >= kMinEigenRatio * largest) || !(det > 0.0))
    throw DegenerateGeometryError("points are collinear in plan view");

  c.b1 = (syy * sxz - sxy * syz) / det;
  c.b2 = (sxx * syz - sxy * sxz) / det;
  return c;
}

}  // namespace detail

/// Ordinary least squares fit of z on (x, y).
inline PlaneFit fit_plane(const PointCloud& cloud) {
  auto pts = cloud.points();
  return detail::fit_centered(
             pts.size(), [&](std::size_t i) { return pts[i].x; },
             [&](std::size_t i) { return pts[i].y; }, [&](std::size_t i) { return pts[i].z; })
      .to_plane();
}

/// Subtracts the plane from every elevation; x and y are untouched.
inline PointCloud detrend(const PointCloud& cloud, const PlaneFit& plane) {
  if (!std::isfinite(plane.b0) || !std::isfinite(plane.b1) || !std::isfinite(plane.b2))
    throw ParameterError("plane coefficients must be finite");
  std::vector<Point3> out(cloud.points().begin(), cloud.points().end());
  for (auto& p : out) p.z -= plane(p.x, p.y);
  return PointCloud(std::move(out));
}

}  // namespace roughkit
