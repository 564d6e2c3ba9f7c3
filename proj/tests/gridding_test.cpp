#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "roughkit/gridding.hpp"
#include "roughkit/predicates.hpp"

using namespace roughkit;

namespace {

std::vector<Point3> random_cloud(std::size_t n, std::uint64_t seed, double extent = 10.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent), z(-3.0, 3.0);
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), z(rng)});
  return pts;
}

double tri_area2(const Tin& tin, const std::array<std::size_t, 3>& t) {
  const auto &a = tin.vertices[t[0]], &b = tin.vertices[t[1]], &c = tin.vertices[t[2]];
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

void expect_delaunay(const Tin& tin) {
  for (const auto& t : tin.triangles) {
    EXPECT_GT(tri_area2(tin, t), 0.0);
    for (std::size_t k = 0; k < tin.vertices.size(); ++k) {
      if (k == t[0] || k == t[1] || k == t[2]) continue;
      ASSERT_FALSE(oracle::clearly_in_circumcircle(tin.vertices[t[0]], tin.vertices[t[1]],
                                                   tin.vertices[t[2]], tin.vertices[k]))
          << "vertex " << k << " inside circumcircle";
    }
  }
}

// Triangle areas must add up to the hull area.
void expect_covers_hull(const Tin& tin) {
  auto hull = oracle::convex_hull(tin.vertices);
  long double hull_area = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    hull_area += static_cast<long double>(a.x) * b.y - static_cast<long double>(b.x) * a.y;
  }
  long double sum = 0;
  for (const auto& t : tin.triangles) sum += tri_area2(tin, t);
  EXPECT_NEAR(static_cast<double>(sum), static_cast<double>(hull_area),
              1e-9 * static_cast<double>(hull_area));
}

}  // namespace

TEST(Predicates, OrientSigns) {
  EXPECT_EQ(predicates::orient(0, 0, 1, 0, 0, 1), 1);
  EXPECT_EQ(predicates::orient(0, 0, 0, 1, 1, 0), -1);
  EXPECT_EQ(predicates::orient(0, 0, 1, 1, 2, 2), 0);
  // Nearly collinear with large offsets: the float filter alone cannot decide.
  EXPECT_EQ(predicates::orient(0.5, 0.5, 12.0, 12.0, 24.0, 24.0), 0);
  const double e = std::nextafter(24.0, 25.0);
  EXPECT_EQ(predicates::orient(0.5, 0.5, 12.0, 12.0, 24.0, e), 1);
}

TEST(Predicates, InCircleSigns) {
  EXPECT_EQ(predicates::incircle(0, 0, 1, 0, 0, 1, 0.25, 0.25), 1);
  EXPECT_EQ(predicates::incircle(0, 0, 1, 0, 0, 1, 5, 5), -1);
  EXPECT_EQ(predicates::incircle(0, 0, 1, 0, 1, 1, 0, 1), 0);  // cocircular square
  EXPECT_EQ(predicates::incircle(1e6, 1e6, 1e6 + 1, 1e6, 1e6 + 1, 1e6 + 1, 1e6, 1e6 + 1), 0);
}

TEST(Delaunay, ThreePointsOneTriangle) {
  auto tin = delaunay(PointCloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  ASSERT_EQ(tin.triangles.size(), 1u);
  EXPECT_GT(tri_area2(tin, tin.triangles[0]), 0.0);
}

TEST(Delaunay, SquareGivesTwoTriangles) {
  auto tin = delaunay(PointCloud({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}));
  ASSERT_EQ(tin.triangles.size(), 2u);
  // Both triangles contain the shared diagonal's two endpoints.
  std::multiset<std::size_t> verts;
  for (const auto& t : tin.triangles) verts.insert(t.begin(), t.end());
  int shared = 0;
  for (std::size_t v = 0; v < 4; ++v) shared += verts.count(v) == 2;
  EXPECT_EQ(shared, 2);
  expect_delaunay(tin);
}

TEST(Delaunay, RandomPointsSatisfyEmptyCircle) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    auto tin = delaunay(PointCloud(random_cloud(50, seed)));
    // Euler: t = 2n - 2 - h for points in general position.
    const auto hull = oracle::convex_hull(tin.vertices);
    EXPECT_EQ(tin.triangles.size(), 2 * tin.vertices.size() - 2 - hull.size());
    expect_delaunay(tin);
    expect_covers_hull(tin);
  }
}

TEST(Delaunay, RegularLatticeWithCollinearHullAndCocircularCells) {
  std::vector<Point3> pts;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 9; ++j) pts.push_back({i * 0.5, j * 0.5, 0.1 * i * j});
  auto tin = delaunay(PointCloud(pts));
  EXPECT_EQ(tin.triangles.size(), 2u * 11 * 8);
  expect_delaunay(tin);
  expect_covers_hull(tin);
}

TEST(Delaunay, DuplicatesCollapseToLastOccurrence) {
  auto tin = delaunay(PointCloud({{0, 0, 1}, {1, 0, 2}, {0, 1, 3}, {1, 0, 9}, {0, 0, -4}}));
  EXPECT_EQ(tin.vertices.size(), 3u);
  EXPECT_EQ(tin.duplicates_removed, 2u);
  EXPECT_EQ(tin.vertices[0].z, -4.0);
  EXPECT_EQ(tin.vertices[1].z, 9.0);
}

TEST(Delaunay, CollinearInputIsDegenerate) {
  EXPECT_THROW(delaunay(PointCloud({{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {5, 5, 1}})),
               DegenerateGeometryError);
  EXPECT_THROW(delaunay(PointCloud({{0, 0, 0}, {1, 1, 0}})), DegenerateGeometryError);
}

TEST(Delaunay, LargeCloudIsValid) {
  auto pts = random_cloud(3000, 77, 100.0);
  auto tin = delaunay(PointCloud(pts));
  const auto hull = oracle::convex_hull(tin.vertices);
  EXPECT_EQ(tin.triangles.size(), 2 * tin.vertices.size() - 2 - hull.size());
  expect_covers_hull(tin);
}

TEST(MakeGridSpec, PaperSizedExtent) {
  PointCloud c({{0, 0, 0}, {350, 350, 0}});
  auto s = make_grid_spec(c, 1.0);
  EXPECT_EQ(s.ncols, 350u);
  EXPECT_EQ(s.nrows, 350u);
  EXPECT_EQ(s.x0, 0.0);
  EXPECT_EQ(s.y0, 0.0);
}

TEST(MakeGridSpec, CeilingAndClamp) {
  auto s = make_grid_spec(PointCloud({{0, 0, 0}, {10, 10, 0}}), 3.0);
  EXPECT_EQ(s.ncols, 4u);
  EXPECT_EQ(s.nrows, 4u);
  auto one = make_grid_spec(PointCloud({{5, 5, 0}}), 1.0);
  EXPECT_EQ(one.ncols, 1u);
  EXPECT_EQ(one.nrows, 1u);
  EXPECT_THROW(make_grid_spec(PointCloud({{5, 5, 0}}), 0.0), ParameterError);
  EXPECT_THROW(make_grid_spec(PointCloud({{5, 5, 0}}), -1.0), ParameterError);
}

TEST(InterpolateGrid, ReproducesLinearField) {
  auto pts = random_cloud(200, 5, 20.0);
  for (auto& p : pts) p.z = 1.0 + 2.0 * p.x;
  PointCloud c(pts);
  auto tin = delaunay(c);
  auto dem = interpolate_grid(tin, make_grid_spec(c, 0.7));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < dem.nrows(); ++i)
    for (std::size_t j = 0; j < dem.ncols(); ++j)
      if (dem.valid(i, j)) {
        EXPECT_NEAR(dem.at(i, j), 1.0 + 2.0 * dem.spec().center_x(j), 1e-9);
        ++checked;
      }
  EXPECT_GT(checked, 500u);
}

TEST(InterpolateGrid, OutsideHullIsNoData) {
  PointCloud c({{0, 0, 1}, {4, 0, 1}, {0, 4, 1}});
  auto dem = interpolate_grid(delaunay(c), GridSpec{0, 0, 4, 4, 1.0});
  EXPECT_TRUE(dem.valid(3, 0));   // centre (0.5, 0.5)
  EXPECT_FALSE(dem.valid(0, 3));  // centre (3.5, 3.5)
  auto far = interpolate_grid(delaunay(c), GridSpec{100, 100, 3, 3, 1.0});
  EXPECT_EQ(far.valid_count(), 0u);
}

TEST(InterpolateGrid, MatchesBruteForceScan) {
  for (std::uint64_t seed : {8u, 9u}) {
    auto pts = random_cloud(60, seed);
    PointCloud c(pts);
    auto tin = delaunay(c);
    GridSpec spec{-1.0, -1.0, 37, 41, 0.3};
    auto dem = interpolate_grid(tin, spec);
    const auto hull = oracle::convex_hull(tin.vertices);
    std::size_t outside = 0;
    for (std::size_t i = 0; i < dem.nrows(); ++i)
      for (std::size_t j = 0; j < dem.ncols(); ++j) {
        const double px = spec.center_x(j), py = spec.center_y(i);
        if (!oracle::in_hull(hull, px, py)) ++outside;
        if (!dem.valid(i, j)) continue;
        auto ref = oracle::tin_value_bruteforce(tin, px, py);
        ASSERT_TRUE(ref.has_value());
        EXPECT_NEAR(dem.at(i, j), *ref, 1e-12);
      }
    EXPECT_EQ(spec.size() - dem.valid_count(), outside);
  }
}

TEST(InterpolateGrid, VertexReproductionAndBounds) {
  // Vertices placed exactly on cell centres of a 1 m grid.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> idx(0, 19);
  std::uniform_real_distribution<double> z(-10, 10);
  std::set<std::pair<int, int>> used;
  std::vector<Point3> pts;
  while (pts.size() < 60) {
    int a = idx(rng), b = idx(rng);
    if (used.insert({a, b}).second) pts.push_back({a + 0.5, b + 0.5, z(rng)});
  }
  PointCloud c(pts);
  auto tin = delaunay(c);
  GridSpec spec{0, 0, 20, 20, 1.0};
  auto dem = interpolate_grid(tin, spec);
  for (const auto& p : tin.vertices) {
    const auto j = static_cast<std::size_t>(p.x);
    const auto i = spec.nrows - 1 - static_cast<std::size_t>(p.y);
    ASSERT_TRUE(dem.valid(i, j));
    EXPECT_EQ(dem.at(i, j), p.z);
  }
  // Every value lies within its containing triangle's vertex range.
  for (std::size_t i = 0; i < dem.nrows(); ++i)
    for (std::size_t j = 0; j < dem.ncols(); ++j) {
      if (!dem.valid(i, j)) continue;
      const double px = spec.center_x(j), py = spec.center_y(i);
      for (const auto& t : tin.triangles) {
        auto s = detail::sample_triangle(tin.vertices[t[0]], tin.vertices[t[1]],
                                         tin.vertices[t[2]], px, py);
        if (!s.inside) continue;
        const double lo = std::min({tin.vertices[t[0]].z, tin.vertices[t[1]].z, tin.vertices[t[2]].z});
        const double hi = std::max({tin.vertices[t[0]].z, tin.vertices[t[1]].z, tin.vertices[t[2]].z});
        EXPECT_GE(dem.at(i, j), lo);
        EXPECT_LE(dem.at(i, j), hi);
        break;
      }
    }
}

TEST(InterpolateGrid, SharedEdgeValuesAgree) {
  PointCloud c({{0, 0, 0}, {4, 0, 1}, {4, 4, 5}, {0, 4, 2}});
  auto tin = delaunay(c);
  ASSERT_EQ(tin.triangles.size(), 2u);
  // Direct check on the shared edge of whichever diagonal was chosen.
  const auto& t0 = tin.triangles[0];
  const auto& t1 = tin.triangles[1];
  std::vector<std::size_t> common;
  for (auto v : t0)
    if (std::find(t1.begin(), t1.end(), v) != t1.end()) common.push_back(v);
  ASSERT_EQ(common.size(), 2u);
  const auto& p = tin.vertices[common[0]];
  const auto& q = tin.vertices[common[1]];
  for (double s : {0.125, 0.25, 0.5, 0.75}) {
    const double px = p.x + s * (q.x - p.x), py = p.y + s * (q.y - p.y);
    auto a = detail::sample_triangle(tin.vertices[t0[0]], tin.vertices[t0[1]], tin.vertices[t0[2]], px, py);
    auto b = detail::sample_triangle(tin.vertices[t1[0]], tin.vertices[t1[1]], tin.vertices[t1[2]], px, py);
    ASSERT_TRUE(a.inside);
    ASSERT_TRUE(b.inside);
    EXPECT_NEAR(a.z, b.z, 1e-12);
  }
}

TEST(InterpolateGrid, ThreadCountDoesNotChangeOutput) {
  auto pts = random_cloud(2000, 19, 60.0);
  PointCloud c(pts);
  auto tin = delaunay(c);
  auto spec = make_grid_spec(c, 0.5);
  auto a = interpolate_grid(tin, spec, 1);
  auto b = interpolate_grid(tin, spec, 8);
  ASSERT_EQ(a.valid_count(), b.valid_count());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a.values()[k], y = b.values()[k];
    EXPECT_TRUE((std::isnan(x) && std::isnan(y)) || x == y);
  }
}
