#pragma once

// Five local roughness indices evaluated over non-overlapping w x w blocks.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roughkit/error.hpp"
#include "roughkit/parallel.hpp"
#include "roughkit/pointcloud.hpp"
#include "roughkit/raster.hpp"
#include "roughkit/raster_types.hpp"

namespace roughkit {

enum class RoughnessIndex { Rmsh, Ldre, Rt, Slope, Curvature };

inline constexpr std::array<RoughnessIndex, 5> kAllIndices = {
    RoughnessIndex::Rmsh, RoughnessIndex::Ldre, RoughnessIndex::Rt, RoughnessIndex::Slope,
    RoughnessIndex::Curvature};

/// Upper-case label used in CSV headers.
inline std::string_view label(RoughnessIndex idx) {
  switch (idx) {
    case RoughnessIndex::Rmsh: return "RMSH";
    case RoughnessIndex::Ldre: return "LDRE";
    case RoughnessIndex::Rt: return "RT";
    case RoughnessIndex::Slope: return "SLOPE";
    case RoughnessIndex::Curvature: return "CURVATURE";
  }
  return "?";
}

/// Lower-case name used in file names and on the command line.
inline std::string slug(RoughnessIndex idx) {
  std::string s(label(idx));
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::optional<RoughnessIndex> parse_index(std::string_view name) {
  for (auto idx : kAllIndices) {
    std::string_view l = label(idx);
    if (l.size() != name.size()) continue;
    bool same = true;
    for (std::size_t k = 0; k < l.size(); ++k)
      same = same && std::toupper(static_cast<unsigned char>(name[k])) == l[k];
    if (same) return idx;
  }
  return std::nullopt;
}

/// Odd block side length w >= 3, in cells.
class WindowScale {
 public:
  explicit WindowScale(std::size_t w) : w_(w) {
    if (w < 3 || w % 2 == 0) throw ParameterError("window size must be odd and >= 3");
  }
  std::size_t size() const { return w_; }
  friend auto operator<=>(const WindowScale&, const WindowScale&) = default;

 private:
  std::size_t w_;
};

inline const std::vector<WindowScale>& default_scales() {
  static const std::vector<WindowScale> s{WindowScale(3), WindowScale(5), WindowScale(7),
                                          WindowScale(9), WindowScale(11)};
  return s;
}

struct RoughnessMap {
  RoughnessIndex index;
  WindowScale scale;
  Raster grid;  // coarse grid, cell = w * L
};

namespace detail {

// Sample standard deviation (n - 1). Offsets are taken from the first value
// so identical inputs give exactly zero.
inline double sample_std(std::span<const double> v) {
  const double ref = v[0];
  double sum = 0.0;
  for (double x : v) sum += x - ref;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) {
    const double d = (x - ref) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Root mean square height: sample standard deviation of elevations.
inline double rmsh(std::span<const double> z) {
  if (z.size() < 2) throw InsufficientDataError("RMSH needs at least 2 values");
  return detail::sample_std(z);
}

/// Sample standard deviation, n - 1 denominator.
inline double window_std(std::span<const double> v) {
  if (v.size() < 2) throw InsufficientDataError("standard deviation needs at least 2 values");
  return detail::sample_std(v);
}

/// Standard deviation (n - 1) of residuals from a least-squares plane
/// through the cells.
inline double ldre(std::span<const Point3> cells) {
  if (cells.size() < 4) throw InsufficientDataError("LDRE needs at least 4 cells");
  const auto plane = detail::fit_centered(
      cells.size(), [&](std::size_t i) { return cells[i].x; },
      [&](std::size_t i) { return cells[i].y; }, [&](std::size_t i) { return cells[i].z; });
  std::vector<double> res(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    res[i] = plane.residual(cells[i].x, cells[i].y, cells[i].z);
  return detail::sample_std(res);
}

/// Full-resolution layers that the RT, SLOPE and CURVATURE indices aggregate.
/// Each is computed once per DEM and shared across window scales.
struct DerivedLayers {
  std::optional<Raster> residual;
  std::optional<Raster> slope;
  std::optional<Raster> curvature;
};

inline DerivedLayers compute_layers(const Raster& dem, std::span<const RoughnessIndex> indices,
                                    unsigned threads = 1) {
  DerivedLayers layers;
  for (auto idx : indices) {
    if (idx == RoughnessIndex::Rt && !layers.residual)
      layers.residual = residual_topography(dem, threads);
    if (idx == RoughnessIndex::Slope && !layers.slope) layers.slope = slope_map(dem, threads);
    if (idx == RoughnessIndex::Curvature && !layers.curvature)
      layers.curvature = curvature_map(dem, threads);
  }
  return layers;
}

/// Coarse grid of floor(R / w) x floor(C / w) blocks anchored at the
/// north-west corner; partial blocks along the south and east are dropped.
inline GridSpec block_grid(const GridSpec& fine, WindowScale scale) {
  const std::size_t w = scale.size();
  if (fine.nrows < w || fine.ncols < w)
    throw InsufficientExtentError("DEM of " + std::to_string(fine.nrows) + "x" +
                                  std::to_string(fine.ncols) + " cells is smaller than a " +
                                  std::to_string(w) + "x" + std::to_string(w) + " window");
  GridSpec coarse;
  coarse.nrows = fine.nrows / w;
  coarse.ncols = fine.ncols / w;
  coarse.cell = static_cast<double>(w) * fine.cell;
  coarse.x0 = fine.x0;
  coarse.y0 = fine.y0 + static_cast<double>(fine.nrows - coarse.nrows * w) * fine.cell;
  return coarse;
}

inline RoughnessMap roughness_map(const Raster& dem, const DerivedLayers& layers,
                                  RoughnessIndex index, WindowScale scale,
                                  unsigned threads = 1) {
  const GridSpec coarse = block_grid(dem.spec(), scale);
  const std::size_t w = scale.size();

  const Raster* source = &dem;
  if (index == RoughnessIndex::Rt) source = layers.residual ? &*layers.residual : nullptr;
  if (index == RoughnessIndex::Slope) source = layers.slope ? &*layers.slope : nullptr;
  if (index == RoughnessIndex::Curvature) source = layers.curvature ? &*layers.curvature : nullptr;
  if (!source) throw ParameterError("derived layer for " + std::string(label(index)) + " missing");

  RoughnessMap out{index, scale, Raster(coarse)};
  const GridSpec& fs = dem.spec();
  parallel_for(coarse.nrows, threads, [&](std::size_t bi) {
    std::vector<double> vals(w * w);
    std::vector<Point3> cells(w * w);
    for (std::size_t bj = 0; bj < coarse.ncols; ++bj) {
      bool complete = true;
      std::size_t k = 0;
      for (std::size_t i = bi * w; i < bi * w + w && complete; ++i) {
        for (std::size_t j = bj * w; j < bj * w + w; ++j) {
          if (!dem.valid(i, j) || !source->valid(i, j)) {
            complete = false;
            break;
          }
          vals[k] = source->at(i, j);
          cells[k] = {fs.center_x(j), fs.center_y(i), dem.at(i, j)};
          ++k;
        }
      }
      if (!complete) continue;
      double v = 0.0;
      switch (index) {
        case RoughnessIndex::Rmsh: v = rmsh(vals); break;
        case RoughnessIndex::Ldre: v = ldre(cells); break;
        default: v = window_std(vals); break;
      }
      out.grid.set(bi, bj, v);
    }
  });
  return out;
}

inline RoughnessMap roughness_map(const Raster& dem, RoughnessIndex index, WindowScale scale,
                                  unsigned threads = 1) {
  const std::array<RoughnessIndex, 1> one{index};
  return roughness_map(dem, compute_layers(dem, one, threads), index, scale, threads);
}

/// All requested indices at one scale, sharing derived layers.
inline std::vector<RoughnessMap> roughness_maps(const Raster& dem, const DerivedLayers& layers,
                                                std::span<const RoughnessIndex> indices,
                                                WindowScale scale, unsigned threads = 1) {
  std::vector<RoughnessMap> maps;
  maps.reserve(indices.size());
  for (auto idx : indices) maps.push_back(roughness_map(dem, layers, idx, scale, threads));
  return maps;
}

/// Min-max rescaling of the valid cells to [0, 1]; a constant raster maps
/// to all zeros.
inline Raster normalize01(const Raster& g) {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < g.nrows(); ++i)
    for (std::size_t j = 0; j < g.ncols(); ++j) {
      if (!g.valid(i, j)) continue;
      const double v = g.at(i, j);
      if (!any) lo = hi = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      any = true;
    }
  if (!any) throw EmptyMapError("map has no valid cells");

  Raster out(g.spec());
  const double range = hi - lo;
  for (std::size_t i = 0; i < g.nrows(); ++i)
    for (std::size_t j = 0; j < g.ncols(); ++j)
      if (g.valid(i, j)) out.set(i, j, range > 0.0 ? (g.at(i, j) - lo) / range : 0.0);
  return out;
}

inline RoughnessMap normalize01(const RoughnessMap& map) {
  return {map.index, map.scale, normalize01(map.grid)};
}

}  // namespace roughkit
