#pragma once

// Whole-raster derived layers: 3x3 slope and curvature, the 5x5 focal mean
// and residual topography.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>

#include "roughkit/parallel.hpp"
#include "roughkit/raster_types.hpp"

namespace roughkit {

/// 3x3 neighbourhood, row-major from the north-west corner:
///
///   z[0] z[1] z[2]
///   z[3] z[4] z[5]
///   z[6] z[7] z[8]
///
/// z[4] is the centre cell.
struct Window3 {
  std::array<double, 9> z{};

  double center() const { return z[4]; }
};

/// Neighbours that fall outside the raster or are NoData take the centre
/// value. Returns nullopt when the centre itself is NoData.
inline std::optional<Window3> gather_window(const Raster& dem, std::size_t i, std::size_t j) {
  if (!dem.valid(i, j)) return std::nullopt;
  Window3 w;
  const double c = dem.at(i, j);
  const long rows = static_cast<long>(dem.nrows());
  const long cols = static_cast<long>(dem.ncols());
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const long r = static_cast<long>(i) + di;
      const long q = static_cast<long>(j) + dj;
      double v = c;
      if (r >= 0 && r < rows && q >= 0 && q < cols &&
          dem.valid(static_cast<std::size_t>(r), static_cast<std::size_t>(q)))
        v = dem.at(static_cast<std::size_t>(r), static_cast<std::size_t>(q));
      w.z[static_cast<std::size_t>((di + 1) * 3 + (dj + 1))] = v;
    }
  }
  return w;
}

/// Slope in radians from the weighted central differences of the window.
inline double slope_cell(const Window3& w, double cell) {
  const auto& z = w.z;
  const double dzdx = ((z[2] + 2.0 * z[5] + z[8]) - (z[0] + 2.0 * z[3] + z[6])) / (8.0 * cell);
  const double dzdy = ((z[6] + 2.0 * z[7] + z[8]) - (z[0] + 2.0 * z[1] + z[2])) / (8.0 * cell);
  return std::atan(std::sqrt(dzdx * dzdx + dzdy * dzdy));
}

/// Zevenbergen-Thorne curvature 2E + 2D, in 1/m. Positive for concave-up
/// surfaces.
inline double curvature_cell(const Window3& w, double cell) {
  const auto& z = w.z;
  const double l2 = cell * cell;
  const double d = ((z[3] + z[5]) / 2.0 - z[4]) / l2;
  const double e = ((z[1] + z[7]) / 2.0 - z[4]) / l2;
  return 2.0 * e + 2.0 * d;
}

namespace detail {

template <class CellFn>
Raster map_windows(const Raster& dem, unsigned threads, CellFn&& fn) {
  Raster out(dem.spec());
  parallel_for(dem.nrows(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < dem.ncols(); ++j)
      if (auto w = gather_window(dem, i, j)) out.set(i, j, fn(*w));
  });
  return out;
}

}  // namespace detail

inline Raster slope_map(const Raster& dem, unsigned threads = 1) {
  const double cell = dem.spec().cell;
  return detail::map_windows(dem, threads, [cell](const Window3& w) { return slope_cell(w, cell); });
}

inline Raster curvature_map(const Raster& dem, unsigned threads = 1) {
  const double cell = dem.spec().cell;
  return detail::map_windows(dem, threads,
                             [cell](const Window3& w) { return curvature_cell(w, cell); });
}

/// Mean of the valid cells in the 5x5 neighbourhood, centre included,
/// truncated at the raster edge. Accumulated as offsets from the centre so a
/// constant neighbourhood reproduces its value exactly.
inline Raster focal_mean5(const Raster& dem, unsigned threads = 1) {
  Raster out(dem.spec());
  const long rows = static_cast<long>(dem.nrows());
  const long cols = static_cast<long>(dem.ncols());
  parallel_for(dem.nrows(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < dem.ncols(); ++j) {
      if (!dem.valid(i, j)) continue;
      const double c = dem.at(i, j);
      double sum = 0.0;
      std::size_t n = 0;
      for (long r = static_cast<long>(i) - 2; r <= static_cast<long>(i) + 2; ++r) {
        if (r < 0 || r >= rows) continue;
        for (long q = static_cast<long>(j) - 2; q <= static_cast<long>(j) + 2; ++q) {
          if (q < 0 || q >= cols) continue;
          const auto ri = static_cast<std::size_t>(r), qi = static_cast<std::size_t>(q);
          if (!dem.valid(ri, qi)) continue;
          sum += dem.at(ri, qi) - c;
          ++n;
        }
      }
      out.set(i, j, c + sum / static_cast<double>(n));
    }
  });
  return out;
}

/// DEM minus its 5x5 focal mean.
inline Raster residual_topography(const Raster& dem, unsigned threads = 1) {
  const Raster smooth = focal_mean5(dem, threads);
  Raster out(dem.spec());
  parallel_for(dem.nrows(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < dem.ncols(); ++j)
      if (dem.valid(i, j)) out.set(i, j, dem.at(i, j) - smooth.at(i, j));
  });
  return out;
}

}  // namespace roughkit
