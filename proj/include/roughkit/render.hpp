#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "roughkit/raster_types.hpp"
#include "roughkit/roughness.hpp"

namespace roughkit {

/// 8-bit grey levels: min-max normalised, scaled by 255 and rounded half
/// up. NoData cells are black.
inline std::vector<std::uint8_t> to_gray(const Raster& r) {
  const Raster norm = normalize01(r);
  std::vector<std::uint8_t> px(r.size(), 0);
  for (std::size_t i = 0; i < r.nrows(); ++i)
    for (std::size_t j = 0; j < r.ncols(); ++j)
      if (norm.valid(i, j))
        px[i * r.ncols() + j] =
            static_cast<std::uint8_t>(std::floor(norm.at(i, j) * 255.0 + 0.5));
  return px;
}

/// Binary PGM (P5, maxval 255), row 0 first.
inline void write_pgm(std::ostream& out, const Raster& r) {
  const auto px = to_gray(r);
  out << "P5\n" << r.ncols() << ' ' << r.nrows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

}  // namespace roughkit
