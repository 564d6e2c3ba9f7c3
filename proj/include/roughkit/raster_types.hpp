#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "roughkit/error.hpp"

namespace roughkit {

/// Regular north-up grid. (x0, y0) is the south-west corner; row 0 is the
/// northernmost row and values are registered at cell centres.
struct GridSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  std::size_t ncols = 1;
  std::size_t nrows = 1;
  double cell = 1.0;

  void validate() const {
    if (!(cell > 0.0) || !std::isfinite(cell)) throw ParameterError("cell size must be > 0");
    if (ncols < 1 || nrows < 1) throw ParameterError("grid needs at least one row and column");
    if (!std::isfinite(x0) || !std::isfinite(y0)) throw ParameterError("grid origin must be finite");
  }

  double center_x(std::size_t col) const { return x0 + (static_cast<double>(col) + 0.5) * cell; }
  double center_y(std::size_t row) const {
    return y0 + (static_cast<double>(nrows - row) - 0.5) * cell;
  }
  std::size_t size() const { return ncols * nrows; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Elevation-like raster with a validity mask. Invalid cells hold NaN.
class Raster {
 public:
  Raster() = default;

  explicit Raster(const GridSpec& spec)
      : spec_(spec),
        values_(spec.size(), std::numeric_limits<double>::quiet_NaN()),
        valid_(spec.size(), 0) {
    spec_.validate();
  }

  Raster(const GridSpec& spec, double fill) : Raster(spec) {
    std::fill(values_.begin(), values_.end(), fill);
    std::fill(valid_.begin(), valid_.end(), 1);
  }

  const GridSpec& spec() const { return spec_; }
  std::size_t nrows() const { return spec_.nrows; }
  std::size_t ncols() const { return spec_.ncols; }
  std::size_t size() const { return values_.size(); }

  bool valid(std::size_t i, std::size_t j) const { return valid_[i * spec_.ncols + j] != 0; }
  double at(std::size_t i, std::size_t j) const { return values_[i * spec_.ncols + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    values_[i * spec_.ncols + j] = v;
    valid_[i * spec_.ncols + j] = 1;
  }
  void set_nodata(std::size_t i, std::size_t j) {
    values_[i * spec_.ncols + j] = std::numeric_limits<double>::quiet_NaN();
    valid_[i * spec_.ncols + j] = 0;
  }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto v : valid_) n += v;
    return n;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  GridSpec spec_;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
};

using Dem = Raster;

}  // namespace roughkit
