#pragma once

// Agreement between roughness maps: Pearson r, coefficient of determination,
// the 5x5 pairwise matrix and its sweep over window scales.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "roughkit/error.hpp"
#include "roughkit/format.hpp"
#include "roughkit/roughness.hpp"

namespace roughkit {

namespace detail {

// Centred sums over the cells valid in both maps.
struct PairMoments {
  std::size_t n = 0;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  std::vector<double> da, db;  // deviations from the respective means
};

inline PairMoments pair_moments(const Raster& a, const Raster& b) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols())
    throw ShapeError("maps differ in shape");
  PairMoments m;
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t j = 0; j < a.ncols(); ++j)
      if (a.valid(i, j) && b.valid(i, j)) {
        m.da.push_back(a.at(i, j));
        m.db.push_back(b.at(i, j));
      }
  m.n = m.da.size();
  if (m.n < 2) throw UndefinedCorrelationError("fewer than 2 cells valid in both maps");

  const auto centre = [](std::vector<double>& v) {
    const double ref = v[0];
    double sum = 0.0;
    for (double& x : v) {
      x -= ref;
      sum += x;
    }
    const double mean = sum / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
  };
  centre(m.da);
  centre(m.db);
  for (std::size_t k = 0; k < m.n; ++k) {
    m.saa += m.da[k] * m.da[k];
    m.sbb += m.db[k] * m.db[k];
    m.sab += m.da[k] * m.db[k];
  }
  if (!(m.saa > 0.0) || !(m.sbb > 0.0))
    throw UndefinedCorrelationError("map is constant over the shared cells");
  return m;
}

}  // namespace detail

/// Pearson correlation over the cells valid in both maps.
inline double pearson(const Raster& a, const Raster& b) {
  const auto m = detail::pair_moments(a, b);
  return m.sab / std::sqrt(m.saa * m.sbb);
}

inline double pearson(const RoughnessMap& a, const RoughnessMap& b) {
  return pearson(a.grid, b.grid);
}

/// Coefficient of determination of the least-squares regression of b on a.
inline double r_squared(const Raster& a, const Raster& b) {
  const auto m = detail::pair_moments(a, b);
  const double beta = m.sab / m.saa;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < m.n; ++k) {
    const double e = m.db[k] - beta * m.da[k];
    ss_res += e * e;
  }
  const double r2 = 1.0 - ss_res / m.sbb;
  const double r = m.sab / std::sqrt(m.saa * m.sbb);
  if (std::fabs(r2 - r * r) > 1e-9)
    throw std::logic_error("regression R^2 disagrees with squared correlation");
  return r2;
}

inline double r_squared(const RoughnessMap& a, const RoughnessMap& b) {
  return r_squared(a.grid, b.grid);
}

/// Rows and columns follow kAllIndices. Undefined entries are NaN.
struct ComparisonMatrix {
  WindowScale scale;
  std::array<RoughnessIndex, 5> labels = kAllIndices;
  std::array<std::array<double, 5>, 5> r{};
  std::array<std::array<double, 5>, 5> r2{};
};

struct ScaleSweep {
  std::vector<ComparisonMatrix> matrices;
};

inline ComparisonMatrix correlation_matrix(std::span<const RoughnessMap> maps) {
  if (maps.size() != kAllIndices.size())
    throw InputSetError("expected exactly 5 roughness maps, got " + std::to_string(maps.size()));
  std::array<const RoughnessMap*, 5> slot{};
  for (const auto& m : maps) {
    auto pos = static_cast<std::size_t>(m.index);
    if (slot[pos]) throw InputSetError("duplicate roughness index " + std::string(label(m.index)));
    if (m.scale != maps[0].scale) throw InputSetError("maps come from different window scales");
    slot[pos] = &m;
  }

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ComparisonMatrix cm{maps[0].scale};
  for (std::size_t p = 0; p < 5; ++p) {
    for (std::size_t q = p; q < 5; ++q) {
      double r = nan, r2 = nan;
      try {
        if (p == q) {
          detail::pair_moments(slot[p]->grid, slot[q]->grid);
          r = r2 = 1.0;
        } else {
          r = pearson(*slot[p], *slot[q]);
          r2 = r_squared(*slot[p], *slot[q]);
        }
      } catch (const UndefinedCorrelationError&) {
      }
      cm.r[p][q] = cm.r[q][p] = r;
      cm.r2[p][q] = cm.r2[q][p] = r2;
    }
  }
  return cm;
}

/// All five maps and their matrix at each scale, in increasing scale order.
inline ScaleSweep scale_sweep(const Raster& dem, std::vector<WindowScale> scales,
                              unsigned threads = 1) {
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  if (scales.empty()) throw ParameterError("no window scales requested");
  block_grid(dem.spec(), scales.back());

  const DerivedLayers layers = compute_layers(dem, kAllIndices, threads);
  ScaleSweep sweep;
  for (const auto& s : scales) {
    const auto maps = roughness_maps(dem, layers, kAllIndices, s, threads);
    sweep.matrices.push_back(correlation_matrix(maps));
  }
  return sweep;
}

/// Full symmetric matrix with a header row and column of index labels.
inline void write_matrix_csv(std::ostream& out, const std::array<RoughnessIndex, 5>& labels,
                             const std::array<std::array<double, 5>, 5>& m) {
  out << "index";
  for (auto idx : labels) out << ',' << label(idx);
  out << '\n';
  for (std::size_t p = 0; p < 5; ++p) {
    out << label(labels[p]);
    for (std::size_t q = 0; q < 5; ++q) out << ',' << format_double(m[p][q]);
    out << '\n';
  }
}

}  // namespace roughkit
