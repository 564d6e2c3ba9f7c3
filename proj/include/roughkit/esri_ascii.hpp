#pragma once

// ESRI ASCII grid reader/writer. Values are written in shortest round-trip
// form; NoData cells are written as -9999.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "roughkit/error.hpp"
#include "roughkit/format.hpp"
#include "roughkit/raster_types.hpp"

namespace roughkit {

inline constexpr double kNoDataValue = -9999.0;

inline void write_esri_ascii(std::ostream& out, const Raster& r) {
  const GridSpec& s = r.spec();
  out << "ncols " << s.ncols << '\n'
      << "nrows " << s.nrows << '\n'
      << "xllcorner " << format_double(s.x0) << '\n'
      << "yllcorner " << format_double(s.y0) << '\n'
      << "cellsize " << format_double(s.cell) << '\n'
      << "NODATA_value -9999\n";
  std::string line;
  for (std::size_t i = 0; i < s.nrows; ++i) {
    line.clear();
    for (std::size_t j = 0; j < s.ncols; ++j) {
      if (j) line += ' ';
      line += r.valid(i, j) ? format_double(r.at(i, j)) : std::string("-9999");
    }
    line += '\n';
    out << line;
  }
}

inline Raster read_esri_ascii(std::istream& in) {
  std::optional<double> ncols, nrows, xll, yll, cell;
  bool x_center = false, y_center = false;
  double nodata = kNoDataValue;

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string_view> toks;
  std::string pending;  // first data line, if the header ended without a blank
  while (std::getline(in, line)) {
    ++lineno;
    toks.clear();
    split_ws(line, [&](std::string_view t) { toks.push_back(t); });
    if (toks.empty()) continue;
    if (!std::isalpha(static_cast<unsigned char>(toks[0][0]))) {
      pending = line;
      break;
    }
    if (toks.size() != 2) throw ParseError(lineno, "malformed header line");
    std::string key(toks[0]);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto v = parse_double(toks[1]);
    if (!v) throw ParseError(lineno, "non-numeric header value");
    if (key == "ncols") ncols = v;
    else if (key == "nrows") nrows = v;
    else if (key == "xllcorner") xll = v;
    else if (key == "yllcorner") yll = v;
    else if (key == "xllcenter") xll = v, x_center = true;
    else if (key == "yllcenter") yll = v, y_center = true;
    else if (key == "cellsize") cell = v;
    else if (key == "nodata_value") nodata = *v;
    else throw ParseError(lineno, "unknown header key '" + key + "'");
  }
  if (!ncols || !nrows || !xll || !yll || !cell)
    throw ParseError(lineno, "incomplete ESRI ASCII header");
  if (*ncols < 1 || *nrows < 1 || *ncols != std::floor(*ncols) || *nrows != std::floor(*nrows))
    throw ParseError(lineno, "ncols/nrows must be positive integers");

  GridSpec spec;
  spec.ncols = static_cast<std::size_t>(*ncols);
  spec.nrows = static_cast<std::size_t>(*nrows);
  spec.cell = *cell;
  spec.x0 = x_center ? *xll - 0.5 * *cell : *xll;
  spec.y0 = y_center ? *yll - 0.5 * *cell : *yll;
  try {
    spec.validate();
  } catch (const ParameterError& e) {
    throw ParseError(lineno, e.what());
  }

  Raster r(spec);
  std::size_t k = 0;
  const std::size_t total = spec.size();
  bool first = !pending.empty();
  std::size_t data_line = lineno;
  while (first || std::getline(in, line)) {
    if (first) {
      line = pending;
      first = false;
    } else {
      ++lineno;
      data_line = lineno;
    }
    bool bad = false;
    split_ws(line, [&](std::string_view t) {
      if (bad) return;
      auto v = parse_double(t);
      if (!v || k >= total) {
        bad = true;
        return;
      }
      const std::size_t i = k / spec.ncols, j = k % spec.ncols;
      if (*v == nodata) r.set_nodata(i, j);
      else if (!std::isfinite(*v)) bad = true;
      else r.set(i, j, *v);
      ++k;
    });
    if (bad)
      throw ParseError(data_line, k >= total ? "too many values" : "non-numeric grid value");
  }
  if (k != total)
    throw ParseError(lineno, "expected " + std::to_string(total) + " values, got " +
                                 std::to_string(k));
  return r;
}

}  // namespace roughkit
