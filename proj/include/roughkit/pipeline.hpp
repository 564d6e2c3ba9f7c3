#pragma once

// File-level pipeline stages behind the command-line tool. Each returns a
// process exit status: 0 success, 1 usage error, 2 data error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "roughkit/compare.hpp"
#include "roughkit/error.hpp"
#include "roughkit/esri_ascii.hpp"
#include "roughkit/format.hpp"
#include "roughkit/gridding.hpp"
#include "roughkit/pointcloud.hpp"
#include "roughkit/render.hpp"
#include "roughkit/roughness.hpp"

namespace roughkit::pipeline {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

enum class SlopeUnit { Radians, Degrees };

struct PipelineConfig {
  fs::path input;
  fs::path output_dir = ".";
  double cell = 1.0;
  std::vector<WindowScale> scales = default_scales();
  std::vector<RoughnessIndex> indices{kAllIndices.begin(), kAllIndices.end()};
  bool normalize = false;
  SlopeUnit slope_unit = SlopeUnit::Radians;
  unsigned threads = 0;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return in;
}

inline std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

inline void close_checked(std::ofstream& out, const fs::path& p) {
  out.close();
  if (!out) throw IoError("failed writing " + p.string());
}

inline int guarded(std::ostream& diag, const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const ParameterError& e) {
    diag << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    diag << "error: " << e.what() << '\n';
    return kData;
  }
}

inline PointCloud read_cloud(const fs::path& p) {
  auto in = open_in(p);
  return load_xyz(in);
}

inline Raster read_grid(const fs::path& p) {
  auto in = open_in(p);
  return read_esri_ascii(in);
}

inline void write_grid(const fs::path& p, const Raster& r) {
  auto out = open_out(p);
  write_esri_ascii(out, r);
  close_checked(out, p);
}

}  // namespace detail

inline fs::path report_path(const fs::path& detrended) {
  return fs::path(detrended.string() + ".report.txt");
}

inline fs::path roughness_path(const fs::path& dir, const std::string& stem, RoughnessIndex idx,
                               WindowScale w, bool normalized = false) {
  return dir / (stem + "_" + slug(idx) + "_w" + std::to_string(w.size()) +
                (normalized ? "_norm" : "") + ".asc");
}

inline fs::path matrix_path(const fs::path& dir, const std::string& kind, WindowScale w) {
  return dir / (kind + "_w" + std::to_string(w.size()) + ".csv");
}

/// Fits and removes the global plane; writes the residual cloud and a
/// key = value report next to it.
inline int cmd_detrend(const fs::path& in, const fs::path& out, std::ostream& diag) {
  return detail::guarded(diag, [&] {
    const PointCloud cloud = detail::read_cloud(in);
    const PlaneFit plane = fit_plane(cloud);
    const double spacing = mean_spacing(cloud);
    const PointCloud flat = detrend(cloud, plane);

    auto o = detail::open_out(out);
    write_xyz(o, flat);
    detail::close_checked(o, out);

    const fs::path rp = report_path(out);
    auto r = detail::open_out(rp);
    r << "points = " << cloud.size() << '\n'
      << "b0 = " << format_double(plane.b0) << '\n'
      << "b1 = " << format_double(plane.b1) << '\n'
      << "b2 = " << format_double(plane.b2) << '\n'
      << "mean_spacing = " << format_double(spacing) << '\n';
    detail::close_checked(r, rp);
  });
}

inline int cmd_grid(const fs::path& in, const fs::path& out, double cell, unsigned threads,
                    std::ostream& diag) {
  return detail::guarded(diag, [&] {
    if (!(cell > 0.0)) throw ParameterError("cell size must be > 0");
    const PointCloud cloud = detail::read_cloud(in);
    const Tin tin = delaunay(cloud);
    if (tin.duplicates_removed)
      diag << "warning: " << tin.duplicates_removed
           << " points shared an (x, y) location; kept the last of each\n";
    const Dem dem = interpolate_grid(tin, make_grid_spec(cloud, cell), threads);
    detail::write_grid(out, dem);
  });
}

inline int cmd_roughness(const PipelineConfig& cfg, std::ostream& diag) {
  return detail::guarded(diag, [&] {
    const Raster dem = detail::read_grid(cfg.input);
    for (const auto& s : cfg.scales) block_grid(dem.spec(), s);
    const std::string stem = cfg.input.stem().string();
    const DerivedLayers layers = compute_layers(dem, cfg.indices, cfg.threads);
    for (const auto& s : cfg.scales) {
      for (auto idx : cfg.indices) {
        RoughnessMap m = roughness_map(dem, layers, idx, s, cfg.threads);
        if (cfg.normalize)
          detail::write_grid(roughness_path(cfg.output_dir, stem, idx, s, true),
                             normalize01(m).grid);
        if (idx == RoughnessIndex::Slope && cfg.slope_unit == SlopeUnit::Degrees) {
          Raster deg(m.grid.spec());
          for (std::size_t i = 0; i < deg.nrows(); ++i)
            for (std::size_t j = 0; j < deg.ncols(); ++j)
              if (m.grid.valid(i, j)) deg.set(i, j, m.grid.at(i, j) * (180.0 / std::numbers::pi));
          m.grid = std::move(deg);
        }
        detail::write_grid(roughness_path(cfg.output_dir, stem, idx, s), m.grid);
      }
    }
  });
}

inline int cmd_compare(const PipelineConfig& cfg, std::ostream& diag) {
  return detail::guarded(diag, [&] {
    const Raster dem = detail::read_grid(cfg.input);
    const ScaleSweep sweep = scale_sweep(dem, cfg.scales, cfg.threads);
    for (const auto& m : sweep.matrices) {
      for (const auto& [kind, values] : {std::pair{"corr", &m.r}, std::pair{"r2", &m.r2}}) {
        const fs::path p = matrix_path(cfg.output_dir, kind, m.scale);
        auto o = detail::open_out(p);
        write_matrix_csv(o, m.labels, *values);
        detail::close_checked(o, p);
      }
    }
  });
}

inline int cmd_render(const fs::path& in, const fs::path& out, std::ostream& diag) {
  return detail::guarded(diag, [&] {
    const Raster r = detail::read_grid(in);
    auto o = detail::open_out(out);
    write_pgm(o, r);
    detail::close_checked(o, out);
  });
}

/// detrend -> grid -> roughness -> compare, chained through the same files
/// the individual stages would produce.
inline int cmd_run_all(const PipelineConfig& cfg, std::ostream& diag) {
  const fs::path dir = cfg.output_dir;
  const fs::path xyz = dir / "detrended.xyz";
  const fs::path dem = dir / "dem.asc";
  if (int rc = cmd_detrend(cfg.input, xyz, diag)) return rc;
  if (int rc = cmd_grid(xyz, dem, cfg.cell, cfg.threads, diag)) return rc;
  PipelineConfig stage = cfg;
  stage.input = dem;
  if (int rc = cmd_roughness(stage, diag)) return rc;
  return cmd_compare(stage, diag);
}

}  // namespace roughkit::pipeline
