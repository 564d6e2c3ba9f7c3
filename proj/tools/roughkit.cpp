// roughkit: point cloud -> DEM -> roughness maps -> map correlation.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roughkit/pipeline.hpp"

namespace rp = roughkit::pipeline;

namespace {

struct RawOptions {
  std::vector<std::size_t> scales{3, 5, 7, 9, 11};
  std::vector<std::string> indices{"rmsh", "ldre", "rt", "slope", "curvature"};
  std::string slope_unit = "radians";
};

void add_scales(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("-w,--scales", raw.scales, "Odd window sizes in cells")->delimiter(',');
}

void add_indices(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("-i,--indices", raw.indices, "Subset of rmsh,ldre,rt,slope,curvature")
      ->delimiter(',');
}

void add_threads(CLI::App* cmd, rp::PipelineConfig& cfg) {
  cmd->add_option("-t,--threads", cfg.threads, "Worker threads (0 = one per core)");
}

void add_roughness_flags(CLI::App* cmd, rp::PipelineConfig& cfg, RawOptions& raw) {
  cmd->add_flag("--normalize", cfg.normalize, "Also write min-max normalised _norm.asc grids");
  cmd->add_option("--slope-unit", raw.slope_unit, "Unit for written SLOPE maps")
      ->check(CLI::IsMember({"radians", "degrees"}));
}

// Translates the raw option values into the typed config; false on bad input.
bool finish_config(rp::PipelineConfig& cfg, const RawOptions& raw) {
  try {
    cfg.scales.clear();
    for (auto w : raw.scales) cfg.scales.emplace_back(w);
  } catch (const roughkit::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return false;
  }
  cfg.indices.clear();
  for (const auto& name : raw.indices) {
    auto idx = roughkit::parse_index(name);
    if (!idx) {
      std::cerr << "error: unknown roughness index '" << name << "'\n";
      return false;
    }
    cfg.indices.push_back(*idx);
  }
  cfg.slope_unit = raw.slope_unit == "degrees" ? rp::SlopeUnit::Degrees : rp::SlopeUnit::Radians;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terrain roughness from scattered ground points"};
  app.require_subcommand(1);

  rp::PipelineConfig cfg;
  RawOptions raw;
  std::string in, out;

  auto* detrend = app.add_subcommand("detrend", "Remove the global best-fit plane from an XYZ cloud");
  detrend->add_option("input", in, "Input XYZ file")->required();
  detrend->add_option("output", out, "Output XYZ file")->required();

  auto* grid = app.add_subcommand("grid", "Triangulate an XYZ cloud and sample it to an ESRI ASCII DEM");
  grid->add_option("input", in, "Input XYZ file")->required();
  grid->add_option("output", out, "Output .asc file")->required();
  grid->add_option("-c,--cell", cfg.cell, "Cell size in metres");
  add_threads(grid, cfg);

  auto* rough = app.add_subcommand("roughness", "Compute roughness maps from a DEM");
  rough->add_option("input", in, "Input .asc DEM")->required();
  rough->add_option("outdir", out, "Output directory")->required();
  add_scales(rough, raw);
  add_indices(rough, raw);
  add_roughness_flags(rough, cfg, raw);
  add_threads(rough, cfg);

  auto* compare = app.add_subcommand("compare", "Correlation and R^2 matrices across window scales");
  compare->add_option("input", in, "Input .asc DEM")->required();
  compare->add_option("outdir", out, "Output directory")->required();
  add_scales(compare, raw);
  add_threads(compare, cfg);

  auto* render = app.add_subcommand("render", "Render a grid as an 8-bit binary PGM");
  render->add_option("input", in, "Input .asc grid")->required();
  render->add_option("output", out, "Output .pgm file")->required();

  auto* all = app.add_subcommand("run-all", "detrend, grid, roughness and compare in one go");
  all->add_option("input", in, "Input XYZ file")->required();
  all->add_option("outdir", out, "Output directory")->required();
  all->add_option("-c,--cell", cfg.cell, "Cell size in metres");
  add_scales(all, raw);
  add_indices(all, raw);
  add_roughness_flags(all, cfg, raw);
  add_threads(all, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rp::kUsage;
  }
  if (!finish_config(cfg, raw)) return rp::kUsage;
  cfg.input = in;
  cfg.output_dir = out;

  if (detrend->parsed()) return rp::cmd_detrend(in, out, std::cerr);
  if (grid->parsed()) return rp::cmd_grid(in, out, cfg.cell, cfg.threads, std::cerr);
  if (rough->parsed()) return rp::cmd_roughness(cfg, std::cerr);
  if (compare->parsed()) return rp::cmd_compare(cfg, std::cerr);
  if (render->parsed()) return rp::cmd_render(in, out, std::cerr);
  if (all->parsed()) return rp::cmd_run_all(cfg, std::cerr);
  return rp::kUsage;
}
