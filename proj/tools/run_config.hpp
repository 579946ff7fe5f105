#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "softwall/lattice2d.hpp"
#include "softwall/tb_core.hpp"
#include "softwall/walls.hpp"

namespace softwall::cli {

struct WallConfig {
  std::string type = "linear_ramp";  // linear_ramp | smooth_sqrt | custom_table | zero
  double nu = 1.0;
  std::vector<double> offsets;       // linear_ramp; empty means one zero offset per orbital
  std::vector<double> table_x;       // custom_table, scalar samples
  std::vector<double> table_w;
  bool steep = false;                // replace by w_Sigma (1D Jacobi models only)
  std::optional<double> sigma;
};

struct RankConfig {
  Interval window{-0.5, 0.5};
  double t = 0.5;
  std::vector<int> ells{8, 16, 32, 64};
};

struct RunConfig {
  std::string model_name;
  std::optional<ConvolutionKernel> kernel;  // 1D models
  std::optional<TightBinding2D> model2d;    // 2D models, already cut when a cut preset is used
  std::optional<std::pair<int, int>> cut;   // (n, m) of a cut preset
  WallConfig wall;

  int t_points = 200;
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::vector<double> k2;  // fractions of a2*
  int k_count = kDefaultKCount;
  int L = 100;
  std::vector<double> energies{0.0};

  std::vector<int> rings;
  std::optional<RankConfig> rank;
  std::vector<double> density_t0;
  std::optional<double> density_length;
  int fold_samples = 100;

  std::string output = ".";

  bool is_2d() const { return model2d.has_value(); }
};

/// Expands presets, validates, and fills defaults. Throws Error(Config) with a JSON pointer.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");

/// Scalar profile for 2D models, block profile for 1D models.
SoftWallProfile base_wall(const RunConfig& cfg, int block_dim);

/// The 1D problem at a given k2 fraction (ignored for 1D models).
ConvolutionKernel kernel_at(const RunConfig& cfg, double k2 = 0.0);

/// Wall seen by kernel_at: broadcast or ramp for 1D, the reduced 2D wall otherwise.
/// Steep walls need the energy they are built for.
SoftWallProfile wall_at(const RunConfig& cfg, double E = 0.0);

std::optional<PeriodicJacobi> jacobi_of(const RunConfig& cfg);

}  // namespace softwall::cli
