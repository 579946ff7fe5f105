#pragma once

// Soft walls w : R -> Hermitian N x N, the shifted wall operator
// (W(t) psi)_n = w(n - t) psi_n, and the steep-wall replacement w_Sigma.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "softwall/linalg.hpp"
#include "softwall/tb_core.hpp"

namespace softwall {

class SoftWallProfile {
 public:
  using Eval = std::function<CMatrix(double)>;
  /// Given a level s, returns some x_s with w(x) >= s for every x < x_s, when known.
  using Saturation = std::function<std::optional<double>(double)>;

  SoftWallProfile(int block_dim, Eval eval, double lipschitz, std::string name,
                  Saturation saturation = {});

  int block_dim() const { return block_dim_; }
  double lipschitz() const { return lipschitz_; }
  const std::string& name() const { return name_; }

  CMatrix operator()(double x) const { return eval_(x); }
  CMatrix eval(double x) const { return eval_(x); }

  std::optional<double> saturation_point(double level) const;

 private:
  int block_dim_;
  Eval eval_;
  double lipschitz_;
  std::string name_;
  Saturation saturation_;
};

namespace walls {

/// w(x) = diag(max(0, -nu (x + d_j))), one entry per offset d_j.
SoftWallProfile linear_ramp(double nu, std::vector<double> offsets = {0.0});

/// w(x) = (sqrt(x^2 + 1) - x) / 2, N = 1, 1-Lipschitz.
SoftWallProfile smooth_sqrt();

/// Piecewise-linear interpolation of (x_i, w_i). Left of x_0 the first segment is
/// continued linearly; right of x_last the last sample is held constant.
SoftWallProfile custom_table(std::vector<double> xs, std::vector<CMatrix> ws);

SoftWallProfile zero(int block_dim);

/// Scalar profile applied identically to N orbitals.
SoftWallProfile broadcast(const SoftWallProfile& scalar, int block_dim);

}  // namespace walls

/// Block n - first equals w(n - t), for n in [first, last].
std::vector<CMatrix> shifted_wall_blocks(const SoftWallProfile& w, double t, int first, int last);

/// Sorted union of the eigenvalues of w(n - t) over n in [first, last].
std::vector<double> wall_spectrum(const SoftWallProfile& w, double t, int first, int last);

struct SteepWall {
  SoftWallProfile profile;
  double sigma = 0.0;
  double x_sigma = 0.0;
  double c_ab = 0.0;
  double E = 0.0;
};

inline constexpr double kSaturationWindow = 1e4;

/// Builds w_Sigma with Sigma = E + 4 C_ab + 1 (or the override). x_Sigma comes from the
/// profile's saturation point if known; otherwise it is located by a sampled scan that
/// uses the declared Lipschitz constant to certify w >= Sigma between samples.
SteepWall steep_wall(const SoftWallProfile& w, const PeriodicJacobi& jacobi, double E,
                     std::optional<double> sigma = std::nullopt,
                     double search_window = kSaturationWindow);

struct ProfileCheck {
  bool lipschitz_ok = false;
  bool right_decay_ok = false;
  bool left_growth_ok = false;
  double worst_lipschitz_excess = 0.0;  // max of ||w(x)-w(x')|| - nu |x-x'|
  bool ok() const { return lipschitz_ok && right_decay_ok && left_growth_ok; }
};

ProfileCheck check_profile(const SoftWallProfile& w, std::uint64_t seed = 1, int pairs = 1000);

}  // namespace softwall
