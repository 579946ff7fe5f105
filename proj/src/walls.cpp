#include "softwall/walls.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "softwall/errors.hpp"

namespace softwall {

SoftWallProfile::SoftWallProfile(int block_dim, Eval eval, double lipschitz, std::string name,
                                 Saturation saturation)
    : block_dim_(block_dim),
      eval_(std::move(eval)),
      lipschitz_(lipschitz),
      name_(std::move(name)),
      saturation_(std::move(saturation)) {
  if (block_dim_ <= 0) throw Error(ErrorCode::InvalidModel, "wall block dimension must be positive");
  if (!(lipschitz_ >= 0.0)) throw Error(ErrorCode::InvalidModel, "wall Lipschitz constant must be >= 0");
  if (!eval_) throw Error(ErrorCode::InvalidModel, "wall profile has no evaluator");
}

std::optional<double> SoftWallProfile::saturation_point(double level) const {
  if (!saturation_) return std::nullopt;
  return saturation_(level);
}

namespace walls {

SoftWallProfile linear_ramp(double nu, std::vector<double> offsets) {
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidModel, "linear_ramp needs nu > 0");
  if (offsets.empty()) throw Error(ErrorCode::InvalidModel, "linear_ramp needs at least one offset");
  const int n = static_cast<int>(offsets.size());
  const double dmax = *std::max_element(offsets.begin(), offsets.end());
  auto eval = [nu, offsets](double x) {
    CMatrix w = CMatrix::Zero(static_cast<Eigen::Index>(offsets.size()),
                              static_cast<Eigen::Index>(offsets.size()));
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = std::max(0.0, -nu * (x + offsets[j]));
    }
    return w;
  };
  auto sat = [nu, dmax](double level) -> std::optional<double> {
    return -std::max(level, 0.0) / nu - dmax;
  };
  return SoftWallProfile(n, eval, nu, "linear_ramp", sat);
}

SoftWallProfile smooth_sqrt() {
  auto eval = [](double x) {
    CMatrix w(1, 1);
    w(0, 0) = 0.5 * (std::hypot(x, 1.0) - x);
    return w;
  };
  // (sqrt(x^2+1) - x)/2 >= -x for x <= 0
  auto sat = [](double level) -> std::optional<double> { return -std::max(level, 0.0); };
  return SoftWallProfile(1, eval, 1.0, "smooth_sqrt", sat);
}

SoftWallProfile custom_table(std::vector<double> xs, std::vector<CMatrix> ws) {
  if (xs.size() < 2 || xs.size() != ws.size()) {
    throw Error(ErrorCode::InvalidModel, "custom_table needs >= 2 samples with matching x and w");
  }
  const int n = static_cast<int>(ws.front().rows());
  double lip = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ws[i].rows() != n || ws[i].cols() != n) {
      throw Error(ErrorCode::InvalidModel, "custom_table samples must share one square shape");
    }
    if (hermitian_defect(ws[i]) >= kHermitianTol) {
      throw Error(ErrorCode::InvalidModel, "custom_table sample " + std::to_string(i) + " is not Hermitian");
    }
    if (i > 0) {
      if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidModel, "custom_table x must be strictly ascending");
      lip = std::max(lip, op_norm(ws[i] - ws[i - 1]) / (xs[i] - xs[i - 1]));
    }
  }
  auto eval = [xs, ws](double x) -> CMatrix {
    if (x >= xs.back()) return ws.back();
    std::size_t i = 0;
    if (x > xs.front()) {
      i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    }
    const double s = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1.0 - s) * ws[i] + s * ws[i + 1];
  };
  return SoftWallProfile(n, eval, lip, "custom_table");
}

SoftWallProfile zero(int block_dim) {
  auto eval = [block_dim](double) -> CMatrix { return CMatrix::Zero(block_dim, block_dim); };
  return SoftWallProfile(block_dim, eval, 0.0, "zero");
}

SoftWallProfile broadcast(const SoftWallProfile& scalar, int block_dim) {
  if (scalar.block_dim() != 1) throw Error(ErrorCode::InvalidModel, "broadcast needs a scalar profile");
  auto eval = [scalar, block_dim](double x) -> CMatrix {
    return scalar(x)(0, 0) * CMatrix::Identity(block_dim, block_dim);
  };
  auto sat = [scalar](double level) { return scalar.saturation_point(level); };
  return SoftWallProfile(block_dim, eval, scalar.lipschitz(), scalar.name(), sat);
}

}  // namespace walls

std::vector<CMatrix> shifted_wall_blocks(const SoftWallProfile& w, double t, int first, int last) {
  std::vector<CMatrix> out;
  if (last < first) return out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (int n = first; n <= last; ++n) out.push_back(w(static_cast<double>(n) - t));
  return out;
}

std::vector<double> wall_spectrum(const SoftWallProfile& w, double t, int first, int last) {
  std::vector<double> all;
  for (const auto& block : shifted_wall_blocks(w, t, first, last)) {
    const auto ev = eigvalsh_dense(block);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

double min_eig(const CMatrix& m) { return eigvalsh_dense(m).front(); }

double scan_saturation(const SoftWallProfile& w, double sigma, double window) {
  // Sample spacing h with the Lipschitz pad nu*h/2 makes w >= sigma between samples.
  const double h = 0.25;
  const double pad = 0.5 * w.lipschitz() * h;
  double last_fail = -1.0 + h;
  for (double x = -1.0; x >= -window; x -= h) {
    if (min_eig(w(x)) < sigma + pad) last_fail = x;
  }
  const double x_sigma = last_fail - h;
  if (x_sigma < -0.9 * window) {
    throw Error(ErrorCode::SaturationNotFound,
                "wall '" + w.name() + "' does not stay above " + std::to_string(sigma) +
                    " on the scanned window [" + std::to_string(-window) + ", -1]");
  }
  return x_sigma;
}

}  // namespace

SteepWall steep_wall(const SoftWallProfile& w, const PeriodicJacobi& jacobi, double E,
                     std::optional<double> sigma_override, double search_window) {
  if (w.block_dim() != jacobi.block_dim()) {
    throw Error(ErrorCode::InvalidModel, "wall and model block dimensions differ");
  }
  const double c_ab = jacobi.c_ab();
  const double sigma = sigma_override.value_or(E + 4.0 * c_ab + 1.0);
  double x_sigma = 0.0;
  if (auto known = w.saturation_point(sigma)) {
    x_sigma = std::min(*known, -1.0);
  } else {
    x_sigma = scan_saturation(w, sigma, search_window);
  }
  const int n = jacobi.block_dim();
  const CMatrix top = sigma * CMatrix::Identity(n, n) - jacobi.diag();

  double blend_excess = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = x_sigma - 1.0 + i / 64.0;
    blend_excess = std::max(blend_excess, op_norm(w(x) - top));
  }
  const double lip = std::max(op_norm(top), w.lipschitz() + blend_excess);

  auto eval = [w, top, x_sigma](double x) -> CMatrix {
    if (x >= 0.0) return CMatrix::Zero(top.rows(), top.cols());
    if (x >= -1.0) return -x * top;
    if (x >= x_sigma) return top;
    if (x >= x_sigma - 1.0) return (x - x_sigma + 1.0) * top + (x_sigma - x) * w(x);
    return w(x);
  };
  SoftWallProfile profile(n, eval, lip, "steep(" + w.name() + ")");
  return SteepWall{std::move(profile), sigma, x_sigma, c_ab, E};
}

ProfileCheck check_profile(const SoftWallProfile& w, std::uint64_t seed, int pairs) {
  ProfileCheck r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const double x = dist(rng);
    const double y = dist(rng);
    worst = std::max(worst, op_norm(w(x) - w(y)) - w.lipschitz() * std::abs(x - y));
  }
  r.worst_lipschitz_excess = worst;
  r.lipschitz_ok = worst <= 1e-9;
  const double n3 = op_norm(w(1e3));
  const double n4 = op_norm(w(1e4));
  r.right_decay_ok = n4 <= n3 && n4 < 1.0;
  r.left_growth_ok = min_eig(w(-1e3)) > min_eig(w(-10.0));
  return r;
}

}  // namespace softwall
