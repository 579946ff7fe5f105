#include "softwall/edge.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "softwall/errors.hpp"
#include "softwall/parallel.hpp"
#include "softwall/simd/kernels.hpp"

namespace softwall {

EdgeTruncation assemble_edge(const ConvolutionKernel& kernel, const SoftWallProfile& wall, double t, int L) {
  if (kernel.block_dim() != wall.block_dim()) {
    throw Error(ErrorCode::InvalidModel, "model and wall block dimensions differ (" +
                                             std::to_string(kernel.block_dim()) + " vs " +
                                             std::to_string(wall.block_dim()) + ")");
  }
  if (L < kernel.range() + 2) {
    throw Error(ErrorCode::BoxTooSmall, "L = " + std::to_string(L) + " < range + 2 = " +
                                            std::to_string(kernel.range() + 2));
  }
  const int n = kernel.block_dim();
  const int sites = 2 * L + 1;
  EdgeTruncation tr{L, n, t, CMatrix::Zero(sites * n, sites * n)};
  for (int i = 0; i < sites; ++i) {
    for (const auto& [d, h] : kernel.blocks()) {
      const int j = i - d;
      if (j < 0 || j >= sites) continue;
      tr.matrix.block(i * n, j * n, n, n) += h;
    }
    tr.matrix.block(i * n, i * n, n, n) += wall(static_cast<double>(i - L) - t);
  }
  return tr;
}

double interior_mass(const CVector& u, int L, int block_dim, int lo, int hi) {
  lo = std::max(lo, -L);
  hi = std::min(hi, L);
  if (hi < lo) return 0.0;
  const auto begin = static_cast<std::size_t>((lo + L) * block_dim);
  const auto count = static_cast<std::size_t>((hi - lo + 1) * block_dim);
  return std::sqrt(simd::sum_abs2(std::span<const cplx>(u.data() + begin, count)));
}

namespace {

std::pair<int, int> resolve_window(const ClassifyOptions& opts, int L) {
  if (opts.window) return *opts.window;
  return {-L / 2, L / 2};
}

}  // namespace

std::vector<EdgeMode> eigensolve_classify(const EdgeTruncation& tr, const ClassifyOptions& opts) {
  const auto eig = eigh(tr.matrix);
  const auto [lo, hi] = resolve_window(opts, tr.L);
  std::vector<EdgeMode> modes(eig.values.size());
  for (std::size_t j = 0; j < modes.size(); ++j) {
    auto& m = modes[j];
    const CVector u = eig.vectors.col(static_cast<Eigen::Index>(j));
    m.eigenvalue = eig.values[j];
    m.interior_mass = interior_mass(u, tr.L, tr.block_dim, lo, hi);
    m.is_edge = m.interior_mass >= opts.threshold;
    m.marginal = !m.is_edge && m.interior_mass >= kMarginalMass;
    if (opts.keep_vectors) m.vector = u;
  }
  return modes;
}

EdgeSweep edge_sweep_t(const ConvolutionKernel& kernel, const SoftWallProfile& wall, int L,
                       const std::vector<double>& t_grid, const SweepOptions& opts) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw Error(ErrorCode::Config, "t_grid must be ascending");
  }
  EdgeSweep sweep{L, kernel.block_dim(), std::vector<EdgeSweepPoint>(t_grid.size())};
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const auto tr = assemble_edge(kernel, wall, t_grid[i], L);
    auto& pt = sweep.points[i];
    pt.t = t_grid[i];
    if (!opts.with_modes) {
      pt.eigenvalues = eigvalsh(tr.matrix);
      return;
    }
    ClassifyOptions co = opts.classify;
    co.keep_vectors = false;
    const auto modes = eigensolve_classify(tr, co);
    for (const auto& m : modes) {
      pt.eigenvalues.push_back(m.eigenvalue);
      pt.interior_mass.push_back(m.interior_mass);
      pt.is_edge.push_back(m.is_edge ? 1 : 0);
      pt.marginal.push_back(m.marginal ? 1 : 0);
    }
  });
  return sweep;
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> g;
  if (count <= 0) return g;
  if (count == 1) return {lo};
  g.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
  g.back() = hi;
  return g;
}

void write_edge_csv(std::ostream& os, const EdgeSweep& sweep) {
  os << "t,index,eigenvalue,interior_mass,is_edge\n";
  char buf[128];
  for (const auto& pt : sweep.points) {
    for (std::size_t j = 0; j < pt.eigenvalues.size(); ++j) {
      const double mass = pt.interior_mass.empty() ? 0.0 : pt.interior_mass[j];
      const int edge = pt.is_edge.empty() ? 0 : pt.is_edge[j];
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g,%d\n", pt.t, j, pt.eigenvalues[j], mass, edge);
      os << buf;
    }
  }
}

}  // namespace softwall
