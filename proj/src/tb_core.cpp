#include "softwall/tb_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "softwall/errors.hpp"
#include "softwall/parallel.hpp"
#include "softwall/simd/kernels.hpp"

namespace softwall {

namespace {

void require_shape(const CMatrix& m, int n, const std::string& what) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::InvalidModel, what + " must be " + std::to_string(n) + "x" +
                                             std::to_string(n));
  }
}

}  // namespace

ConvolutionKernel::ConvolutionKernel(int block_dim, std::map<int, CMatrix> blocks)
    : block_dim_(block_dim), blocks_(std::move(blocks)) {
  if (block_dim_ <= 0) throw Error(ErrorCode::InvalidModel, "block dimension must be positive");
  for (const auto& [n, h] : blocks_) {
    require_shape(h, block_dim_, "block h(" + std::to_string(n) + ")");
    const auto partner = blocks_.find(-n);
    if (partner == blocks_.end()) {
      throw Error(ErrorCode::InvalidModel,
                  "h(" + std::to_string(n) + ") has no partner h(" + std::to_string(-n) + ")");
    }
    if (max_abs(partner->second - h.adjoint()) >= kHermitianTol) {
      throw Error(ErrorCode::InvalidModel,
                  "h(-n) != h(n)^* for n = " + std::to_string(n));
    }
  }
}

ConvolutionKernel ConvolutionKernel::hermitian_completion(int block_dim,
                                                          std::map<int, CMatrix> blocks) {
  std::map<int, CMatrix> full = blocks;
  for (const auto& [n, h] : blocks) {
    if (!full.contains(-n)) full.emplace(-n, h.adjoint());
  }
  return ConvolutionKernel(block_dim, std::move(full));
}

ConvolutionKernel ConvolutionKernel::zero(int block_dim) { return ConvolutionKernel(block_dim, {}); }

int ConvolutionKernel::range() const {
  int r = 0;
  for (const auto& [n, h] : blocks_) r = std::max(r, std::abs(n));
  return r;
}

std::vector<int> ConvolutionKernel::support() const {
  std::vector<int> s;
  s.reserve(blocks_.size());
  for (const auto& [n, h] : blocks_) s.push_back(n);
  return s;
}

CMatrix ConvolutionKernel::block(int n) const {
  const auto it = blocks_.find(n);
  if (it == blocks_.end()) return CMatrix::Zero(block_dim_, block_dim_);
  return it->second;
}

double ConvolutionKernel::l1_norm() const {
  double s = 0.0;
  for (const auto& [n, h] : blocks_) s += op_norm(h);
  return s;
}

double ConvolutionKernel::k_lipschitz() const {
  double s = 0.0;
  for (const auto& [n, h] : blocks_) s += std::abs(n) * op_norm(h);
  return s;
}

PeriodicJacobi::PeriodicJacobi(CMatrix diag, CMatrix offdiag)
    : b_(std::move(diag)), a_(std::move(offdiag)) {
  const int n = static_cast<int>(b_.rows());
  if (n <= 0) throw Error(ErrorCode::InvalidModel, "Jacobi blocks must be non-empty");
  require_shape(b_, n, "diagonal block b");
  require_shape(a_, n, "off-diagonal block a");
  if (hermitian_defect(b_) >= kHermitianTol) {
    throw Error(ErrorCode::InvalidModel, "diagonal block b is not Hermitian");
  }
}

PeriodicJacobi PeriodicJacobi::from_kernel(const ConvolutionKernel& kernel) {
  if (kernel.range() > 1) {
    throw Error(ErrorCode::RangeExceeded, "kernel range " + std::to_string(kernel.range()) +
                                              " is not Jacobi (needs range <= 1)");
  }
  return PeriodicJacobi(kernel.block(0), kernel.block(-1));
}

ConvolutionKernel PeriodicJacobi::to_kernel() const {
  std::map<int, CMatrix> blocks;
  blocks.emplace(0, b_);
  if (max_abs(a_) > 0.0) {
    blocks.emplace(-1, a_);
    blocks.emplace(1, a_.adjoint());
  }
  return ConvolutionKernel(block_dim(), std::move(blocks));
}

double PeriodicJacobi::c_ab() const { return std::max(op_norm(a_), op_norm(b_)); }

CMatrix bloch_fiber(const ConvolutionKernel& kernel, double k) {
  const int n = kernel.block_dim();
  CMatrix hk = CMatrix::Zero(n, n);
  std::span<cplx> out(hk.data(), static_cast<std::size_t>(hk.size()));
  for (const auto& [m, h] : kernel.blocks()) {
    const cplx phase = std::polar(1.0, -k * static_cast<double>(m));
    simd::caxpy(phase, std::span<const cplx>(h.data(), static_cast<std::size_t>(h.size())), out);
  }
  return hk;
}

CMatrix bloch_fiber(const PeriodicJacobi& jacobi, double k) {
  return bloch_fiber(jacobi.to_kernel(), k);
}

BandStructure band_structure(const ConvolutionKernel& kernel, int k_count) {
  if (k_count < 2) throw Error(ErrorCode::InvalidModel, "k_count must be >= 2");
  BandStructure bs;
  bs.block_dim = kernel.block_dim();
  bs.k_grid.resize(static_cast<std::size_t>(k_count));
  bs.curves.resize(static_cast<std::size_t>(k_count));
  const double pi = std::numbers::pi;
  for (int j = 0; j < k_count; ++j) {
    bs.k_grid[static_cast<std::size_t>(j)] = -pi + 2.0 * pi * (j + 1) / k_count;
  }
  parallel_for(bs.k_grid.size(), [&](std::size_t i) {
    bs.curves[i] = eigvalsh_dense(bloch_fiber(kernel, bs.k_grid[i]));
  });
  bs.grid_error = kernel.k_lipschitz() * pi / k_count;
  return bs;
}

GapCatalog gap_catalog(const BandStructure& bs) {
  GapCatalog cat;
  cat.grid_error = bs.grid_error;
  const int n = bs.block_dim;
  const double inf = std::numeric_limits<double>::infinity();
  cat.bands.assign(static_cast<std::size_t>(n), Interval{inf, -inf});
  for (const auto& col : bs.curves) {
    for (int j = 0; j < n; ++j) {
      auto& band = cat.bands[static_cast<std::size_t>(j)];
      band.lo = std::min(band.lo, col[static_cast<std::size_t>(j)]);
      band.hi = std::max(band.hi, col[static_cast<std::size_t>(j)]);
    }
  }
  if (n == 0) return cat;

  const double min_spacing = 10.0 * bs.grid_error;
  cat.gaps.push_back(Gap{-inf, cat.bands[0].lo, 0});
  double cluster_hi = cat.bands[0].hi;
  for (int j = 1; j < n; ++j) {
    const auto& band = cat.bands[static_cast<std::size_t>(j)];
    const double spacing = band.lo - cluster_hi;
    if (spacing > 0.0 && spacing > min_spacing) {
      cat.gaps.push_back(Gap{cluster_hi, band.lo, j});
    }
    cluster_hi = std::max(cluster_hi, band.hi);
  }
  cat.gaps.push_back(Gap{cluster_hi, inf, n});
  return cat;
}

std::optional<Gap> find_gap(const GapCatalog& catalog, double E, double margin) {
  for (const auto& band : catalog.bands) {
    if (E >= band.lo - margin && E <= band.hi + margin) return std::nullopt;
  }
  for (const auto& gap : catalog.gaps) {
    if (E > gap.lo + margin && E < gap.hi - margin) return gap;
  }
  return std::nullopt;
}

int count_bands_below(const GapCatalog& catalog, double E, double margin) {
  const auto gap = find_gap(catalog, E, margin);
  if (!gap) {
    throw Error(ErrorCode::EInBand, "E = " + std::to_string(E) +
                                        " is not in a certified bulk gap; the flow is undefined");
  }
  return gap->bands_below;
}

int count_bands_below(const BandStructure& bands, double E, double margin) {
  return count_bands_below(gap_catalog(bands), E, margin);
}

PeriodicJacobi supercell_jacobi(const ConvolutionKernel& kernel, int ell) {
  if (ell < 1) throw Error(ErrorCode::RangeExceeded, "supercell size must be >= 1");
  if (kernel.range() > ell) {
    throw Error(ErrorCode::RangeExceeded, "kernel range " + std::to_string(kernel.range()) +
                                              " exceeds supercell size " + std::to_string(ell));
  }
  const int n = kernel.block_dim();
  CMatrix b = CMatrix::Zero(ell * n, ell * n);
  CMatrix a = CMatrix::Zero(ell * n, ell * n);
  for (int i = 0; i < ell; ++i) {
    for (int j = 0; j < ell; ++j) {
      b.block(i * n, j * n, n, n) = kernel.block(i - j);
      if (i >= j) a.block(i * n, j * n, n, n) = kernel.block(i - j - ell);
    }
  }
  return PeriodicJacobi(std::move(b), std::move(a));
}

PeriodicJacobi fold_periodic_chain(const std::vector<CMatrix>& diag, const std::vector<CMatrix>& hop) {
  if (diag.empty() || diag.size() != hop.size()) {
    throw Error(ErrorCode::InvalidModel, "periodic chain needs matching, non-empty diag/hop lists");
  }
  const int period = static_cast<int>(diag.size());
  const int n = static_cast<int>(diag.front().rows());
  CMatrix b = CMatrix::Zero(period * n, period * n);
  CMatrix a = CMatrix::Zero(period * n, period * n);
  for (int j = 0; j < period; ++j) {
    require_shape(diag[static_cast<std::size_t>(j)], n, "chain diagonal block");
    require_shape(hop[static_cast<std::size_t>(j)], n, "chain hopping block");
    b.block(j * n, j * n, n, n) = diag[static_cast<std::size_t>(j)];
    if (j + 1 < period) {
      b.block(j * n, (j + 1) * n, n, n) = hop[static_cast<std::size_t>(j)];
      b.block((j + 1) * n, j * n, n, n) = hop[static_cast<std::size_t>(j)].adjoint();
    }
  }
  // last site of cell J couples to the first site of cell J+1
  a.block((period - 1) * n, 0, n, n) = hop.back();
  return PeriodicJacobi(std::move(b), std::move(a));
}

TruncatedKernel truncate_kernel(const ConvolutionKernel& kernel, int ell) {
  if (ell < 0) throw Error(ErrorCode::RangeExceeded, "truncation radius must be >= 0");
  std::map<int, CMatrix> kept;
  double discarded = 0.0;
  for (const auto& [n, h] : kernel.blocks()) {
    if (std::abs(n) <= ell) {
      kept.emplace(n, h);
    } else {
      discarded += op_norm(h);
    }
  }
  return TruncatedKernel{ConvolutionKernel(kernel.block_dim(), std::move(kept)), discarded};
}

namespace presets {

PeriodicJacobi ssh(cplx j1, cplx j2) {
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 1) = j1;
  b(1, 0) = std::conj(j1);
  CMatrix a = CMatrix::Zero(2, 2);
  a(1, 0) = j2;
  return PeriodicJacobi(std::move(b), std::move(a));
}

ConvolutionKernel onsite(const CMatrix& c) {
  return ConvolutionKernel(static_cast<int>(c.rows()), {{0, c}});
}

}  // namespace presets

}  // namespace softwall
