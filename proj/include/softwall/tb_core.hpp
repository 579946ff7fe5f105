#pragma once

// One-dimensional periodic tight-binding operators
//
//   (H psi)_n = sum_m h(m) psi_{n-m},   h(-m) = h(m)^*,
//
// their Bloch fibers H_k = sum_m h(m) e^{-ikm}, band structures on the
// Brillouin zone (-pi, pi], gap catalogs, and the supercell / truncation
// transforms that reduce finite-range kernels to block Jacobi form.
//
// Lattice constant is fixed to 1; callers restore units.

#include <map>
#include <optional>
#include <vector>

#include "softwall/linalg.hpp"

namespace softwall {

inline constexpr double kHermitianTol = 1e-12;

class ConvolutionKernel {
 public:
  /// Validates block shapes and h(-n) == h(n)^* (max entry deviation < 1e-12).
  /// A block whose partner is missing is rejected; see hermitian_completion.
  ConvolutionKernel(int block_dim, std::map<int, CMatrix> blocks);

  /// Fills in h(-n) := h(n)^* for every n whose partner is absent.
  static ConvolutionKernel hermitian_completion(int block_dim, std::map<int, CMatrix> blocks);
  static ConvolutionKernel zero(int block_dim);

  int block_dim() const { return block_dim_; }
  /// max |n| over stored blocks (0 for an empty kernel)
  int range() const;
  std::vector<int> support() const;
  /// h(n), or the zero block if n is not stored.
  CMatrix block(int n) const;
  const std::map<int, CMatrix>& blocks() const { return blocks_; }

  /// sum_n ||h(n)||  (operator norms)
  double l1_norm() const;
  /// sum_n |n| ||h(n)||: Lipschitz constant of k -> H_k
  double k_lipschitz() const;

 private:
  int block_dim_;
  std::map<int, CMatrix> blocks_;
};

/// (H psi)_n = a^* psi_{n-1} + b psi_n + a psi_{n+1}
class PeriodicJacobi {
 public:
  PeriodicJacobi(CMatrix diag, CMatrix offdiag);

  /// Requires kernel support within [-1, 1].
  static PeriodicJacobi from_kernel(const ConvolutionKernel& kernel);

  int block_dim() const { return static_cast<int>(b_.rows()); }
  const CMatrix& diag() const { return b_; }
  const CMatrix& offdiag() const { return a_; }
  /// h(-1) = a, h(0) = b, h(1) = a^*
  ConvolutionKernel to_kernel() const;
  /// max(||a||, ||b||)
  double c_ab() const;

 private:
  CMatrix b_;
  CMatrix a_;
};

CMatrix bloch_fiber(const ConvolutionKernel& kernel, double k);
CMatrix bloch_fiber(const PeriodicJacobi& jacobi, double k);

struct BandStructure {
  int block_dim = 0;
  std::vector<double> k_grid;                // ascending, in (-pi, pi]
  std::vector<std::vector<double>> curves;   // curves[i]: ascending eigenvalues at k_grid[i]
  /// Upper bound on how far a band edge can lie outside the sampled hull:
  /// k_lipschitz * (half grid spacing).
  double grid_error = 0.0;
};

inline constexpr int kDefaultKCount = 1024;

/// Samples k_j = -pi + 2 pi (j + 1) / k_count, j = 0..k_count-1.
BandStructure band_structure(const ConvolutionKernel& kernel, int k_count = kDefaultKCount);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Gap {
  double lo = 0.0;   // -inf for the gap below all bands
  double hi = 0.0;   // +inf for the gap above all bands
  int bands_below = 0;
};

struct GapCatalog {
  std::vector<Interval> bands;  // hull of band j, j = 0..N-1
  std::vector<Gap> gaps;        // ascending, including the two unbounded ones
  double grid_error = 0.0;
};

/// A finite gap is declared only when the spacing between neighbouring band
/// clusters exceeds 10x the grid error; narrower spacings are treated as closed.
GapCatalog gap_catalog(const BandStructure& bands);

/// The gap containing E, or nullopt if E is within `margin` of a band hull or
/// falls in a spacing too narrow to be certified as a gap.
std::optional<Gap> find_gap(const GapCatalog& catalog, double E, double margin = 0.0);

/// Number of Bloch bands below E. Throws Error(EInBand) when E is not in a gap.
int count_bands_below(const GapCatalog& catalog, double E, double margin = 0.0);
int count_bands_below(const BandStructure& bands, double E, double margin = 0.0);

/// Folds a kernel of range <= ell into a Jacobi operator with ell*N blocks:
///   b~(i, j) = h(i - j),                i, j = 0..ell-1
///   a~(i, j) = h(i - j - ell) if i >= j, else 0
/// Throws Error(RangeExceeded) if the support leaves [-ell, ell].
PeriodicJacobi supercell_jacobi(const ConvolutionKernel& kernel, int ell);

/// A K-periodic block Jacobi chain (b_n, a_n) regrouped into K-site cells.
/// diag[j] = b_j (Hermitian), hop[j] = a_j couples site j to site j+1.
PeriodicJacobi fold_periodic_chain(const std::vector<CMatrix>& diag, const std::vector<CMatrix>& hop);

struct TruncatedKernel {
  ConvolutionKernel kernel;
  double discarded_mass = 0.0;  // sum_{|n| > ell} ||h(n)||
};

/// h_ell(n) = h(n) 1(|n| <= ell)
TruncatedKernel truncate_kernel(const ConvolutionKernel& kernel, int ell);

namespace presets {

/// b = [[0, J1], [J1^*, 0]], a = [[0, 0], [J2, 0]]
PeriodicJacobi ssh(cplx j1, cplx j2);

/// Constant N x N on-site block, no hopping.
ConvolutionKernel onsite(const CMatrix& c);

}  // namespace presets

}  // namespace softwall
