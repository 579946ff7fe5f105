#pragma once

// Two-dimensional Bravais-lattice tight-binding models, partial Fourier reduction
// along a2, commensurate supercell cuts (n, m), walls constant along the cut
// direction, and the Wallace (nearest-neighbour graphene) presets.

#include <compare>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "softwall/linalg.hpp"
#include "softwall/tb_core.hpp"
#include "softwall/walls.hpp"

namespace softwall {

using Vec2 = Eigen::Vector2d;

/// R = i a1 + j a2
struct LatticeVector {
  int i = 0;
  int j = 0;
  auto operator<=>(const LatticeVector&) const = default;
  LatticeVector operator-() const { return {-i, -j}; }
  LatticeVector operator+(const LatticeVector& o) const { return {i + o.i, j + o.j}; }
  LatticeVector operator-(const LatticeVector& o) const { return {i - o.i, j - o.j}; }
};

class BravaisLattice2D {
 public:
  BravaisLattice2D(Vec2 a1, Vec2 a2, std::vector<Vec2> atoms);

  const Vec2& a1() const { return a1_; }
  const Vec2& a2() const { return a2_; }
  /// <a_i*, a_j> = 2 pi delta_ij
  const Vec2& a1_star() const { return b1_; }
  const Vec2& a2_star() const { return b2_; }
  const std::vector<Vec2>& atoms() const { return atoms_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  double cell_area() const;
  Vec2 point(LatticeVector r) const { return r.i * a1_ + r.j * a2_; }
  /// a1* / |a1*|: unit normal to a2, the direction a wall along a2 advances in.
  Vec2 a2_perp() const { return b1_.normalized(); }

 private:
  Vec2 a1_, a2_, b1_, b2_;
  std::vector<Vec2> atoms_;
};

class TightBinding2D {
 public:
  /// Validates M x M blocks and h(-R) == h(R)^*.
  TightBinding2D(BravaisLattice2D lattice, std::map<LatticeVector, CMatrix> blocks);

  const BravaisLattice2D& lattice() const { return lattice_; }
  int orbitals() const { return lattice_.atom_count(); }
  const std::map<LatticeVector, CMatrix>& blocks() const { return blocks_; }
  CMatrix block(LatticeVector r) const;

 private:
  BravaisLattice2D lattice_;
  std::map<LatticeVector, CMatrix> blocks_;
};

/// H_k = sum_R h(R) e^{-i k.R}
CMatrix bloch2d(const TightBinding2D& tb, const Vec2& k);

/// k2 = f a2*, stored as the fraction f. Returns h_{k2}(c1) = sum_{c2} h(c1, c2) e^{-2 pi i f c2},
/// whose fiber at k1 equals bloch2d at k = (k1 / 2 pi) a1* + f a2*.
ConvolutionKernel reduce_to_1d(const TightBinding2D& tb, double k2_fraction);

/// Point of reciprocal space with coordinates (k1 / 2 pi, f) in the (a1*, a2*) basis.
Vec2 momentum(const BravaisLattice2D& lat, double k1, double k2_fraction);

struct CommensurateCut {
  int n = 0;
  int m = 0;
  std::vector<LatticeVector> sites;  // y_1 .. y_L, L = |n m|, integer coordinates in (a1, a2)
  TightBinding2D model;              // on the lattice (n a1, n a1 + m a2)
};

/// Supercell with a~1 = n a1, a~2 = n a1 + m a2. Orbital (atom, p) sits at index atom * L + p
/// (sublattice first), and h~(R')_{ij} = h(R' - y_i + y_j).
/// Throws ZeroIndex if n or m is 0 and NotCoprime if gcd(|n|, |m|) > 1.
CommensurateCut supercell_cut(const TightBinding2D& tb, int n, int m);

/// Supercell block index (p, q) for R' = p a~1 + q a~2 given integer (a1, a2) coordinates.
LatticeVector to_cut_coordinates(int n, int m, LatticeVector r);

struct FoldCheck {
  std::vector<double> supercell;  // sorted
  std::vector<double> folded;     // sorted union over the |nm| folded momenta
  double max_deviation = 0.0;
  bool pass = false;
};

inline constexpr double kFoldTol = 1e-9;

/// sigma(H~(k)) against the union of sigma(H(k + K)) over K = alpha a1*/n + beta a2*/m.
FoldCheck folded_fiber_check(const TightBinding2D& tb, const CommensurateCut& cut, const Vec2& k);

/// Per-atom diagonal block diag(v(a2perp . (R - t a1 + x_m))) of a wall constant along a2.
CMatrix wall2d_block(const SoftWallProfile& v, const BravaisLattice2D& lat, LatticeVector r, double t);

/// The same wall seen by the reduced chain: block at cell c1 and time t is
/// w(c1 - t) with w(x) = diag(v(s x + a2perp . x_m)), s = a2perp . a1 = |Gamma| / ||a2||.
/// Its Lipschitz constant is nu |Gamma| / ||a2||.
SoftWallProfile wall2d_profile(const SoftWallProfile& v, const BravaisLattice2D& lat);

/// K-periodic scalar chain: site j has on-site energy onsite[j % K] and couples to
/// site j + 1 with hopping hops[j % K].
struct HoppingChain {
  std::vector<double> onsite;
  std::vector<cplx> hops;
};

/// Open truncation on `sites` sites, entry (j, j+1) = hops[j % K].
CMatrix chain_truncation(const HoppingChain& chain, int sites);

struct GaugeTransform {
  HoppingChain stripped;       // hops replaced by their moduli
  std::vector<double> phases;  // A_j on the truncation; A_{j+1} - A_j = arg H_{j, j+1}
};

/// U = diag(e^{i A_j}) with U H U^* = stripped truncation.
GaugeTransform gauge_transform(const HoppingChain& chain, int sites);

namespace presets {

/// Honeycomb, t0 = 1, a0 = 1, atoms x1 = (a1 + 2 a2)/3, x2 = (2 a1 + a2)/3.
TightBinding2D wallace();
/// (n, m) = (-1, 1)
CommensurateCut wallace_armchair();
CommensurateCut wallace_cut(int n, int m);

}  // namespace presets

struct FiberGapPoint {
  double k2_fraction = 0.0;
  double gap = 0.0;  // min over k1 of band (j+1) minus max over k1 of band j
};

struct FiberGapScan {
  std::vector<FiberGapPoint> points;
  double min_gap = 0.0;
  double argmin = 0.0;
};

/// Indirect gap between bands `lower_band` and lower_band + 1 (0-based) of the reduced
/// chain, for each k2 fraction. Extremes over k1 are refined by golden-section search
/// around the best of `k1_count` samples.
FiberGapScan scan_fiber_gap(const TightBinding2D& tb, const std::vector<double>& k2_fractions,
                            int lower_band, int k1_count = 256);

double fiber_gap(const TightBinding2D& tb, double k2_fraction, int lower_band, int k1_count = 256);

}  // namespace softwall
