#pragma once

// Finite truncations of the edge operator H#(t) = H + W(t) on the box [-L, L],
// edge-mode classification by interior mass, and sweeps over t.

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "softwall/linalg.hpp"
#include "softwall/tb_core.hpp"
#include "softwall/walls.hpp"

namespace softwall {

struct EdgeTruncation {
  int L = 0;
  int block_dim = 0;
  double t = 0.0;
  CMatrix matrix;  // block (n, m), n, m in [-L, L], sits at rows (n + L) N

  int sites() const { return 2 * L + 1; }
};

/// Block (n, m) = h(n - m) + delta_nm w(n - t). Throws BoxTooSmall if L < range + 2.
EdgeTruncation assemble_edge(const ConvolutionKernel& kernel, const SoftWallProfile& wall, double t, int L);

struct EdgeMode {
  double eigenvalue = 0.0;
  CVector vector;
  double interior_mass = 0.0;  // || u 1(n in window) ||
  bool is_edge = false;
  bool marginal = false;       // interior_mass in [0.6, threshold)
};

inline constexpr double kEdgeThreshold = 0.75;
inline constexpr double kMarginalMass = 0.6;

struct ClassifyOptions {
  double threshold = kEdgeThreshold;
  /// Inclusive cell window; defaults to [-L/2, L/2].
  std::optional<std::pair<int, int>> window;
  bool keep_vectors = true;
};

std::vector<EdgeMode> eigensolve_classify(const EdgeTruncation& tr, const ClassifyOptions& opts = {});

/// Norm of the part of u supported on cells [lo, hi] of a box of half-width L.
double interior_mass(const CVector& u, int L, int block_dim, int lo, int hi);

struct EdgeSweepPoint {
  double t = 0.0;
  std::vector<double> eigenvalues;     // ascending
  std::vector<double> interior_mass;   // empty when the sweep skips classification
  std::vector<char> is_edge;
  std::vector<char> marginal;
};

struct EdgeSweep {
  int L = 0;
  int block_dim = 0;
  std::vector<EdgeSweepPoint> points;  // in t_grid order
};

struct SweepOptions {
  ClassifyOptions classify{kEdgeThreshold, std::nullopt, false};
  bool with_modes = true;  // false: eigenvalues only (banded solver)
};

EdgeSweep edge_sweep_t(const ConvolutionKernel& kernel, const SoftWallProfile& wall, int L,
                       const std::vector<double>& t_grid, const SweepOptions& opts = {});

/// t_count points spanning [lo, hi] inclusive.
std::vector<double> uniform_grid(double lo, double hi, int count);

/// Header t,index,eigenvalue,interior_mass,is_edge; numbers with 17 significant digits.
void write_edge_csv(std::ostream& os, const EdgeSweep& sweep);

}  // namespace softwall
