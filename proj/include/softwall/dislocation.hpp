#pragma once

// Dislocated Jacobi operators: the cut stencil K(t), the left block of H^Sigma(t) - K(t),
// and finite rings on Omega_l that interpolate between H_l and Sigma (+) H_{l-1}.

#include <iosfwd>
#include <optional>
#include <vector>

#include "softwall/linalg.hpp"
#include "softwall/tb_core.hpp"
#include "softwall/walls.hpp"

namespace softwall {

/// Omega_l = {-floor((l-1)/2), ..., floor(l/2)}
struct RingSites {
  int lo = 0;
  int hi = 0;
  explicit RingSites(int ell) : lo(-((ell - 1) / 2)), hi(ell / 2) {}
  int index(int n) const { return n - lo; }
};

struct DislocatedRing {
  int ell = 0;
  double sigma = 0.0;
  double t = 0.0;
  CMatrix matrix;  // block (n, m) at rows (n - lo) N, n in Omega_l
};

/// Periodic ring with (n, n+1) = a, corners (lo, hi) = a^*, (hi, lo) = a, and the
/// interpolated pattern around site 0:
///   (-1, 0) = (1-t) a, (-1, 1) = t a, (0, 0) = (1-t) b + t Sigma, (0, 1) = (1-t) a.
/// Throws TooFewCells if ell < 5.
DislocatedRing assemble_ring(const PeriodicJacobi& jacobi, double sigma, double t, int ell);

/// Same pattern on the open chain [-R, R] (no ring closure).
CMatrix assemble_dislocated_chain(const PeriodicJacobi& jacobi, double sigma, double t, int half_width);

struct RingFlowReport {
  int ell = 0;
  double E = 0.0;
  double sigma = 0.0;
  int n_of_e = 0;
  int count_t0 = 0;
  int count_t1 = 0;
  int implied_flow = 0;  // count_t1 - count_t0
  bool pass = false;
};

/// Sigma defaults to E + 4 C_ab + 1. Throws EInBand.
RingFlowReport ring_flow_check(const PeriodicJacobi& jacobi, double E, int ell,
                               std::optional<double> sigma = std::nullopt, int k_count = kDefaultKCount);

/// K(t) on sites [first, last] (which must contain -2..1):
///   (-2, -1) = (1-t) a, (-1, 0) = a, (0, 1) = t a, plus adjoints.
CMatrix cut_operator(const PeriodicJacobi& jacobi, double t, int first, int last);

struct LeftBlockReport {
  double E = 0.0;
  double sigma = 0.0;
  double min_eigenvalue = 0.0;  // over the t grid
  double worst_t = 0.0;
  double max_coupling = 0.0;    // largest entry of H - K across the cut
  bool pass = false;
};

/// Eigensolves the sites [-L, -1] block of H^Sigma(t) - K(t) on the box [-L, L].
LeftBlockReport left_block_gap_check(const PeriodicJacobi& jacobi, const SteepWall& steep,
                                     const std::vector<double>& t_grid, int L);

struct RankRow {
  int ell = 0;  // 0 marks the open-chain reference
  double t = 0.0;
  int count_below_E = 0;
  int count_in_window = 0;
};

struct RankConvergence {
  std::vector<RankRow> rows;  // one per ell, then the reference
  RankRow reference;
  std::optional<int> ell_star;  // smallest ell from which every later count equals the reference
};

RankConvergence projector_rank_convergence(const PeriodicJacobi& jacobi, double sigma, double E,
                                           Interval window, double t, const std::vector<int>& ells);

/// Header ell,t,count_below_E,count_in_window.
void write_rank_csv(std::ostream& os, const RankConvergence& table);

}  // namespace softwall
