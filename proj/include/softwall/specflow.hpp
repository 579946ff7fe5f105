#pragma once

// Spectral flow of finite Hermitian families t -> A_t, t in [0, 1], at an energy E.
// Downward crossings count +1, so a wall pushing N(E) branches up gives -N(E).

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "softwall/edge.hpp"
#include "softwall/tb_core.hpp"
#include "softwall/walls.hpp"

namespace softwall {

struct SweepTable {
  std::vector<double> t;                         // ascending
  std::vector<std::vector<double>> eigenvalues;  // ascending per row
};

SweepTable sweep_table(const EdgeSweep& sweep);

enum class FlowMethod { counting, partition };
std::string_view to_string(FlowMethod m);

struct Crossing {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int signed_count = 0;
};

struct PartitionPlan {
  std::vector<double> knots;   // 0 = t_0 < ... < t_M = 1
  std::vector<double> widths;  // a_1 .. a_M
};

struct SpectralFlowResult {
  int flow = 0;
  FlowMethod method = FlowMethod::counting;
  std::vector<Crossing> crossings;
  double E = 0.0;       // requested energy
  double E_used = 0.0;  // after a possible nudge
  int count_start = 0;  // eigenvalues < E_used at the first sample
  int count_end = 0;    // eigenvalues < E_used at the last sample
  bool nudged = false;
  std::optional<PartitionPlan> plan;
};

inline constexpr double kFlowTol = 1e-8;
inline constexpr double kNudge = 1e-7;

struct FlowOptions {
  double tol = kFlowTol;
  /// Gap containing E. Enables the nudge toward its centre when E sits on an
  /// endpoint eigenvalue, and bounds the partition widths.
  std::optional<Gap> gap;
};

/// flow = #{lambda < E at t = 1} - #{lambda < E at t = 0}, with per-interval differences
/// as diagnostics. Throws EOnEigenvalue if E touches an endpoint eigenvalue and no gap
/// is supplied for nudging.
SpectralFlowResult flow_counting(const SweepTable& table, double E, const FlowOptions& opts = {});

using EigenvalueFamily = std::function<std::vector<double>(double)>;

struct PartitionOptions {
  FlowOptions flow;
  /// Initial samples; when empty, `samples` uniform points on [0, 1] are evaluated.
  std::optional<SweepTable> table;
  int samples = 201;
  double min_clearance = 1e-6;
  int max_refinements = 40;  // bisection depth for a single infeasible step
};

/// Builds a plan whose levels E +- a_i avoid every sampled eigenvalue by at least the
/// clearance max(min_clearance, largest eigenvalue step between neighbouring samples).
/// Widths are capped at the distance from E to the gap edges when a gap is given.
/// Throws PlanInfeasible if a single step cannot be cleared even after bisection.
PartitionPlan plan_partition(const EigenvalueFamily& family, SweepTable& table, double E,
                             const PartitionOptions& opts);

/// Relabelled partition sum
///   rank P_[E, E+a_1)(A_0) - rank P_[E, E+a_M)(A_1) + sum_{i<M} rank P_(E+a_i, E+a_{i+1})(A_{t_i}),
/// with rank P_(x, y) = -rank P_(y, x) for y < x. With a_1 = a_M = 0 the two boundary
/// terms reduce to dim Ker(A_0 - E) - dim Ker(A_1 - E).
int partition_sum(const PartitionPlan& plan, const SweepTable& table, double E, double tol,
                  std::vector<Crossing>* terms = nullptr);

SpectralFlowResult flow_partition(const EigenvalueFamily& family, double E, const PartitionOptions& opts = {});

struct TheoremFlowReport {
  double E = 0.0;
  int n_of_e = 0;
  SpectralFlowResult counting;
  SpectralFlowResult partition;
  bool pass = false;
};

struct TheoremFlowOptions {
  int t_points = 200;
  int k_count = kDefaultKCount;
  double gap_margin = 1e-6;
};

/// Sweeps H#(t) on [-L, L] and compares both flows with -N(E). Throws EInBand.
TheoremFlowReport verify_theorem_flow(const ConvolutionKernel& kernel, const SoftWallProfile& wall,
                                      double E, int L, const TheoremFlowOptions& opts = {});

/// Same check over an already computed sweep.
TheoremFlowReport verify_theorem_flow(const ConvolutionKernel& kernel, const SoftWallProfile& wall,
                                      double E, int L, const SweepTable& table,
                                      const TheoremFlowOptions& opts = {});

struct DensityInterval {
  double lo = 0.0;  // interval is (lo, lo + length]
  int count = 0;
};

struct DensityReport {
  double E = 0.0;
  double t0 = 0.0;
  Gap gap;
  double length = 0.0;
  int required = 0;
  bool vacuous = false;
  int min_count = 0;
  double worst_lo = 0.0;
  std::vector<DensityInterval> intervals;
  bool pass = false;
};

struct DensityOptions {
  std::optional<double> length;    // defaults to the wall's Lipschitz constant
  std::optional<int> required;     // defaults to N(E)
  int k_count = kDefaultKCount;
};

/// Checks that every (lambda, lambda + length] inside the gap holds >= required truncation
/// eigenvalues. The count is minimised over lambda = gap.lo and lambda = each gap eigenvalue,
/// which is exact for the piecewise-constant count. Vacuous when length >= gap width.
DensityReport verify_density(const ConvolutionKernel& kernel, const SoftWallProfile& wall, double E,
                             double t0, int L, const DensityOptions& opts = {});

}  // namespace softwall
