#include "softwall/specflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "softwall/errors.hpp"
#include "softwall/parallel.hpp"
#include "softwall/simd/kernels.hpp"

namespace softwall {

namespace {

std::span<const double> view(const std::vector<double>& v) { return {v.data(), v.size()}; }

int count_below(const std::vector<double>& v, double E) {
  return static_cast<int>(simd::count_below(view(v), E));
}

bool touches(const std::vector<double>& v, double E, double tol) {
  return simd::count_near(view(v), E, tol) > 0;
}

void require_table(const SweepTable& table) {
  if (table.t.size() < 2 || table.t.size() != table.eigenvalues.size()) {
    throw Error(ErrorCode::Config, "a flow needs at least two t samples");
  }
}

void require_in_gap(double E, const std::optional<Gap>& gap) {
  if (gap && !(E > gap->lo && E < gap->hi)) {
    throw Error(ErrorCode::EInBand, "E = " + std::to_string(E) + " lies outside the supplied gap");
  }
}

/// Moves E off endpoint eigenvalues toward the gap centre; returns the energy used.
double settle_energy(const SweepTable& table, double E, const FlowOptions& opts, bool& nudged) {
  nudged = false;
  const auto& first = table.eigenvalues.front();
  const auto& last = table.eigenvalues.back();
  if (!touches(first, E, opts.tol) && !touches(last, E, opts.tol)) return E;
  if (!opts.gap) {
    throw Error(ErrorCode::EOnEigenvalue,
                "E = " + std::to_string(E) + " is within tol of an endpoint eigenvalue; perturb E or refine");
  }
  const Gap& g = *opts.gap;
  double dir = 0.0;
  if (std::isfinite(g.lo) && std::isfinite(g.hi)) {
    dir = (0.5 * (g.lo + g.hi) >= E) ? 1.0 : -1.0;
  } else {
    dir = std::isfinite(g.lo) ? 1.0 : -1.0;
  }
  const double moved = E + dir * kNudge;
  if (touches(first, moved, opts.tol) || touches(last, moved, opts.tol)) {
    throw Error(ErrorCode::EOnEigenvalue, "nudged energy still touches an endpoint eigenvalue");
  }
  nudged = true;
  return moved;
}

double width_cap(double E, const std::optional<Gap>& gap) {
  if (!gap) return std::numeric_limits<double>::infinity();
  return std::min(E - gap->lo, gap->hi - E);
}

double step_between(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return simd::max_abs_diff(view(a), view(b));
}

/// Width clearing every sampled eigenvalue in rows [s, e] by the clearance, or nullopt.
std::optional<double> choose_width(const SweepTable& table, std::size_t s, std::size_t e, double E,
                                   double cap, double min_clear) {
  double clear = min_clear;
  for (std::size_t k = s; k < e; ++k) {
    clear = std::max(clear, step_between(table.eigenvalues[k], table.eigenvalues[k + 1]));
  }
  const double hi = std::isfinite(cap) ? cap - clear : std::numeric_limits<double>::infinity();
  if (hi < 0.0) return std::nullopt;

  std::vector<std::pair<double, double>> banned;
  for (std::size_t k = s; k <= e; ++k) {
    for (double lam : table.eigenvalues[k]) {
      const double d = std::abs(lam - E);
      if (d - clear > hi) continue;
      banned.emplace_back(d - clear, d + clear);
    }
  }
  std::sort(banned.begin(), banned.end());

  // Walk the complement of the banned union inside [0, hi].
  double best_len = -1.0;
  double best_mid = 0.0;
  double cursor = 0.0;
  bool zero_ok = true;
  for (const auto& [lo, up] : banned) {
    if (lo <= 0.0 && up >= 0.0) zero_ok = false;
    if (lo > cursor) {
      const double end = std::min(lo, hi);
      if (end > cursor && end - cursor > best_len) {
        best_len = end - cursor;
        best_mid = 0.5 * (cursor + end);
      }
    }
    cursor = std::max(cursor, up);
    if (cursor >= hi) break;
  }
  if (zero_ok) return 0.0;
  if (cursor < hi) {
    if (!std::isfinite(hi)) return best_len > 0.0 ? best_mid : cursor + clear;
    if (hi - cursor > best_len) {
      best_len = hi - cursor;
      best_mid = 0.5 * (cursor + hi);
    }
  }
  if (best_len <= 0.0) return std::nullopt;
  return best_mid;
}

std::size_t knot_index(const SweepTable& table, double t) {
  const auto it = std::lower_bound(table.t.begin(), table.t.end(), t);
  if (it == table.t.end() || *it != t) {
    throw Error(ErrorCode::PlanInfeasible, "plan knot " + std::to_string(t) + " is not a sampled point");
  }
  return static_cast<std::size_t>(it - table.t.begin());
}

int count_half_open(const std::vector<double>& v, double lo, double hi) {
  return static_cast<int>(simd::count_below(view(v), hi) - simd::count_below(view(v), lo));
}

SweepTable evaluate_family(const EigenvalueFamily& family, int samples) {
  SweepTable table;
  table.t = uniform_grid(0.0, 1.0, samples);
  table.eigenvalues.resize(table.t.size());
  parallel_for(table.t.size(), [&](std::size_t i) {
    auto ev = family(table.t[i]);
    std::sort(ev.begin(), ev.end());
    table.eigenvalues[i] = std::move(ev);
  });
  return table;
}

}  // namespace

std::string_view to_string(FlowMethod m) { return m == FlowMethod::counting ? "counting" : "partition"; }

SweepTable sweep_table(const EdgeSweep& sweep) {
  SweepTable table;
  for (const auto& pt : sweep.points) {
    table.t.push_back(pt.t);
    table.eigenvalues.push_back(pt.eigenvalues);
  }
  return table;
}

SpectralFlowResult flow_counting(const SweepTable& table, double E, const FlowOptions& opts) {
  require_table(table);
  require_in_gap(E, opts.gap);
  SpectralFlowResult r;
  r.method = FlowMethod::counting;
  r.E = E;
  r.E_used = settle_energy(table, E, opts, r.nudged);
  std::vector<int> counts(table.t.size());
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = count_below(table.eigenvalues[i], r.E_used);
  for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
    if (counts[i + 1] != counts[i]) {
      r.crossings.push_back(Crossing{table.t[i], table.t[i + 1], counts[i + 1] - counts[i]});
    }
  }
  r.count_start = counts.front();
  r.count_end = counts.back();
  r.flow = r.count_end - r.count_start;
  return r;
}

PartitionPlan plan_partition(const EigenvalueFamily& family, SweepTable& table, double E,
                             const PartitionOptions& opts) {
  require_table(table);
  const double cap = width_cap(E, opts.flow.gap);
  PartitionPlan plan;
  plan.knots.push_back(table.t.front());
  std::size_t s = 0;
  int refinements = 0;
  while (s + 1 < table.t.size()) {
    auto width = choose_width(table, s, s + 1, E, cap, opts.min_clearance);
    if (!width) {
      if (!family || refinements >= opts.max_refinements) {
        throw Error(ErrorCode::PlanInfeasible,
                    "no width clears the spectrum on [" + std::to_string(table.t[s]) + ", " +
                        std::to_string(table.t[s + 1]) + "]");
      }
      const double mid = 0.5 * (table.t[s] + table.t[s + 1]);
      auto ev = family(mid);
      std::sort(ev.begin(), ev.end());
      table.t.insert(table.t.begin() + static_cast<std::ptrdiff_t>(s + 1), mid);
      table.eigenvalues.insert(table.eigenvalues.begin() + static_cast<std::ptrdiff_t>(s + 1), std::move(ev));
      ++refinements;
      continue;
    }
    refinements = 0;
    std::size_t e = s + 1;
    while (e + 1 < table.t.size()) {
      auto wider = choose_width(table, s, e + 1, E, cap, opts.min_clearance);
      if (!wider) break;
      width = wider;
      ++e;
    }
    plan.knots.push_back(table.t[e]);
    plan.widths.push_back(*width);
    s = e;
  }
  return plan;
}

int partition_sum(const PartitionPlan& plan, const SweepTable& table, double E, double tol,
                  std::vector<Crossing>* terms) {
  const std::size_t m = plan.widths.size();
  if (m == 0 || plan.knots.size() != m + 1) {
    throw Error(ErrorCode::PlanInfeasible, "partition plan needs M widths and M + 1 knots");
  }
  auto boundary = [&](const std::vector<double>& ev, double a) {
    if (a == 0.0) return static_cast<int>(simd::count_near(view(ev), E, tol));
    return count_half_open(ev, E, E + a);
  };
  const auto& first = table.eigenvalues[knot_index(table, plan.knots.front())];
  const auto& last = table.eigenvalues[knot_index(table, plan.knots.back())];
  int total = 0;
  const int head = boundary(first, plan.widths.front());
  const int tail = -boundary(last, plan.widths.back());
  total += head + tail;
  if (terms) terms->push_back(Crossing{plan.knots.front(), plan.knots.front(), head});
  for (std::size_t i = 1; i < m; ++i) {
    const auto& ev = table.eigenvalues[knot_index(table, plan.knots[i])];
    const double lo = E + plan.widths[i - 1];
    const double hi = E + plan.widths[i];
    int term = 0;
    if (hi > lo) {
      term = static_cast<int>(simd::count_in_open(view(ev), lo, hi));
    } else if (lo > hi) {
      term = -static_cast<int>(simd::count_in_open(view(ev), hi, lo));
    }
    total += term;
    if (terms && term != 0) terms->push_back(Crossing{plan.knots[i], plan.knots[i], term});
  }
  if (terms) terms->push_back(Crossing{plan.knots.back(), plan.knots.back(), tail});
  return total;
}

SpectralFlowResult flow_partition(const EigenvalueFamily& family, double E, const PartitionOptions& opts) {
  require_in_gap(E, opts.flow.gap);
  SweepTable table = opts.table ? *opts.table : evaluate_family(family, opts.samples);
  require_table(table);
  SpectralFlowResult r;
  r.method = FlowMethod::partition;
  r.E = E;
  r.E_used = settle_energy(table, E, opts.flow, r.nudged);
  PartitionPlan plan = plan_partition(family, table, r.E_used, opts);
  std::vector<Crossing> terms;
  r.flow = partition_sum(plan, table, r.E_used, opts.flow.tol, &terms);
  r.crossings = std::move(terms);
  r.count_start = count_below(table.eigenvalues.front(), r.E_used);
  r.count_end = count_below(table.eigenvalues.back(), r.E_used);
  r.plan = std::move(plan);
  return r;
}

namespace {

Gap certified_gap(const ConvolutionKernel& kernel, double E, int k_count, double margin) {
  const auto catalog = gap_catalog(band_structure(kernel, k_count));
  const auto gap = find_gap(catalog, E, margin);
  if (!gap) {
    throw Error(ErrorCode::EInBand, "E = " + std::to_string(E) + " is not in a certified bulk gap");
  }
  return *gap;
}

}  // namespace

TheoremFlowReport verify_theorem_flow(const ConvolutionKernel& kernel, const SoftWallProfile& wall,
                                      double E, int L, const SweepTable& table,
                                      const TheoremFlowOptions& opts) {
  const Gap gap = certified_gap(kernel, E, opts.k_count, opts.gap_margin);
  TheoremFlowReport rep;
  rep.E = E;
  rep.n_of_e = gap.bands_below;
  FlowOptions fo;
  fo.gap = gap;
  rep.counting = flow_counting(table, E, fo);
  PartitionOptions po;
  po.flow = fo;
  po.table = table;
  auto family = [&](double t) { return eigvalsh(assemble_edge(kernel, wall, t, L).matrix); };
  rep.partition = flow_partition(family, E, po);
  rep.pass = rep.counting.flow == -rep.n_of_e && rep.partition.flow == -rep.n_of_e;
  return rep;
}

TheoremFlowReport verify_theorem_flow(const ConvolutionKernel& kernel, const SoftWallProfile& wall,
                                      double E, int L, const TheoremFlowOptions& opts) {
  // fail fast before the sweep
  certified_gap(kernel, E, opts.k_count, opts.gap_margin);
  SweepOptions so;
  so.with_modes = false;
  const auto sweep = edge_sweep_t(kernel, wall, L, uniform_grid(0.0, 1.0, opts.t_points), so);
  return verify_theorem_flow(kernel, wall, E, L, sweep_table(sweep), opts);
}

DensityReport verify_density(const ConvolutionKernel& kernel, const SoftWallProfile& wall, double E,
                             double t0, int L, const DensityOptions& opts) {
  const Gap gap = certified_gap(kernel, E, opts.k_count, 0.0);
  DensityReport rep;
  rep.E = E;
  rep.t0 = t0;
  rep.gap = gap;
  rep.length = opts.length.value_or(wall.lipschitz());
  rep.required = opts.required.value_or(gap.bands_below);
  if (!std::isfinite(gap.lo) || !std::isfinite(gap.hi) || rep.length >= gap.hi - gap.lo) {
    rep.vacuous = true;
    rep.pass = true;
    return rep;
  }
  auto ev = eigvalsh(assemble_edge(kernel, wall, t0, L).matrix);
  std::sort(ev.begin(), ev.end());
  auto count_in = [&](double lo) {
    const auto a = std::upper_bound(ev.begin(), ev.end(), lo);
    const auto b = std::upper_bound(ev.begin(), ev.end(), lo + rep.length);
    return static_cast<int>(b - a);
  };
  const double last_lo = gap.hi - rep.length;
  std::vector<double> starts{gap.lo};
  for (double lam : ev) {
    if (lam > gap.lo && lam <= last_lo) starts.push_back(lam);
  }
  rep.min_count = std::numeric_limits<int>::max();
  for (double lo : starts) {
    const int c = count_in(lo);
    rep.intervals.push_back(DensityInterval{lo, c});
    if (c < rep.min_count) {
      rep.min_count = c;
      rep.worst_lo = lo;
    }
  }
  rep.pass = rep.min_count >= rep.required;
  return rep;
}

}  // namespace softwall
