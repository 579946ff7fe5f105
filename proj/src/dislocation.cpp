#include "softwall/dislocation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "softwall/edge.hpp"
#include "softwall/errors.hpp"
#include "softwall/simd/kernels.hpp"

namespace softwall {

namespace {

void put(CMatrix& m, int n, int i, int j, const CMatrix& blk) { m.block(i * n, j * n, n, n) = blk; }

void put_bond(CMatrix& m, int n, int i, int j, const CMatrix& a) {
  put(m, n, i, j, a);
  put(m, n, j, i, a.adjoint());
}

/// Writes the interpolated pattern around site 0; idx maps a site label to its row index.
template <class Index>
void dislocate(CMatrix& m, const PeriodicJacobi& jac, double sigma, double t, Index idx) {
  const int n = jac.block_dim();
  const CMatrix& a = jac.offdiag();
  const CMatrix& b = jac.diag();
  put_bond(m, n, idx(-1), idx(0), (1.0 - t) * a);
  put_bond(m, n, idx(-1), idx(1), t * a);
  put_bond(m, n, idx(0), idx(1), (1.0 - t) * a);
  put(m, n, idx(0), idx(0), (1.0 - t) * b + t * sigma * CMatrix::Identity(n, n));
}

int count_below(const std::vector<double>& v, double E) {
  return static_cast<int>(simd::count_below(std::span<const double>(v.data(), v.size()), E));
}

int count_in(const std::vector<double>& v, Interval w) {
  return static_cast<int>(simd::count_in_open(std::span<const double>(v.data(), v.size()), w.lo, w.hi));
}

}  // namespace

DislocatedRing assemble_ring(const PeriodicJacobi& jacobi, double sigma, double t, int ell) {
  if (ell < 5) throw Error(ErrorCode::TooFewCells, "ring needs ell >= 5, got " + std::to_string(ell));
  const int n = jacobi.block_dim();
  const RingSites sites(ell);
  DislocatedRing ring{ell, sigma, t, CMatrix::Zero(ell * n, ell * n)};
  auto idx = [&](int s) { return sites.index(s); };
  for (int s = sites.lo; s <= sites.hi; ++s) {
    put(ring.matrix, n, idx(s), idx(s), jacobi.diag());
    if (s < sites.hi) put_bond(ring.matrix, n, idx(s), idx(s + 1), jacobi.offdiag());
  }
  put_bond(ring.matrix, n, idx(sites.hi), idx(sites.lo), jacobi.offdiag());
  dislocate(ring.matrix, jacobi, sigma, t, idx);
  return ring;
}

CMatrix assemble_dislocated_chain(const PeriodicJacobi& jacobi, double sigma, double t, int half_width) {
  if (half_width < 2) throw Error(ErrorCode::TooFewCells, "open chain needs half-width >= 2");
  const int n = jacobi.block_dim();
  const int sites = 2 * half_width + 1;
  CMatrix m = CMatrix::Zero(sites * n, sites * n);
  auto idx = [&](int s) { return s + half_width; };
  for (int s = -half_width; s <= half_width; ++s) {
    put(m, n, idx(s), idx(s), jacobi.diag());
    if (s < half_width) put_bond(m, n, idx(s), idx(s + 1), jacobi.offdiag());
  }
  dislocate(m, jacobi, sigma, t, idx);
  return m;
}

RingFlowReport ring_flow_check(const PeriodicJacobi& jacobi, double E, int ell, std::optional<double> sigma,
                               int k_count) {
  RingFlowReport r;
  r.ell = ell;
  r.E = E;
  r.sigma = sigma.value_or(E + 4.0 * jacobi.c_ab() + 1.0);
  r.n_of_e = count_bands_below(band_structure(jacobi.to_kernel(), k_count), E);
  if (!(r.sigma > E)) throw Error(ErrorCode::Config, "ring check needs Sigma > E");
  r.count_t0 = count_below(eigvalsh(assemble_ring(jacobi, r.sigma, 0.0, ell).matrix), E);
  r.count_t1 = count_below(eigvalsh(assemble_ring(jacobi, r.sigma, 1.0, ell).matrix), E);
  r.implied_flow = r.count_t1 - r.count_t0;
  r.pass = r.count_t0 == ell * r.n_of_e && r.count_t1 == (ell - 1) * r.n_of_e;
  return r;
}

CMatrix cut_operator(const PeriodicJacobi& jacobi, double t, int first, int last) {
  if (first > -2 || last < 1) throw Error(ErrorCode::BoxTooSmall, "cut stencil needs sites -2..1");
  const int n = jacobi.block_dim();
  const int sites = last - first + 1;
  CMatrix k = CMatrix::Zero(sites * n, sites * n);
  auto idx = [&](int s) { return s - first; };
  const CMatrix& a = jacobi.offdiag();
  put_bond(k, n, idx(-2), idx(-1), (1.0 - t) * a);
  put_bond(k, n, idx(-1), idx(0), a);
  put_bond(k, n, idx(0), idx(1), t * a);
  return k;
}

LeftBlockReport left_block_gap_check(const PeriodicJacobi& jacobi, const SteepWall& steep,
                                     const std::vector<double>& t_grid, int L) {
  LeftBlockReport r;
  r.E = steep.E;
  r.sigma = steep.sigma;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  const int n = jacobi.block_dim();
  const auto kernel = jacobi.to_kernel();
  for (double t : t_grid) {
    const CMatrix cut = assemble_edge(kernel, steep.profile, t, L).matrix - cut_operator(jacobi, t, -L, L);
    r.max_coupling = std::max(r.max_coupling, max_abs(cut.block(0, L * n, L * n, (L + 1) * n)));
    const auto ev = eigvalsh(cut.topLeftCorner(L * n, L * n));
    if (ev.front() < r.min_eigenvalue) {
      r.min_eigenvalue = ev.front();
      r.worst_t = t;
    }
  }
  r.pass = !t_grid.empty() && r.min_eigenvalue >= r.E + 1.0 - 1e-6 && r.max_coupling < 1e-12;
  return r;
}

RankConvergence projector_rank_convergence(const PeriodicJacobi& jacobi, double sigma, double E,
                                           Interval window, double t, const std::vector<int>& ells) {
  RankConvergence out;
  int ell_max = 5;
  for (int ell : ells) {
    const auto ev = eigvalsh(assemble_ring(jacobi, sigma, t, ell).matrix);
    out.rows.push_back(RankRow{ell, t, count_below(ev, E), count_in(ev, window)});
    ell_max = std::max(ell_max, ell);
  }
  const auto ref = eigvalsh(assemble_dislocated_chain(jacobi, sigma, t, 4 * ell_max));
  out.reference = RankRow{0, t, count_below(ref, E), count_in(ref, window)};
  for (std::size_t i = out.rows.size(); i-- > 0;) {
    if (out.rows[i].count_in_window != out.reference.count_in_window) break;
    out.ell_star = out.rows[i].ell;
  }
  return out;
}

void write_rank_csv(std::ostream& os, const RankConvergence& table) {
  os << "ell,t,count_below_E,count_in_window\n";
  char buf[128];
  auto row = [&](const RankRow& r) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%d\n", r.ell, r.t, r.count_below_E, r.count_in_window);
    os << buf;
  };
  for (const auto& r : table.rows) row(r);
  row(table.reference);
}

}  // namespace softwall
