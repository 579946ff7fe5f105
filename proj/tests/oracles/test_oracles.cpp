// Independent constructions checked against the library: real-space rings and tori
// diagonalized with Eigen's own solver, direct Fourier sums, and hand-built truncations.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "softwall/dislocation.hpp"
#include "softwall/edge.hpp"
#include "softwall/lattice2d.hpp"
#include "softwall/specflow.hpp"

using namespace softwall;

namespace {

std::vector<double> eigen_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

CMatrix random_block(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

ConvolutionKernel random_kernel(std::mt19937_64& rng, int n, int range) {
  std::map<int, CMatrix> blocks;
  const CMatrix b = random_block(rng, n, 1.0);
  blocks[0] = (b + b.adjoint()) / 2.0;
  for (int r = 1; r <= range; ++r) {
    blocks[r] = random_block(rng, n, 1.0 / r);
    blocks[-r] = blocks[r].adjoint();
  }
  return ConvolutionKernel(n, blocks);
}

TightBinding2D random_model2d(std::mt19937_64& rng, int m) {
  const double s3 = std::sqrt(3.0);
  BravaisLattice2D lat(Vec2(0.5, -s3 / 2), Vec2(0.5, s3 / 2), std::vector<Vec2>(m, Vec2::Zero()));
  std::map<LatticeVector, CMatrix> blocks;
  const CMatrix b = random_block(rng, m, 1.0);
  blocks[{0, 0}] = (b + b.adjoint()) / 2.0;
  for (LatticeVector r : {LatticeVector{1, 0}, LatticeVector{0, 1}, LatticeVector{1, -1}, LatticeVector{2, 1}}) {
    blocks[r] = random_block(rng, m, 0.5);
    blocks[-r] = blocks[r].adjoint();
  }
  return TightBinding2D(lat, blocks);
}

/// P-cell ring with entry (n, n - m) = h(m).
CMatrix ring_matrix(const ConvolutionKernel& kernel, int P) {
  const int N = kernel.block_dim();
  CMatrix h = CMatrix::Zero(P * N, P * N);
  for (const auto& [m, blk] : kernel.blocks())
    for (int n = 0; n < P; ++n) {
      const int col = ((n - m) % P + P) % P;
      h.block(n * N, col * N, N, N) += blk;
    }
  return h;
}

/// Torus of the original lattice with periods P (n a1) and Q (n a1 + m a2), built cell by cell.
CMatrix torus_original(const TightBinding2D& tb, int n, int m, int P, int Q) {
  const long nm = std::abs(static_cast<long>(n) * m);
  auto key = [&](long i, long j) {
    const long A = static_cast<long>(m) * i - static_cast<long>(n) * j;
    const long B = static_cast<long>(n) * j;
    const long pa = P * nm, qb = Q * nm;
    return std::pair<long, long>{((A % pa) + pa) % pa, ((B % qb) + qb) % qb};
  };
  std::map<std::pair<long, long>, int> index;
  std::vector<std::pair<long, long>> cells;
  const long R = (P + Q) * (std::abs(n) + std::abs(m)) + 2;
  for (long i = -R; i <= R; ++i)
    for (long j = -R; j <= R; ++j)
      if (index.emplace(key(i, j), static_cast<int>(cells.size())).second) cells.push_back({i, j});
  const int M = tb.orbitals();
  const int cnt = static_cast<int>(cells.size());
  REQUIRE(cnt == P * Q * nm);
  CMatrix h = CMatrix::Zero(cnt * M, cnt * M);
  for (int c = 0; c < cnt; ++c)
    for (const auto& [r, blk] : tb.blocks()) {
      const int d = index.at(key(cells[c].first - r.i, cells[c].second - r.j));
      h.block(c * M, d * M, M, M) += blk;
    }
  return h;
}

/// Torus of a lattice with periods P a1, Q a2.
CMatrix torus_plain(const TightBinding2D& tb, int P, int Q) {
  const int M = tb.orbitals();
  CMatrix h = CMatrix::Zero(P * Q * M, P * Q * M);
  auto idx = [&](int p, int q) { return ((p % P + P) % P) * Q + ((q % Q + Q) % Q); };
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < Q; ++q)
      for (const auto& [r, blk] : tb.blocks()) h.block(idx(p, q) * M, idx(p - r.i, q - r.j) * M, M, M) += blk;
  return h;
}

}  // namespace

TEST_CASE("direct Fourier sum equals the library fiber") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  const auto kernel = random_kernel(rng, 3, 3);
  for (int s = 0; s < 200; ++s) {
    const double k = u(rng);
    CMatrix direct = CMatrix::Zero(3, 3);
    for (int m = -3; m <= 3; ++m) direct += kernel.block(m) * std::exp(cplx(0.0, -k * m));
    CHECK(max_abs(direct - bloch_fiber(kernel, k)) < 1e-13);
  }
}

TEST_CASE("ring spectrum equals the union of fibers on the discrete momenta") {
  std::mt19937_64 rng(22);
  for (int range : {1, 2}) {
    const auto kernel = random_kernel(rng, 2, range);
    const int P = 12;
    std::vector<double> want;
    for (int j = 0; j < P; ++j) {
      const auto ev = eigen_eigenvalues(bloch_fiber(kernel, 2.0 * M_PI * j / P));
      want.insert(want.end(), ev.begin(), ev.end());
    }
    std::sort(want.begin(), want.end());
    CHECK(max_diff(eigen_eigenvalues(ring_matrix(kernel, P)), want) < 1e-10);
  }
}

TEST_CASE("supercell ring equals the original ring") {
  std::mt19937_64 rng(23);
  const auto kernel = random_kernel(rng, 2, 3);
  const auto super = supercell_jacobi(kernel, 3).to_kernel();
  CHECK(max_diff(eigen_eigenvalues(ring_matrix(kernel, 24)), eigen_eigenvalues(ring_matrix(super, 8))) < 1e-10);
}

TEST_CASE("library eigensolver agrees with Eigen") {
  std::mt19937_64 rng(24);
  const auto kernel = random_kernel(rng, 2, 1);
  const CMatrix h = ring_matrix(kernel, 30);
  CHECK(max_diff(eigvalsh(h), eigen_eigenvalues(h)) < 1e-10);
  CHECK(max_diff(eigvalsh_banded(h, bandwidth(h)), eigen_eigenvalues(h)) < 1e-10);
}

TEST_CASE("hand-built edge truncation") {
  std::mt19937_64 rng(25);
  const auto kernel = random_kernel(rng, 2, 2);
  const auto wall = walls::linear_ramp(0.7, {0.1, 0.6});
  const int L = 9, N = 2;
  const double t = 0.35;
  CMatrix h = CMatrix::Zero((2 * L + 1) * N, (2 * L + 1) * N);
  for (int a = -L; a <= L; ++a) {
    for (int b = -L; b <= L; ++b) h.block((a + L) * N, (b + L) * N, N, N) = kernel.block(a - b);
    for (int i = 0; i < N; ++i) {
      const double off = i == 0 ? 0.1 : 0.6;
      h((a + L) * N + i, (a + L) * N + i) += std::max(0.0, -0.7 * (a - t + off));
    }
  }
  CHECK(max_abs(h - assemble_edge(kernel, wall, t, L).matrix) < 1e-14);
}

TEST_CASE("steep wall against its piecewise definition") {
  const auto jac = presets::ssh(1.5, 0.5);
  const auto base = walls::linear_ramp(1.0, {0.0, 0.25});
  const auto steep = steep_wall(base, jac, 0.0);
  const double sigma = 7.0, xs = steep.x_sigma;
  const CMatrix sat = sigma * CMatrix::Identity(2, 2) - jac.diag();
  auto reference = [&](double x) -> CMatrix {
    if (x >= 0.0) return CMatrix::Zero(2, 2);
    if (x >= -1.0) return -x * sat;
    if (x >= xs) return sat;
    if (x >= xs - 1.0) return (x - xs + 1.0) * sat + (xs - x) * base(x);
    return base(x);
  };
  for (double x = 2.0; x > xs - 5.0; x -= 0.0371) CHECK(max_abs(steep.profile(x) - reference(x)) < 1e-12);
}

TEST_CASE("flow counting against endpoint diagonalization") {
  std::mt19937_64 rng(26);
  const auto kernel = presets::ssh(1.5, 0.5).to_kernel();
  const auto wall = walls::linear_ramp(2.0, {0.0, 0.25});
  const int L = 40;
  const auto sweep = edge_sweep_t(kernel, wall, L, uniform_grid(0.0, 1.0, 30));
  for (double E : {-2.5, 0.0, 0.4, 2.5}) {
    auto below = [&](double t) {
      int c = 0;
      for (double e : eigen_eigenvalues(assemble_edge(kernel, wall, t, L).matrix)) c += e < E;
      return c;
    };
    CHECK(flow_counting(sweep_table(sweep), E).flow == below(1.0) - below(0.0));
  }
}

TEST_CASE("ring endpoints decouple into H_l and Sigma plus H_(l-1)") {
  const auto jac = presets::ssh(1.5, 0.5);
  const double sigma = 7.0;
  const int ell = 9;
  CHECK(max_diff(eigen_eigenvalues(assemble_ring(jac, sigma, 0.0, ell).matrix),
                 eigen_eigenvalues(ring_matrix(jac.to_kernel(), ell))) < 1e-10);
  auto ev = eigen_eigenvalues(ring_matrix(jac.to_kernel(), ell - 1));
  ev.push_back(sigma);
  ev.push_back(sigma);
  std::sort(ev.begin(), ev.end());
  CHECK(max_diff(eigen_eigenvalues(assemble_ring(jac, sigma, 1.0, ell).matrix), ev) < 1e-10);
}

TEST_CASE("2D fiber by direct summation") {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const auto tb = random_model2d(rng, 2);
  for (int s = 0; s < 100; ++s) {
    const Vec2 k(u(rng), u(rng));
    CMatrix direct = CMatrix::Zero(2, 2);
    for (const auto& [r, blk] : tb.blocks()) direct += blk * std::exp(cplx(0.0, -k.dot(tb.lattice().point(r))));
    CHECK(max_abs(direct - bloch2d(tb, k)) < 1e-13);
  }
}

TEST_CASE("supercell cut torus equals the original torus") {
  std::mt19937_64 rng(28);
  const auto wallace = presets::wallace();
  const auto random = random_model2d(rng, 2);
  for (const auto* tb : {&wallace, &random}) {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{-1, 1}, {-1, 2}, {2, -1}, {1, 3}, {3, -2}}) {
      const auto cut = supercell_cut(*tb, n, m);
      const auto a = eigen_eigenvalues(torus_original(*tb, n, m, 3, 2));
      const auto b = eigen_eigenvalues(torus_plain(cut.model, 3, 2));
      CHECK_MESSAGE(max_diff(a, b) < 1e-9, "cut (" << n << ", " << m << ")");
    }
  }
}

TEST_CASE("torus spectrum equals the reduced chains on the discrete k2") {
  const auto tb = presets::wallace();
  const int P = 6, Q = 5;
  std::vector<double> want;
  for (int q = 0; q < Q; ++q) {
    const auto ring = ring_matrix(reduce_to_1d(tb, static_cast<double>(q) / Q), P);
    const auto ev = eigen_eigenvalues(ring);
    want.insert(want.end(), ev.begin(), ev.end());
  }
  std::sort(want.begin(), want.end());
  CHECK(max_diff(eigen_eigenvalues(torus_plain(tb, P, Q)), want) < 1e-10);
}
