#include <cmath>
#include <sstream>

#include "doctest.h"
#include "softwall/dislocation.hpp"
#include "softwall/errors.hpp"

using namespace softwall;

namespace {

const PeriodicJacobi& ssh() {
  static const auto j = presets::ssh(1.5, 0.5);
  return j;
}

}  // namespace

TEST_SUITE("dislocation") {

TEST_CASE("ring sites") {
  const RingSites five(5);
  CHECK(five.lo == -2);
  CHECK(five.hi == 2);
  const RingSites six(6);
  CHECK(six.lo == -2);
  CHECK(six.hi == 3);
  CHECK(six.index(0) == 2);
}

TEST_CASE("ring block layout") {
  const double sigma = 7.0, t = 0.3;
  const auto ring = assemble_ring(ssh(), sigma, t, 5);
  const int N = 2;
  auto blk = [&](int n, int m) { return CMatrix(ring.matrix.block((n + 2) * N, (m + 2) * N, N, N)); };
  const CMatrix& a = ssh().offdiag();
  const CMatrix& b = ssh().diag();
  CHECK(hermitian_defect(ring.matrix) == 0.0);
  CHECK(max_abs(blk(1, 2) - a) == 0.0);
  CHECK(max_abs(blk(-2, 2) - a.adjoint()) == 0.0);
  CHECK(max_abs(blk(2, -2) - a) == 0.0);
  CHECK(max_abs(blk(-1, 0) - (1 - t) * a) < 1e-15);
  CHECK(max_abs(blk(-1, 1) - t * a) < 1e-15);
  CHECK(max_abs(blk(0, 1) - (1 - t) * a) < 1e-15);
  CHECK(max_abs(blk(0, 0) - ((1 - t) * b + t * sigma * CMatrix::Identity(N, N))) < 1e-15);
  CHECK(max_abs(blk(-2, -2) - b) == 0.0);
}

TEST_CASE("ring is linear in t") {
  const auto r0 = assemble_ring(ssh(), 7.0, 0.0, 5).matrix;
  const auto r1 = assemble_ring(ssh(), 7.0, 1.0, 5).matrix;
  const auto mid = assemble_ring(ssh(), 7.0, 0.5, 5).matrix;
  CHECK(max_abs(mid - 0.5 * (r0 + r1)) < 1e-15);
}

TEST_CASE("too few cells") {
  try {
    assemble_ring(ssh(), 7.0, 0.0, 4);
    FAIL("expected TooFewCells");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewCells);
  }
}

TEST_CASE("undislocated ring is chiral") {
  const auto ev = eigvalsh(assemble_ring(ssh(), 7.0, 0.0, 21).matrix);
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] + ev[ev.size() - 1 - i]) < 1e-12);
}

TEST_CASE("ring endpoint counts") {
  const auto r = ring_flow_check(ssh(), 0.0, 20);
  CHECK(r.sigma == doctest::Approx(7.0));
  CHECK(r.count_t0 == 20);
  CHECK(r.count_t1 == 19);
  CHECK(r.implied_flow == -1);
  CHECK(r.pass);
  const auto top = ring_flow_check(ssh(), 2.5, 9);
  CHECK(top.count_t0 == 18);
  CHECK(top.count_t1 == 16);
}

TEST_CASE("cut operator stencil") {
  const double t = 0.25;
  const auto k = cut_operator(ssh(), t, -3, 2);
  const int N = 2;
  auto blk = [&](int n, int m) { return CMatrix(k.block((n + 3) * N, (m + 3) * N, N, N)); };
  const CMatrix& a = ssh().offdiag();
  CHECK(max_abs(blk(-2, -1) - (1 - t) * a) < 1e-15);
  CHECK(max_abs(blk(-1, 0) - a) == 0.0);
  CHECK(max_abs(blk(0, 1) - t * a) < 1e-15);
  CHECK(max_abs(blk(1, 0) - t * a.adjoint()) < 1e-15);
  CHECK(max_abs(blk(1, 2)) == 0.0);
  CHECK_THROWS_AS(cut_operator(ssh(), t, -1, 2), Error);
}

TEST_CASE("left block of the steep-wall truncation stays above E + 1") {
  const auto steep = steep_wall(walls::linear_ramp(1.0, {0.0, 0.25}), ssh(), 0.0);
  const auto r = left_block_gap_check(ssh(), steep, {0.0, 0.25, 0.5, 0.75, 1.0}, 30);
  CHECK(r.max_coupling == 0.0);
  CHECK(r.min_eigenvalue >= 1.0 - 1e-6);
  CHECK(r.pass);
}

TEST_CASE("projector rank in a window converges") {
  const auto conv = projector_rank_convergence(ssh(), 7.0, 0.0, {-0.5, 0.5}, 0.5, {8, 16, 32, 64});
  REQUIRE(conv.rows.size() == 4);
  CHECK(conv.reference.ell == 0);
  REQUIRE(conv.ell_star.has_value());
  for (const auto& row : conv.rows)
    if (row.ell >= *conv.ell_star) CHECK(row.count_in_window == conv.reference.count_in_window);
  std::ostringstream os;
  write_rank_csv(os, conv);
  CHECK(os.str().rfind("ell,t,count_below_E,count_in_window\n", 0) == 0);
  const std::string csv = os.str();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

}  // TEST_SUITE
