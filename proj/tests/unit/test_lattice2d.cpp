#include <cmath>
#include <random>

#include "doctest.h"
#include "softwall/errors.hpp"
#include "softwall/lattice2d.hpp"

using namespace softwall;

TEST_SUITE("lattice2d") {

TEST_CASE("reciprocal vectors") {
  const auto tb = presets::wallace();
  const auto& lat = tb.lattice();
  CHECK(lat.a1_star().dot(lat.a1()) == doctest::Approx(2 * M_PI));
  CHECK(std::abs(lat.a1_star().dot(lat.a2())) < 1e-14);
  CHECK(lat.a2_star().dot(lat.a2()) == doctest::Approx(2 * M_PI));
  CHECK(lat.cell_area() == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(std::abs(lat.a2_perp().dot(lat.a2())) < 1e-14);
  CHECK(lat.a2_perp().dot(lat.a1()) > 0.0);
}

TEST_CASE("wallace fiber closed form") {
  const auto tb = presets::wallace();
  const auto& lat = tb.lattice();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int s = 0; s < 1000; ++s) {
    const Vec2 k(u(rng), u(rng));
    const double r = std::abs(1.0 + std::exp(cplx(0, -k.dot(lat.a1()))) + std::exp(cplx(0, k.dot(lat.a2()))));
    const auto ev = eigvalsh(bloch2d(tb, k));
    CHECK(std::abs(ev[0] + r) < 1e-12);
    CHECK(std::abs(ev[1] - r) < 1e-12);
  }
}

TEST_CASE("partial Fourier reduction reproduces the 2D fiber") {
  const auto tb = presets::wallace();
  for (double f : {-0.4, 0.1, 1.0 / 3.0}) {
    const auto kernel = reduce_to_1d(tb, f);
    CHECK(kernel.range() == 1);
    for (double k1 : {-2.0, 0.3, 2.9})
      CHECK(max_abs(bloch_fiber(kernel, k1) - bloch2d(tb, momentum(tb.lattice(), k1, f))) < 1e-13);
  }
}

TEST_CASE("zigzag reduction is an ssh chain") {
  const double f = 0.3;
  const auto kernel = reduce_to_1d(presets::wallace(), f);
  const auto jac = PeriodicJacobi::from_kernel(kernel);
  CHECK(std::abs(std::abs(jac.diag()(0, 1)) - std::abs(1.0 + std::exp(cplx(0, 2 * M_PI * f)))) < 1e-14);
  CHECK(op_norm(jac.offdiag()) == doctest::Approx(1.0));
}

TEST_CASE("cut validation") {
  const auto tb = presets::wallace();
  try {
    supercell_cut(tb, 2, 4);
    FAIL("expected NotCoprime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCoprime);
  }
  try {
    supercell_cut(tb, 0, 1);
    FAIL("expected ZeroIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroIndex);
  }
}

TEST_CASE("cut coordinates") {
  CHECK(to_cut_coordinates(-1, 2, {-1, 0}) == LatticeVector{1, 0});
  CHECK(to_cut_coordinates(-1, 2, {-1, 2}) == LatticeVector{0, 1});
}

TEST_CASE("armchair and (-1,2) cuts fold") {
  const auto tb = presets::wallace();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& cut : {presets::wallace_armchair(), presets::wallace_cut(-1, 2), presets::wallace_cut(2, -1)}) {
    CHECK(cut.model.orbitals() == 2 * std::abs(cut.n * cut.m));
    for (int s = 0; s < 20; ++s) CHECK(folded_fiber_check(tb, cut, Vec2(u(rng), u(rng))).pass);
  }
}

TEST_CASE("both labellings of the (-1,2) cut give the same bulk fibers") {
  const auto a = presets::wallace_cut(-1, 2);
  const auto b = presets::wallace_cut(2, -1);
  for (double f : {0.1, 1.0 / 6.0, 0.4}) {
    const auto ga = gap_catalog(band_structure(reduce_to_1d(a.model, f), 4096));
    const auto gb = gap_catalog(band_structure(reduce_to_1d(b.model, f), 4096));
    const double tol = ga.grid_error + gb.grid_error;
    REQUIRE(ga.bands.size() == gb.bands.size());
    for (std::size_t j = 0; j < ga.bands.size(); ++j) {
      CHECK(std::abs(ga.bands[j].lo - gb.bands[j].lo) <= tol);
      CHECK(std::abs(ga.bands[j].hi - gb.bands[j].hi) <= tol);
    }
  }
}

TEST_CASE("2D wall seen by the reduced chain") {
  const auto tb = presets::wallace();
  const auto v = walls::linear_ramp(1.0);
  const auto w = wall2d_profile(v, tb.lattice());
  const auto& lat = tb.lattice();
  const double s = lat.a2_perp().dot(lat.a1());
  CHECK(s == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(w.lipschitz() == doctest::Approx(s));
  for (int c1 : {-4, 0, 3}) {
    const double t = 0.4;
    CHECK(max_abs(w(c1 - t) - wall2d_block(v, lat, {c1, 5}, t)) < 1e-14);
  }
}

TEST_CASE("gauge transform strips hopping phases") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.2, 2.0), ph(-M_PI, M_PI);
  HoppingChain chain;
  for (int j = 0; j < 3; ++j) {
    chain.onsite.push_back(u(rng) - 1.0);
    chain.hops.push_back(std::polar(u(rng), ph(rng)));
  }
  const int n = 40;
  const auto g = gauge_transform(chain, n);
  const CMatrix h = chain_truncation(chain, n);
  CVector d(n);
  for (int j = 0; j < n; ++j) d(j) = std::exp(cplx(0, g.phases[j]));
  const CMatrix uhu = d.asDiagonal() * h * d.conjugate().asDiagonal();
  CHECK(max_abs(uhu - chain_truncation(g.stripped, n)) < 1e-13);
  for (const auto& hop : g.stripped.hops) CHECK(std::abs(hop.imag()) == 0.0);
}

TEST_CASE("fiber gap away from and near the Dirac points") {
  const auto tb = presets::wallace();
  CHECK(fiber_gap(tb, 0.1, 0) > 0.1);
  CHECK(fiber_gap(tb, 1.0 / 3.0, 0) < 1e-6);
  const auto scan = scan_fiber_gap(tb, {0.0, 0.2, 0.3, 0.4}, 0);
  CHECK(scan.argmin == doctest::Approx(0.3));
}

}  // TEST_SUITE
