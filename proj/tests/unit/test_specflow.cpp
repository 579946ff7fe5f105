#include <cmath>

#include "doctest.h"
#include "softwall/errors.hpp"
#include "softwall/specflow.hpp"

using namespace softwall;

namespace {

// Branches 1 - 2t (crossing 0 downward near t = 0.5), 3 + t, -2.
std::vector<double> toy(double t) {
  std::vector<double> ev{1.0 - 2.0 * t - 0.01, 3.0 + t, -2.0};
  std::sort(ev.begin(), ev.end());
  return ev;
}

SweepTable sample(const EigenvalueFamily& f, int n) {
  SweepTable tab;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    tab.t.push_back(t);
    tab.eigenvalues.push_back(f(t));
  }
  return tab;
}

}  // namespace

TEST_SUITE("specflow") {

TEST_CASE("downward crossing counts plus one") {
  const auto tab = sample(toy, 21);
  const auto c = flow_counting(tab, 0.0);
  CHECK(c.flow == 1);
  CHECK(c.count_start == 1);
  CHECK(c.count_end == 2);
  int sum = 0;
  for (const auto& x : c.crossings) sum += x.signed_count;
  CHECK(sum == 1);
  const auto p = flow_partition(toy, 0.0);
  CHECK(p.flow == 1);
  REQUIRE(p.plan.has_value());
  CHECK(p.plan->knots.front() == 0.0);
  CHECK(p.plan->knots.back() == 1.0);
}

TEST_CASE("energy on an endpoint eigenvalue") {
  const auto tab = sample(toy, 11);
  const double e0 = tab.eigenvalues.front()[1];
  try {
    flow_counting(tab, e0);
    FAIL("expected EOnEigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EOnEigenvalue);
  }
  FlowOptions opts;
  opts.gap = Gap{-2.0, 2.98, 2};
  const auto r = flow_counting(tab, e0, opts);
  CHECK(r.nudged);
  CHECK(r.E_used != e0);
}

TEST_CASE("partition sum with explicit plans") {
  const auto tab = sample(toy, 11);
  CHECK_THROWS_AS(partition_sum(PartitionPlan{{0.0, 0.5}, {}}, tab, 0.0, 1e-8), Error);
  // level E on [0, 0.4] (branch above 0.19), E + 0.5 on [0.4, 1] (branch below 0.19)
  const int sum = partition_sum(PartitionPlan{{0.0, 0.4, 1.0}, {0.0, 0.5}}, tab, 0.0, 1e-8);
  CHECK(sum == 1);
  CHECK(sum == flow_counting(tab, 0.0).flow);
}

TEST_CASE("jumping branch inside a capped gap makes the plan infeasible") {
  auto jump = [](double t) { return std::vector<double>{t < 0.5 ? -1.0 : 1.0}; };
  PartitionOptions opts;
  opts.samples = 11;
  opts.flow.gap = Gap{-2.0, 2.0, 1};
  try {
    flow_partition(jump, 0.0, opts);
    FAIL("expected PlanInfeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PlanInfeasible);
  }
}

TEST_CASE("wall only: one branch per orbital leaves through E") {
  const auto h0 = presets::onsite(CMatrix::Zero(1, 1));
  const auto wall = walls::smooth_sqrt();
  TheoremFlowOptions opts;
  opts.t_points = 60;
  const auto up = verify_theorem_flow(h0, wall, 0.2, 60, opts);
  CHECK(up.n_of_e == 1);
  CHECK(up.counting.flow == -1);
  CHECK(up.partition.flow == -1);
  const auto down = verify_theorem_flow(h0, wall, -0.2, 60, opts);
  CHECK(down.counting.flow == 0);
  CHECK(down.partition.flow == 0);
  CHECK(down.pass);
}

TEST_CASE("ssh flows in the three gap regions") {
  const auto k = presets::ssh(1.5, 0.5).to_kernel();
  const auto wall = walls::linear_ramp(1.0, {0.0, 0.25});
  TheoremFlowOptions opts;
  opts.t_points = 80;
  CHECK(verify_theorem_flow(k, wall, -2.5, 50, opts).counting.flow == 0);
  CHECK(verify_theorem_flow(k, wall, 0.0, 50, opts).pass);
  const auto top = verify_theorem_flow(k, wall, 2.5, 50, opts);
  CHECK(top.counting.flow == -2);
  CHECK(top.partition.flow == -2);
  try {
    verify_theorem_flow(k, wall, 1.5, 50, opts);
    FAIL("expected EInBand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EInBand);
  }
}

TEST_CASE("density in the middle gap") {
  const auto k = presets::ssh(1.5, 0.5).to_kernel();
  const auto wall = walls::linear_ramp(0.5, {0.0, 0.25});
  const auto r = verify_density(k, wall, 0.0, 0.3, 120);
  CHECK(r.length == doctest::Approx(0.5));
  CHECK(r.required == 1);
  CHECK_FALSE(r.vacuous);
  CHECK(r.pass);
  CHECK(r.gap.lo == doctest::Approx(-1.0).epsilon(1e-4));
  const auto steep = verify_density(k, walls::linear_ramp(5.0, {0.0, 0.25}), 0.0, 0.3, 120);
  CHECK(steep.vacuous);
  CHECK(steep.pass);
}

}  // TEST_SUITE
