#include <cmath>

#include <gtest/gtest.h>

#include "gazeode/ode.hpp"
#include "test_util.hpp"

using namespace gazeode;

namespace {

const OdeParams kDefaults{1.90236, 0.3170, 0.1389, 2.0};

double exp_decay_error(int steps) {
  const OdeParams p{0.0, 0.3170, 0.1389, 2.0};
  const auto traj = integrate_rk4({}, p, 0.0, 10.0, steps);
  return std::abs(traj.states.back().n - 70.0 * std::exp(-p.mu * 10.0));
}

}  // namespace

TEST(Rhs, InitialSlopes) {
  const auto d = rhs(InitialConditions{}.state(), kDefaults);
  EXPECT_DOUBLE_EQ(d.n, 1.90236 * 2 - 0.3170 * 70);
  EXPECT_DOUBLE_EQ(d.v, 2.0 * 48 / 47);
  EXPECT_DOUBLE_EQ(d.d, 48.0 - 70.0);
  EXPECT_DOUBLE_EQ(d.g, 0.1389 * 2 / 1);
}

TEST(Rhs, SingularPoints) {
  EXPECT_ERROR_KIND(rhs({1, 1.0, 1, 2}, kDefaults), SingularState);
  EXPECT_ERROR_KIND(rhs({1, 2, 1, 1.0 + 5e-7}, kDefaults), SingularState);
  EXPECT_NO_THROW(rhs({1, 1.0 + 2e-6, 1, 2}, kDefaults));
}

TEST(Rk4, GridShape) {
  const auto traj = integrate_rk4({}, kDefaults, 0.0, 10.0, 2025);
  ASSERT_EQ(traj.size(), 2026u);
  EXPECT_EQ(traj.times.front(), 0.0);
  EXPECT_EQ(traj.times.back(), 10.0);
  EXPECT_DOUBLE_EQ(traj.times[1], 10.0 / 2025);
  EXPECT_EQ(traj.states.front(), InitialConditions{}.state());
}

TEST(Rk4, FirstIntegralsHold) {
  const auto traj = integrate_rk4({}, kDefaults, 0.0, 10.0, 2025);
  EXPECT_LT(analytic_residual_v(traj, kDefaults, {}), 1e-8);
  EXPECT_LT(analytic_residual_g(traj, kDefaults, {}), 1e-8);
}

TEST(Rk4, VAndGIncrease) {
  const auto traj = integrate_rk4({}, kDefaults, 0.0, 10.0, 2025);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    ASSERT_GT(traj.states[i].v, traj.states[i - 1].v);
    ASSERT_GT(traj.states[i].g, traj.states[i - 1].g);
  }
}

TEST(Rk4, DecoupledFixationCountDecays) {
  const OdeParams p{0.0, 0.3170, 0.1389, 2.0};
  const auto traj = integrate_rk4({}, p, 0.0, 10.0, 2025);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double exact = 70.0 * std::exp(-p.mu * traj.times[i]);
    ASSERT_LT(std::abs(traj.states[i].n - exact) / exact, 1e-8);
  }
}

TEST(Rk4, FourthOrderConvergence) {
  const double ratio = exp_decay_error(25) / exp_decay_error(50);
  EXPECT_NEAR(ratio, 16.0, 2.0);
  // same on the nonlinear V equation, through its first integral
  auto v_error = [](int steps) {
    const auto traj = integrate_rk4({}, kDefaults, 0.0, 10.0, steps);
    return analytic_residual_v(traj, kDefaults, {});
  };
  EXPECT_NEAR(v_error(10) / v_error(20), 16.0, 2.0);
}

TEST(Rk4, Errors) {
  InitialConditions unit_v;
  unit_v.v0 = 1.0;
  EXPECT_ERROR_KIND(integrate_rk4(unit_v, kDefaults, 0, 10, 100), SingularState);
  InitialConditions nan_n;
  nan_n.n0 = std::nan("");
  EXPECT_ERROR_KIND(integrate_rk4(nan_n, kDefaults, 0, 10, 100), NonFinite);
  EXPECT_ERROR_KIND(integrate_rk4({}, kDefaults, 10, 10, 100), InvalidArgument);
  EXPECT_ERROR_KIND(integrate_rk4({}, kDefaults, 0, 10, 0), InvalidArgument);
  InitialConditions near_g;
  near_g.g0 = 1.0 + 1e-7;
  EXPECT_ERROR_KIND(integrate_rk4(near_g, kDefaults, 0, 10, 100), SingularState);
}

TEST(Rk4, Deterministic) {
  const auto a = integrate_rk4({}, kDefaults, 0.0, 10.0, 2025);
  const auto b = integrate_rk4({}, kDefaults, 0.0, 10.0, 2025);
  EXPECT_EQ(a.states, b.states);
}

TEST(Trajectory, CsvRoundTripIsExact) {
  testutil::TempDir dir;
  const auto traj = integrate_rk4({}, kDefaults, 0.0, 10.0, 200);
  const auto p = dir.write("trajectory.csv", trajectory_to_csv(traj));
  const auto back = load_trajectory(p);
  EXPECT_EQ(back.times, traj.times);
  EXPECT_EQ(back.states, traj.states);
  EXPECT_ERROR_KIND(load_trajectory(dir.write("empty.csv", "t,n,v,d,g\n")), EmptyFile);
}
