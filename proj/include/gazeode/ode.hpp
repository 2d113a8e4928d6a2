#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gazeode/params.hpp"

namespace gazeode {

/// State of the coupled system: fixation count N, speed V, distance D and
/// goodness level G.
struct OdeState {
  double n = 0.0;
  double v = 0.0;
  double d = 0.0;
  double g = 0.0;

  friend bool operator==(const OdeState&, const OdeState&) = default;
};

struct InitialConditions {
  double n0 = 70.0;
  double v0 = 48.0;
  double d0 = 47.0;
  double g0 = 2.0;

  OdeState state() const { return {n0, v0, d0, g0}; }
};

/// Values on a uniform grid; times.size() == states.size().
struct Trajectory {
  std::vector<double> times;
  std::vector<OdeState> states;

  std::size_t size() const { return times.size(); }
};

/// V and G equations are singular at 1; states this close to it are rejected.
inline constexpr double kSingularityGuard = 1e-6;

/// Explicit right-hand side:
///   dN/dt = lambda*G - mu*N
///   dV/dt = k*V / (V - 1)      (V' = V*V' - k*V solved for V')
///   dD/dt = V - N
///   dG/dt = m*G / (G - 1)      (G' = G*G' - m*G solved for G')
/// Throws SingularState when |V - 1| or |G - 1| <= kSingularityGuard.
OdeState rhs(const OdeState& state, const OdeParams& params);

/// Classical fixed-step RK4 with h = (t1 - t0) / n_steps; returns n_steps + 1
/// points with t_i = t0 + i*h. Throws SingularState or NonFinite.
Trajectory integrate_rk4(const InitialConditions& ic, const OdeParams& params, double t0,
                         double t1, int n_steps);

/// max_i |(v_i - ln|v_i|) - (v0 - ln|v0| + k*(t_i - t0))|, the separable
/// first integral of the V equation.
double analytic_residual_v(const Trajectory& traj, const OdeParams& params,
                           const InitialConditions& ic);
/// Same first integral for G with rate m.
double analytic_residual_g(const Trajectory& traj, const OdeParams& params,
                           const InitialConditions& ic);

inline const std::vector<std::string> kTrajectoryHeader{"t", "n", "v", "d", "g"};

std::string trajectory_to_csv(const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& path);

}  // namespace gazeode
