#include "gazeode/ode.hpp"

#include <algorithm>
#include <cmath>

#include "gazeode/csv.hpp"
#include "gazeode/errors.hpp"

namespace gazeode {

namespace {

OdeState axpy(const OdeState& base, double h, const OdeState& slope) {
  return {base.n + h * slope.n, base.v + h * slope.v, base.d + h * slope.d, base.g + h * slope.g};
}

bool finite(const OdeState& s) {
  return std::isfinite(s.n) && std::isfinite(s.v) && std::isfinite(s.d) && std::isfinite(s.g);
}

double first_integral(double x) { return x - std::log(std::abs(x)); }

}  // namespace

OdeState rhs(const OdeState& s, const OdeParams& p) {
  if (std::abs(s.v - 1.0) <= kSingularityGuard) {
    throw Error(ErrorKind::SingularState, "V = " + csv::format_double(s.v) + " is at the singular point 1");
  }
  if (std::abs(s.g - 1.0) <= kSingularityGuard) {
    throw Error(ErrorKind::SingularState, "G = " + csv::format_double(s.g) + " is at the singular point 1");
  }
  return {p.lambda * s.g - p.mu * s.n, p.k * s.v / (s.v - 1.0), s.v - s.n,
          p.m * s.g / (s.g - 1.0)};
}

Trajectory integrate_rk4(const InitialConditions& ic, const OdeParams& params, double t0,
                         double t1, int n_steps) {
  if (!(t1 > t0) || n_steps < 1) {
    throw Error(ErrorKind::InvalidArgument, "need t1 > t0 and n_steps >= 1");
  }
  const OdeState start = ic.state();
  if (!finite(start)) throw Error(ErrorKind::NonFinite, "initial conditions must be finite");

  const double span = t1 - t0;
  const double h = span / n_steps;
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.times.push_back(t0);
  traj.states.push_back(start);

  OdeState y = start;
  for (int i = 0; i < n_steps; ++i) {
    const OdeState k1 = rhs(y, params);
    const OdeState k2 = rhs(axpy(y, 0.5 * h, k1), params);
    const OdeState k3 = rhs(axpy(y, 0.5 * h, k2), params);
    const OdeState k4 = rhs(axpy(y, h, k3), params);
    y.n += h / 6.0 * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n);
    y.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    y.d += h / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d);
    y.g += h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
    if (!finite(y)) {
      throw Error(ErrorKind::NonFinite, "state left the finite range at step " + std::to_string(i + 1));
    }
    traj.times.push_back(i + 1 == n_steps ? t1 : t0 + span * (i + 1) / n_steps);
    traj.states.push_back(y);
  }
  return traj;
}

double analytic_residual_v(const Trajectory& traj, const OdeParams& params,
                           const InitialConditions& ic) {
  const double c0 = first_integral(ic.v0);
  const double t0 = traj.times.empty() ? 0.0 : traj.times.front();
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r = first_integral(traj.states[i].v) - (c0 + params.k * (traj.times[i] - t0));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double analytic_residual_g(const Trajectory& traj, const OdeParams& params,
                           const InitialConditions& ic) {
  const double c0 = first_integral(ic.g0);
  const double t0 = traj.times.empty() ? 0.0 : traj.times.front();
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r = first_integral(traj.states[i].g) - (c0 + params.m * (traj.times[i] - t0));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = csv::join(kTrajectoryHeader) + "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.states[i];
    out += csv::join({csv::format_double(traj.times[i]), csv::format_double(s.n),
                      csv::format_double(s.v), csv::format_double(s.d), csv::format_double(s.g)});
    out += '\n';
  }
  return out;
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  if (table.header.empty() || table.rows.empty()) {
    throw Error(ErrorKind::EmptyFile, path.string() + " contains no trajectory");
  }
  csv::expect_header(table, kTrajectoryHeader, path);
  Trajectory traj;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::RowReader row(path, table, r);
    const double t = row.real(0);
    if (!traj.times.empty() && !(t > traj.times.back())) {
      row.fail("time does not increase", ErrorKind::NonMonotonicTime);
    }
    traj.times.push_back(t);
    traj.states.push_back({row.real(1), row.real(2), row.real(3), row.real(4)});
  }
  return traj;
}

}  // namespace gazeode
