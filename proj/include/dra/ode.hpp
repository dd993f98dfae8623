#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dra/fluid.hpp"

namespace dra {

enum class FluidStatus { converged, horizon_exceeded, diverged };

inline std::string to_string(FluidStatus s) {
  switch (s) {
    case FluidStatus::converged:
      return "converged";
    case FluidStatus::horizon_exceeded:
      return "horizon_exceeded";
    case FluidStatus::diverged:
      return "diverged";
  }
  return "?";
}

struct FluidPoint {
  double t = 0.0;
  double x = 0.0;  // scaled backlog
  double y = 0.0;  // scaled estimator
};

struct FluidOptions {
  double dt = 1e-3;
  double horizon = 100.0;
  double eps_stop = 0.1;       // converged once x + y <= 1 - eps_stop
  double y_floor = 1e-6;       // keeps z = x/y finite; never reached from y0 > 0 under stable params
  double guard_factor = 10.0;  // diverged once x + y >= guard_factor * max(1, x0 + y0)
  int record_stride = 100;     // keep one point per this many steps

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("FluidOptions: dt must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("FluidOptions: horizon must be > 0");
    if (!(eps_stop > 0.0 && eps_stop < 1.0)) {
      throw std::invalid_argument("FluidOptions: eps_stop must be in (0,1)");
    }
    if (!(y_floor > 0.0)) throw std::invalid_argument("FluidOptions: y_floor must be > 0");
    if (!(guard_factor > 1.0)) throw std::invalid_argument("FluidOptions: guard_factor must be > 1");
    if (record_stride < 1) throw std::invalid_argument("FluidOptions: record_stride must be >= 1");
  }
};

struct FluidTrajectory {
  std::vector<FluidPoint> points;
  FluidStatus status = FluidStatus::horizon_exceeded;
  double t_end = 0.0;
  double x_end = 0.0;
  double y_end = 0.0;
  double first_dip_t = -1.0;  // first time x + y fell to 1 - eps_stop, -1 if never
};

/// Integrates dx/dt = a(x/y), dy/dt = b(x/y) with classical RK4 at fixed
/// step. x is clamped at 0 and y floored at y_floor after every step.
///
/// Termination: `diverged` once x + y reaches the guard bound;
/// `converged` at a dip below 1 - eps_stop provided the sum-drift
/// a + b is non-expanding there. A dip with expanding drift (the
/// estimator component collapsing while the backlog still grows, as
/// happens above capacity where b is unchanged but a > 0 everywhere) is
/// recorded and integration continues, so supercritical runs surface as
/// diverged rather than stopping on the transient.
inline FluidTrajectory integrate_fluid(double x0, double y0, const FluidParams& params,
                                       const FluidOptions& opts = {}) {
  params.validate();
  opts.validate();
  if (!(x0 >= 0.0)) throw std::invalid_argument("integrate_fluid: x0 must be >= 0");
  if (!(y0 > 0.0)) throw std::invalid_argument("integrate_fluid: y0 must be > 0");

  const double guard = opts.guard_factor * std::max(1.0, x0 + y0);
  const double target = 1.0 - opts.eps_stop;

  auto fx = [&](double x, double y) {
    return drift_a(x / std::max(y, opts.y_floor), params);
  };
  auto fy = [&](double x, double y) {
    return drift_b(x / std::max(y, opts.y_floor), params);
  };

  FluidTrajectory traj;
  double x = x0;
  double y = std::max(y0, opts.y_floor);
  double t = 0.0;
  traj.points.push_back({t, x, y});

  const auto steps = static_cast<long long>(std::ceil(opts.horizon / opts.dt));
  for (long long i = 0; i < steps; ++i) {
    if (x + y <= target) {
      if (traj.first_dip_t < 0.0) traj.first_dip_t = t;
      if (fx(x, y) + fy(x, y) <= 0.0) {
        traj.status = FluidStatus::converged;
        break;
      }
    }
    if (x + y >= guard) {
      traj.status = FluidStatus::diverged;
      break;
    }
    const double h = opts.dt;
    const double k1x = fx(x, y);
    const double k1y = fy(x, y);
    const double k2x = fx(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
    const double k2y = fy(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
    const double k3x = fx(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
    const double k3y = fy(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
    const double k4x = fx(x + h * k3x, y + h * k3y);
    const double k4y = fy(x + h * k3x, y + h * k3y);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    x = std::max(x, 0.0);
    y = std::max(y, opts.y_floor);
    t = h * static_cast<double>(i + 1);
    if ((i + 1) % opts.record_stride == 0) traj.points.push_back({t, x, y});
  }

  if (traj.status == FluidStatus::horizon_exceeded) {
    if (x + y <= target) {
      if (traj.first_dip_t < 0.0) traj.first_dip_t = t;
      traj.status = FluidStatus::converged;
    }
    if (x + y >= guard) traj.status = FluidStatus::diverged;
  }
  if (traj.points.back().t != t) traj.points.push_back({t, x, y});
  traj.t_end = t;
  traj.x_end = x;
  traj.y_end = y;
  return traj;
}

/// n starting points spread over the unit simplex x + y = 1, y > 0.
inline std::vector<std::pair<double, double>> simplex_directions(int n) {
  if (n < 1) throw std::invalid_argument("simplex_directions: need n >= 1");
  std::vector<std::pair<double, double>> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double x = (n == 1) ? 0.5 : static_cast<double>(k) / (n - 1);
    dirs.emplace_back(x, 1.0 - x);
  }
  return dirs;
}

struct FieldSample {
  double x = 0.0;
  double y = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Drift vectors on a rectangular grid, for external plotting of the
/// invariant-region geometry.
inline std::vector<FieldSample> drift_field(const FluidParams& params,
                                            const std::vector<double>& xs,
                                            const std::vector<double>& ys,
                                            double y_floor = 1e-6) {
  params.validate();
  if (xs.empty() || ys.empty()) throw std::invalid_argument("drift_field: empty grid");
  std::vector<FieldSample> out;
  out.reserve(xs.size() * ys.size());
  for (double y : ys) {
    if (!(y > 0.0)) throw std::invalid_argument("drift_field: grid y must be > 0");
    for (double x : xs) {
      if (!(x >= 0.0)) throw std::invalid_argument("drift_field: grid x must be >= 0");
      const double z = x / std::max(y, y_floor);
      out.push_back({x, y, drift_a(z, params), drift_b(z, params)});
    }
  }
  return out;
}

}  // namespace dra
