#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "dra/numerics.hpp"

namespace dra {

/// exp(-1), the channel capacity of this feedback model.
inline constexpr double kCapacity = 0.36787944117144232160;

/// Parameters of the deterministic drift field: input rate lambda,
/// probability scale beta, failure step (C) and success multiplier (D).
struct FluidParams {
  double lambda = 0.3;
  double beta = 0.9;
  double step = 2.0;  // C
  double mult = 8.0;  // D

  void validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) {
      throw std::invalid_argument("FluidParams: lambda must be in (0,1)");
    }
    if (!(beta > 0.0 && beta <= 1.0)) {
      throw std::invalid_argument("FluidParams: beta must be in (0,1]");
    }
    if (!(step > 0.0) || !(mult > 0.0)) {
      throw std::invalid_argument("FluidParams: step and mult must be > 0");
    }
  }
};

// --- limiting success rate and drifts, z = backlog / estimator -------------

inline double j1(double z, double beta) { return 0.5 * beta * z * std::exp(-beta * z); }

inline double j2(double z) { return 0.5 * z * std::exp(-z); }

/// Limiting per-slot success probability at direction z.
inline double j(double z, double beta) { return j1(z, beta) + j2(z); }

/// Limiting backlog drift per slot.
inline double drift_a(double z, const FluidParams& p) { return p.lambda - j(z, p.beta); }

/// b(z) / C: carries the sign of the estimator drift.
inline double b1(double z, double beta, double mult) {
  return 1.0 - j(z, beta) + mult * (j1(z, beta) - j2(z));
}

/// Limiting estimator drift per slot.
inline double drift_b(double z, const FluidParams& p) {
  return p.step * (1.0 - j(z, p.beta)) + p.step * p.mult * (j1(z, p.beta) - j2(z));
}

/// Radial component a(z) - z b(z); its sign drives the direction z along
/// fluid trajectories.
inline double drift_r(double z, const FluidParams& p) {
  return drift_a(z, p) - z * drift_b(z, p);
}

// --- exact finite-state one-step drifts -------------------------------------

/// Exact E[success | backlog=m, estimator=s]: the binomial single-hit
/// probability averaged over the coin.
inline double exact_drift_j(std::int64_t m, double s, double beta) {
  if (!(s >= 1.0)) throw std::invalid_argument("exact_drift_j: estimator below 1");
  if (m < 0) throw std::invalid_argument("exact_drift_j: negative backlog");
  if (m == 0) return 0.0;
  const double md = static_cast<double>(m);
  const double up = (md * beta / (2.0 * s)) * std::pow(1.0 - beta / s, md - 1.0);
  const double dn = (md / (2.0 * s)) * std::pow(1.0 - 1.0 / s, md - 1.0);
  return up + dn;
}

/// Exact one-step backlog drift at (m, s).
inline double exact_drift_a(std::int64_t m, double s, const FluidParams& p) {
  return p.lambda - exact_drift_j(m, s, p.beta);
}

/// True when the estimator update cannot hit the clamp at 1, so the
/// closed form below is exact rather than an upper bound.
inline bool drift_b_closed_form_exact(double s, const FluidParams& p) {
  return s > p.step * p.mult + 1.0;
}

/// Closed-form one-step estimator drift at (m, s). Exact when
/// drift_b_closed_form_exact(s, p); otherwise the clamp at 1 makes this
/// an upper bound on the true drift.
inline double exact_drift_b(std::int64_t m, double s, const FluidParams& p) {
  if (!(s >= 1.0)) throw std::invalid_argument("exact_drift_b: estimator below 1");
  if (m < 0) throw std::invalid_argument("exact_drift_b: negative backlog");
  const double jms = exact_drift_j(m, s, p.beta);
  double up = 0.0;
  double dn = 0.0;
  if (m > 0) {
    const double md = static_cast<double>(m);
    up = (md * p.beta / (2.0 * s)) * std::pow(1.0 - p.beta / s, md - 1.0);
    dn = (md / (2.0 * s)) * std::pow(1.0 - 1.0 / s, md - 1.0);
  }
  return p.step * (1.0 - jms) + p.step * p.mult * (up - dn);
}

// --- scalar summaries --------------------------------------------------------

struct CapacityResult {
  double z = 0.0;
  double value = 0.0;
};

/// Maximizes j(z, 1) by golden section. The maximum is exp(-1) at z = 1.
inline CapacityResult capacity_maximum() {
  const auto r = golden_section_min([](double z) { return -j(z, 1.0); }, 0.0, 5.0, 1e-13);
  return {r.x, -r.value};
}

/// min of j(., beta) over [1, 1/beta]: dense grid plus golden-section
/// refinement around the grid argmin.
inline double j_band_min(double beta, int grid_n = 2000, double x_tol = 1e-10) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("j_band_min: beta outside (0,1]");
  const double hi = 1.0 / beta;
  if (hi <= 1.0 + 1e-15) return j(1.0, beta);
  const auto grid = linspace(1.0, hi, grid_n);
  std::size_t best = 0;
  double best_val = j(grid[0], beta);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = j(grid[i], beta);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo_ref = grid[best == 0 ? 0 : best - 1];
  const double hi_ref = grid[best + 1 >= grid.size() ? grid.size() - 1 : best + 1];
  if (hi_ref <= lo_ref) return best_val;
  const auto refined = golden_section_min([&](double z) { return j(z, beta); }, lo_ref, hi_ref,
                                          x_tol);
  return std::min(best_val, refined.value);
}

}  // namespace dra
