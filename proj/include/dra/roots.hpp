#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dra/fluid.hpp"
#include "dra/numerics.hpp"

namespace dra {

/// Roots of a(z) = 0, i.e. j(z, beta) = lambda. When the rate sits below
/// the band minimum of j the lower root is < 1 and the upper root is
/// > 1/beta; a collapsed bracket (rate at the maximum) is flagged
/// degenerate instead of failing.
struct ARoots {
  double z1 = 0.0;
  double z2 = 0.0;
  double res1 = 0.0;  // |j(z1) - lambda|
  double res2 = 0.0;
  bool degenerate = false;
  double band_min = 0.0;  // min of j on [1, 1/beta]
};

inline ARoots find_roots_a(double lambda, double beta, double residual_tol = 1e-10) {
  if (!(lambda > 0.0)) throw std::invalid_argument("find_roots_a: lambda must be > 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("find_roots_a: beta outside (0,1]");

  ARoots out;
  out.band_min = j_band_min(beta);
  const double at_one = j(1.0, beta);

  if (lambda > out.band_min + 1e-12 || lambda > at_one + 1e-12) {
    throw BracketError("find_roots_a: rate above the two-root region (j band min " +
                       std::to_string(out.band_min) + ")");
  }
  if (lambda >= out.band_min - 1e-12) {
    // Rate touches the minimum of j over the band: brackets collapse.
    const auto m = golden_section_min([&](double z) { return j(z, beta); }, 1.0,
                                      std::max(1.0, 1.0 / beta), 1e-13);
    out.degenerate = true;
    out.z1 = out.z2 = m.x;
    out.res1 = out.res2 = std::abs(j(m.x, beta) - lambda);
    return out;
  }

  const auto lower = bisect([&](double z) { return j(z, beta) - lambda; }, 1e-12, 1.0);
  out.z1 = lower.x;
  out.res1 = std::abs(lower.residual);

  double hi = std::max(2.0, 2.0 / beta);
  while (j(hi, beta) >= lambda) {
    hi *= 2.0;
    if (hi > 1e12) throw BracketError("find_roots_a: no upper bracket");
  }
  const auto upper = bisect([&](double z) { return j(z, beta) - lambda; }, 1.0 / beta, hi);
  out.z2 = upper.x;
  out.res2 = std::abs(upper.residual);

  if (out.res1 > residual_tol || out.res2 > residual_tol) {
    throw BracketError("find_roots_a: residual above tolerance");
  }
  if (std::abs(out.z2 - out.z1) < 1e-9) out.degenerate = true;
  return out;
}

/// Roots of b1(z) = 1 - j + mult (j1 - j2) = 0. Needs mult large enough
/// that b1 dips negative; otherwise throws BracketError.
struct BRoots {
  double t1 = 0.0;
  double t2 = 0.0;
  double res1 = 0.0;
  double res2 = 0.0;
  double b1_min = 0.0;
  double b1_argmin = 0.0;
  int crossings = 0;
};

inline BRoots find_roots_b(double beta, double mult, double residual_tol = 1e-10,
                           int grid_n = 10000) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("find_roots_b: beta outside (0,1)");
  if (!(mult > 0.0)) throw std::invalid_argument("find_roots_b: mult must be > 0");

  // j1 < j2 exactly on (0, z*) with z* = log(1/beta)/(1-beta) >= 1, so any
  // negative excursion of b1 lives left of z*.
  const double z_star = std::log(1.0 / beta) / (1.0 - beta);
  const double z_hi = 2.0 * std::max(1.0, z_star);
  auto f = [&](double z) { return b1(z, beta, mult); };

  BRoots out;
  out.b1_min = f(z_hi);
  out.b1_argmin = z_hi;
  const double step = z_hi / grid_n;
  for (int i = 1; i <= grid_n; ++i) {
    const double z = step * i;
    const double v = f(z);
    if (v < out.b1_min) {
      out.b1_min = v;
      out.b1_argmin = z;
    }
  }
  if (!(out.b1_min < 0.0)) {
    throw BracketError("find_roots_b: b1 never negative (mult too small, min " +
                       std::to_string(out.b1_min) + ")");
  }

  const auto brackets = sign_change_brackets(f, step * 1e-3, z_hi, grid_n);
  out.crossings = static_cast<int>(brackets.size());
  if (brackets.size() < 2) {
    throw BracketError("find_roots_b: expected two crossings, found " +
                       std::to_string(brackets.size()));
  }
  const auto lower = bisect(f, brackets.front().first, brackets.front().second);
  const auto upper = bisect(f, brackets.back().first, brackets.back().second);
  out.t1 = lower.x;
  out.t2 = upper.x;
  out.res1 = std::abs(lower.residual);
  out.res2 = std::abs(upper.residual);
  if (out.res1 > residual_tol || out.res2 > residual_tol) {
    throw BracketError("find_roots_b: residual above tolerance");
  }
  return out;
}

/// Sign structure of r(z) = a(z) - z b(z): positive left of z1, negative
/// right of t2, with every root inside (z1, t2).
struct RSignReport {
  std::vector<double> roots;
  std::vector<double> residuals;
  bool positive_left_of_z1 = false;
  bool negative_right_of_t2 = false;
  bool roots_inside = false;

  bool pass() const { return positive_left_of_z1 && negative_right_of_t2 && roots_inside; }
};

inline RSignReport find_roots_r(const FluidParams& p, const ARoots& a, const BRoots& b,
                                int grid_n = 10000) {
  RSignReport out;
  auto f = [&](double z) { return drift_r(z, p); };
  const double z_lo = 1e-9;
  const double z_hi = 2.0 * a.z2;

  for (const auto& [lo, hi] : sign_change_brackets(f, z_lo, z_hi, grid_n)) {
    const auto root = bisect(f, lo, hi);
    out.roots.push_back(root.x);
    out.residuals.push_back(std::abs(root.residual));
  }

  out.positive_left_of_z1 = true;
  for (double z : linspace(z_lo, a.z1, 2000)) {
    if (!(f(z) > 0.0)) {
      out.positive_left_of_z1 = false;
      break;
    }
  }
  out.negative_right_of_t2 = true;
  for (double z : linspace(b.t2, z_hi, 2000)) {
    if (!(f(z) < 0.0)) {
      out.negative_right_of_t2 = false;
      break;
    }
  }
  out.roots_inside = true;
  for (double root : out.roots) {
    if (!(root > a.z1 && root < b.t2)) out.roots_inside = false;
  }
  return out;
}

}  // namespace dra
