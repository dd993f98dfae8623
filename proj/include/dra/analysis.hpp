#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dra/fluid.hpp"
#include "dra/numerics.hpp"
#include "dra/roots.hpp"

namespace dra {

/// Thrown by derive_params when no admissible parameters exist for the
/// requested rate band.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Knobs of the parameter derivation. The infima below are taken over
/// finite grids; resolutions are configurable and the defaults are the
/// documented contract.
struct DeriveOptions {
  double user_step = 0.0;        // extra floor for C beyond the analytic bound
  double margin_divisor = 4.0;   // margin = (capacity - lambda1) / divisor
  int lambda_grid_points = 200;  // grid for the infima over [lambda0, lambda1]
  double beta_grid_lo = 0.60;
  double beta_grid_hi = 0.9995;
  double beta_grid_step = 0.0005;
  double beta_pick_fraction = 0.5;  // chosen beta sits this far from beta1 toward 1
  double residual_tol = 1e-10;
  double mult_search_start = 1.0;  // doubling search start for D1
};

/// Output of derive_params: the analytic lower bounds and the chosen
/// working point. c1/d0/d1 keep the names the bounds are known by.
struct DerivedParams {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double margin = 0.0;
  double c1 = 0.0;     // (lambda1 + 1) / (1 - e^{-1})
  double step = 0.0;   // chosen C
  double beta1 = 0.0;  // smallest admissible probability scale
  double beta = 0.0;   // chosen beta in (beta1, 1)
  double d0 = 0.0;     // 2 / inf_lambda (j2(z1) - j1(z1))
  double d1 = 0.0;     // doubling-search bound pinning t1 near the origin
  double mult = 0.0;   // chosen D = max(d0, d1)
  double inf_beta_z2 = 0.0;
  double inf_gap = 0.0;  // inf over the band of j2(z1) - j1(z1)
  double t1_at_mult = 0.0;
  double t1_target = 0.0;  // lambda0 / (2 (C + 1))

  FluidParams at(double lambda) const { return FluidParams{lambda, beta, step, mult}; }
  bool in_band(double lambda) const { return lambda >= lambda0 && lambda <= lambda1; }
};

inline DerivedParams derive_params(double lambda0, double lambda1, DeriveOptions opts = {}) {
  if (!(lambda0 > 0.0 && lambda0 < lambda1)) {
    throw std::invalid_argument("derive_params: need 0 < lambda0 < lambda1");
  }
  if (!(lambda1 < kCapacity)) {
    throw InfeasibleError("derive_params: lambda1 >= capacity e^-1");
  }

  DerivedParams out;
  out.lambda0 = lambda0;
  out.lambda1 = lambda1;
  out.margin = (kCapacity - lambda1) / opts.margin_divisor;
  out.c1 = (lambda1 + 1.0) / (1.0 - kCapacity);
  out.step = std::max(out.c1, opts.user_step);

  const auto lambdas = linspace(lambda0, lambda1, opts.lambda_grid_points);

  // Smallest grid beta whose band minimum clears lambda1 + margin and
  // whose upper root keeps beta * z2 > 1 across the band.
  bool found = false;
  for (double beta = opts.beta_grid_lo; beta <= opts.beta_grid_hi + 1e-12;
       beta += opts.beta_grid_step) {
    if (j_band_min(beta) < lambda1 + out.margin) continue;
    double inf_bz2 = std::numeric_limits<double>::infinity();
    bool roots_ok = true;
    for (double lam : lambdas) {
      try {
        const auto roots = find_roots_a(lam, beta, opts.residual_tol);
        inf_bz2 = std::min(inf_bz2, beta * roots.z2);
      } catch (const BracketError&) {
        roots_ok = false;
        break;
      }
    }
    if (roots_ok && inf_bz2 > 1.0) {
      out.beta1 = beta;
      out.inf_beta_z2 = inf_bz2;
      found = true;
      break;
    }
  }
  if (!found) {
    throw InfeasibleError("derive_params: no beta on the grid satisfies the band conditions");
  }

  out.beta = out.beta1 + opts.beta_pick_fraction * (1.0 - out.beta1);

  // Gap bound: D0 = 2 / inf (j2(z1) - j1(z1)) at the chosen beta.
  out.inf_gap = std::numeric_limits<double>::infinity();
  for (double lam : lambdas) {
    const auto roots = find_roots_a(lam, out.beta, opts.residual_tol);
    out.inf_gap = std::min(out.inf_gap, j2(roots.z1) - j1(roots.z1, out.beta));
  }
  if (!(out.inf_gap > 0.0)) {
    throw InfeasibleError("derive_params: j2(z1) - j1(z1) not positive across the band");
  }
  out.d0 = 2.0 / out.inf_gap;

  // Origin bound: smallest doubling-search D whose lower b-root t1 falls
  // below lambda0 / (2 (C + 1)).
  out.t1_target = lambda0 / (2.0 * (out.step + 1.0));
  double d = std::max(opts.mult_search_start, 1.0);
  for (;;) {
    bool ok = false;
    try {
      const auto b = find_roots_b(out.beta, d, opts.residual_tol);
      ok = (b.t1 <= out.t1_target);
      if (ok) out.t1_at_mult = b.t1;
    } catch (const BracketError&) {
      ok = false;
    }
    if (ok) break;
    d *= 2.0;
    if (d > 1e15) throw InfeasibleError("derive_params: doubling search for D1 diverged");
  }
  out.d1 = d;
  out.mult = std::max(out.d0, out.d1);
  out.t1_at_mult = find_roots_b(out.beta, out.mult, opts.residual_tol).t1;
  return out;
}

/// Numerical witnesses for the root-structure conditions at one
/// parameter point. Failures land in the report, never in exceptions.
struct LemmaReport {
  FluidParams params;
  bool a_two_roots = false;
  bool b_two_roots = false;
  bool ordering = false;
  bool r_sign_ok = false;
  std::optional<ARoots> a;
  std::optional<BRoots> b;
  std::optional<RSignReport> r;
  std::string failure;

  bool pass() const { return a_two_roots && b_two_roots && ordering && r_sign_ok; }
};

inline LemmaReport verify_lemma(const FluidParams& params, double residual_tol = 1e-10) {
  params.validate();
  LemmaReport rep;
  rep.params = params;

  try {
    const auto a = find_roots_a(params.lambda, params.beta, residual_tol);
    rep.a = a;
    rep.a_two_roots = !a.degenerate;
    if (a.degenerate) rep.failure += "a-roots degenerate; ";
  } catch (const BracketError& e) {
    rep.failure += std::string("a-roots: ") + e.what() + "; ";
  }

  try {
    const auto b = find_roots_b(params.beta, params.mult, residual_tol);
    rep.b = b;
    rep.b_two_roots = true;
  } catch (const BracketError& e) {
    rep.failure += std::string("b-roots: ") + e.what() + "; ";
  }

  if (rep.a && rep.b && rep.a_two_roots && rep.b_two_roots) {
    rep.ordering = rep.b->t1 < rep.a->z1 && rep.a->z1 < rep.b->t2 && rep.b->t2 < rep.a->z2;
    if (!rep.ordering) rep.failure += "ordering t1 < z1 < t2 < z2 violated; ";
    const auto r = find_roots_r(params, *rep.a, *rep.b);
    rep.r = r;
    rep.r_sign_ok = r.pass();
    if (!rep.r_sign_ok) rep.failure += "r sign structure violated; ";
  }
  return rep;
}

}  // namespace dra
