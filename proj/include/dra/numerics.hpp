#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dra {

/// Thrown when a root finder cannot obtain a sign change.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
};

/// Bisection on [lo, hi]. Requires a sign change (or an exact zero at an
/// endpoint). Functions here are cheap and brackets are analytically
/// available, so robustness beats fancier methods.
template <typename F>
RootResult bisect(F&& f, double lo, double hi, double x_tol = 1e-15, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0};
  if (fhi == 0.0) return {hi, 0.0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  double mid = 0.5 * (lo + hi);
  double fmid = f(mid);
  for (int i = 0; i < max_iter; ++i) {
    if (fmid == 0.0) break;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    fmid = f(mid);
    if (hi - lo <= x_tol * std::max(1.0, std::abs(mid))) break;
  }
  return {mid, fmid};
}

struct MinResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section minimization on [lo, hi] for unimodal f.
template <typename F>
MinResult golden_section_min(F&& f, double lo, double hi, double x_tol = 1e-12,
                             int max_iter = 400) {
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Scans n+1 equally spaced points on [lo, hi] and returns the
/// subintervals where f changes sign (or touches zero).
template <typename F>
std::vector<std::pair<double, double>> sign_change_brackets(F&& f, double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("sign_change_brackets: need n >= 1");
  std::vector<std::pair<double, double>> out;
  const double step = (hi - lo) / n;
  double x_prev = lo;
  double f_prev = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + step * i;
    const double fx = f(x);
    if (f_prev == 0.0 || (f_prev > 0.0) != (fx > 0.0)) out.emplace_back(x_prev, x);
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace: need n >= 2");
  std::vector<double> v(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
  v.back() = hi;
  return v;
}

}  // namespace dra
