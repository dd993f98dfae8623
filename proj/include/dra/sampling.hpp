#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "dra/rng.hpp"

namespace dra {

namespace detail {

// Marsaglia-Tsang; requires shape >= 1.
inline double gamma_draw(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double beta_draw(double a, double b, RngStream& rng) {
  const double x = gamma_draw(a, rng);
  const double y = gamma_draw(b, rng);
  return x / (x + y);
}

// Counts successes among n trials by skipping geometric failure gaps.
// Exact inversion of the waiting-time chain, O(n*p) expected draws.
inline std::int64_t binomial_by_inversion(std::int64_t n, double p, RngStream& rng) {
  const double log_q = std::log1p(-p);
  std::int64_t hits = 0;
  std::int64_t trial = 0;
  for (;;) {
    const double gap = std::floor(std::log(rng.next_double_open()) / log_q);
    if (gap >= static_cast<double>(n)) return hits;
    trial += static_cast<std::int64_t>(gap) + 1;
    if (trial > n) return hits;
    ++hits;
  }
}

}  // namespace detail

/// One draw of Binomial(n, p).
///
/// n <= 64 runs plain Bernoulli trials; moderate means invert geometric
/// waiting times; very large means split the count recursively on a beta
/// order statistic so cost stays polylogarithmic in n. All paths sample
/// the exact distribution.
inline std::int64_t sample_binomial(std::int64_t n, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p outside [0,1]");
  if (n < 0) throw std::invalid_argument("sample_binomial: negative trial count");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
  if (n <= 64) {
    std::int64_t b = 0;
    for (std::int64_t i = 0; i < n; ++i) b += rng.bernoulli(p) ? 1 : 0;
    return b;
  }
  if (static_cast<double>(n) * p <= 1024.0) return detail::binomial_by_inversion(n, p, rng);
  // The i-th order statistic of n uniforms is Beta(i, n+1-i); conditioning
  // on it splits the count into two smaller binomials.
  const std::int64_t i = (n + 1) / 2;
  const double v = detail::beta_draw(static_cast<double>(i), static_cast<double>(n + 1 - i), rng);
  if (v <= p) {
    const double q = std::clamp((p - v) / (1.0 - v), 0.0, 1.0);
    return i + sample_binomial(n - i, q, rng);
  }
  const double q = std::clamp(p / v, 0.0, 1.0);
  return sample_binomial(i - 1, q, rng);
}

namespace detail {

inline std::int64_t poisson_knuth(double mean, RngStream& rng) {
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double prod = 1.0;
  do {
    ++k;
    prod *= rng.next_double_open();
  } while (prod > limit);
  return k - 1;
}

}  // namespace detail

/// One draw of Poisson(mean). Knuth's product-of-uniforms loop; large
/// means are split into chunks so exp(-mean) stays representable.
inline std::int64_t sample_poisson(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("sample_poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  std::int64_t total = 0;
  while (mean > 500.0) {
    total += detail::poisson_knuth(500.0, rng);
    mean -= 500.0;
  }
  return total + detail::poisson_knuth(mean, rng);
}

}  // namespace dra
