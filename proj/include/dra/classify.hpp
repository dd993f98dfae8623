#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dra/fluid.hpp"
#include "dra/trace.hpp"

namespace dra {

enum class StabilityClass { stable, transient, inconclusive };

inline std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable:
      return "stable";
    case StabilityClass::transient:
      return "transient";
    case StabilityClass::inconclusive:
      return "inconclusive";
  }
  return "?";
}

/// Classification thresholds. The verdict is a finite-sample statement:
/// near the capacity boundary desk-scale runs cannot resolve stability
/// and the classifier must say inconclusive rather than guess.
struct ClassifyOptions {
  double slope_tol = 1e-4;              // backlog slope treated as flat below this
  double min_recurrence_per_1e5 = 1.0;  // stable needs at least this visit rate
  double supercritical_fraction = 0.25;  // slope_min = fraction * (lambda - capacity)
};

struct StabilityVerdict {
  StabilityClass cls = StabilityClass::inconclusive;
  double slope = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double slope_min_used = 0.0;
  std::int64_t recurrences = 0;
  double recurrence_per_1e5 = 0.0;
  double mean_return = 0.0;
  double throughput = 0.0;
  int replications = 0;
};

namespace detail {

// two-sided 95% Student-t quantiles by degrees of freedom; normal beyond 30
inline double t_quantile_975(int df) {
  static constexpr double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return table[0];
  if (df <= 30) return table[df - 1];
  return 1.96;
}

// OLS slope of backlog vs slot over records past the warmup boundary.
inline bool ols_slope(const std::vector<TraceRecord>& records, std::int64_t from_slot,
                      double& slope_out) {
  double n = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& r : records) {
    if (r.slot <= from_slot) continue;
    n += 1.0;
    mean_x += (static_cast<double>(r.slot) - mean_x) / n;
    mean_y += (static_cast<double>(r.backlog) - mean_y) / n;
  }
  if (n < 3.0) return false;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& r : records) {
    if (r.slot <= from_slot) continue;
    const double dx = static_cast<double>(r.slot) - mean_x;
    sxx += dx * dx;
    sxy += dx * (static_cast<double>(r.backlog) - mean_y);
  }
  if (!(sxx > 0.0)) return false;
  slope_out = sxy / sxx;
  return true;
}

}  // namespace detail

/// Pools per-replication backlog slopes (CI from replication-level
/// variation) and the exact recurrence counters into a verdict:
///   transient      if the slope CI lies wholly above slope_min,
///   stable         if the CI upper end is flat and the chain keeps
///                  returning to the compact set,
///   inconclusive   otherwise.
inline StabilityVerdict classify_stability(const std::vector<Trace>& traces,
                                           double lambda_effective,
                                           const ClassifyOptions& opts = {}) {
  if (traces.size() < 3) {
    throw std::invalid_argument("classify_stability: need at least 3 replications");
  }

  StabilityVerdict v;
  v.replications = static_cast<int>(traces.size());

  std::vector<double> slopes;
  slopes.reserve(traces.size());
  for (const auto& t : traces) {
    double s = 0.0;
    if (detail::ols_slope(t.records, t.warmup_slots, s)) slopes.push_back(s);
  }

  std::int64_t visits = 0;
  std::int64_t window = 0;
  double gap_span = 0.0;
  double gap_count = 0.0;
  double throughput_sum = 0.0;
  for (const auto& t : traces) {
    visits += t.summary.k_visits_post_warmup;
    window += std::max<std::int64_t>(t.summary.slots - t.warmup_slots, 0);
    if (t.summary.k_visits >= 2) {
      gap_span += static_cast<double>(t.summary.k_last_visit - t.summary.k_first_visit);
      gap_count += static_cast<double>(t.summary.k_visits - 1);
    }
    throughput_sum += estimate_throughput(t, std::min(t.warmup_slots, t.summary.slots - 1));
  }
  v.recurrences = visits;
  v.recurrence_per_1e5 = window > 0 ? 1e5 * static_cast<double>(visits) / static_cast<double>(window) : 0.0;
  v.mean_return = gap_count > 0.0 ? gap_span / gap_count : 0.0;
  v.throughput = throughput_sum / static_cast<double>(traces.size());

  if (slopes.size() < 3) return v;  // inconclusive: not enough usable records

  double mean = 0.0;
  for (double s : slopes) mean += s;
  mean /= static_cast<double>(slopes.size());
  double var = 0.0;
  for (double s : slopes) var += (s - mean) * (s - mean);
  var /= static_cast<double>(slopes.size() - 1);
  const double sem = std::sqrt(var / static_cast<double>(slopes.size()));
  const double tq = detail::t_quantile_975(static_cast<int>(slopes.size()) - 1);

  v.slope = mean;
  v.ci_lo = mean - tq * sem;
  v.ci_hi = mean + tq * sem;
  v.slope_min_used = lambda_effective > kCapacity
                         ? (lambda_effective - kCapacity) * opts.supercritical_fraction
                         : opts.slope_tol;

  if (v.ci_lo > v.slope_min_used) {
    v.cls = StabilityClass::transient;
  } else if (v.ci_hi < opts.slope_tol && v.recurrence_per_1e5 >= opts.min_recurrence_per_1e5) {
    v.cls = StabilityClass::stable;
  } else {
    v.cls = StabilityClass::inconclusive;
  }
  return v;
}

}  // namespace dra
