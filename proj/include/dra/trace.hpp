#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dra/model.hpp"

namespace dra {

/// Recurrence target set {backlog <= backlog_max, estimator <= estimator_max}.
struct CompactSet {
  std::int64_t backlog_max = 100;
  double estimator_max = 1000.0;

  bool contains(std::int64_t backlog, double estimator) const {
    return backlog <= backlog_max && estimator <= estimator_max;
  }
};

struct RunConfig {
  std::int64_t horizon = 100000;
  int replications = 5;
  std::uint64_t seed = 1;
  std::int64_t n0 = 0;
  double s0 = 1.0;
  std::int64_t stride = 0;  // 0 = auto (about 20k records per trace)
  double warmup_fraction = 0.25;
  CompactSet k{};
  std::int64_t backlog_guard = 1000000000;  // abort-with-flag threshold

  std::int64_t effective_stride() const {
    if (stride > 0) return stride;
    return std::max<std::int64_t>(1, horizon / 20000);
  }

  std::int64_t warmup_slots() const {
    return static_cast<std::int64_t>(warmup_fraction * static_cast<double>(horizon));
  }

  void validate() const {
    if (horizon < 0) throw std::invalid_argument("RunConfig: negative horizon");
    if (replications < 1) throw std::invalid_argument("RunConfig: replications must be >= 1");
    if (stride < 0) throw std::invalid_argument("RunConfig: negative stride");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
      throw std::invalid_argument("RunConfig: warmup_fraction must be in [0,1)");
    }
    if (n0 < 0) throw std::invalid_argument("RunConfig: negative initial backlog");
    if (!(s0 >= 1.0)) throw std::invalid_argument("RunConfig: initial estimator below 1");
    if (k.backlog_max < 1 || !(k.estimator_max >= 1.0)) {
      throw std::invalid_argument("RunConfig: compact set thresholds must be >= 1");
    }
    if (backlog_guard < 1) throw std::invalid_argument("RunConfig: backlog_guard must be >= 1");
  }
};

struct TraceRecord {
  std::int64_t slot = 0;
  std::int64_t backlog = 0;
  double estimator = 1.0;
  double p = 0.0;
  std::int64_t transmitted = 0;
  bool success = false;
  std::int64_t cum_successes = 0;
  std::int64_t cum_arrivals = 0;

  bool operator==(const TraceRecord&) const = default;
};

struct TraceSummary {
  std::int64_t slots = 0;
  std::int64_t successes = 0;
  std::int64_t arrivals = 0;
  std::int64_t max_backlog = 0;
  std::int64_t final_backlog = 0;
  double final_estimator = 1.0;
  bool diverged = false;
  std::int64_t successes_at_warmup = 0;
  std::int64_t arrivals_at_warmup = 0;
  // visit = a slot whose post-step state lies in the compact set
  std::int64_t k_visits = 0;
  std::int64_t k_visits_post_warmup = 0;
  std::int64_t k_visits_first_half = 0;  // post-warmup window, first half
  std::int64_t k_first_visit = -1;
  std::int64_t k_last_visit = -1;
  std::int64_t k_max_gap = 0;
};

struct Trace {
  static constexpr std::size_t kVisitCap = 65536;

  std::vector<TraceRecord> records;
  TraceSummary summary;
  std::vector<std::int64_t> k_visit_slots;  // first kVisitCap visit slots
  std::int64_t stride = 1;
  std::int64_t warmup_slots = 0;
  CompactSet k{};
  std::int64_t n0 = 0;
  double s0 = 1.0;
};

/// Runs one chain for cfg.horizon slots. Deterministic per
/// (cfg.seed, stream_id); records every effective_stride() slots and
/// keeps exact online counters regardless of stride.
inline Trace run(const Protocol& proto, const ArrivalProcess& proc, const RunConfig& cfg,
                 std::uint64_t stream_id) {
  cfg.validate();
  validate(proto);

  Trace trace;
  trace.stride = cfg.effective_stride();
  trace.warmup_slots = cfg.warmup_slots();
  trace.k = cfg.k;
  trace.n0 = cfg.n0;
  trace.s0 = cfg.s0;

  RngStream rng(cfg.seed, stream_id);
  SystemState state;
  state.backlog = cfg.n0;
  state.estimator = std::max(cfg.s0, initial_estimator(proto));

  auto& s = trace.summary;
  s.final_backlog = state.backlog;
  s.final_estimator = state.estimator;
  s.max_backlog = state.backlog;

  const std::int64_t warmup = trace.warmup_slots;
  const std::int64_t half_mark = warmup + (cfg.horizon - warmup) / 2;

  for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
    const SlotResult r = step(state, proto, proc, rng);
    state = r.state;

    ++s.slots;
    s.successes += r.fb.success ? 1 : 0;
    s.arrivals += r.arrivals;
    s.max_backlog = std::max(s.max_backlog, state.backlog);
    if (n == warmup) {
      s.successes_at_warmup = s.successes;
      s.arrivals_at_warmup = s.arrivals;
    }

    if (cfg.k.contains(state.backlog, state.estimator)) {
      if (s.k_first_visit < 0) s.k_first_visit = n;
      if (s.k_last_visit >= 0) s.k_max_gap = std::max(s.k_max_gap, n - s.k_last_visit);
      s.k_last_visit = n;
      ++s.k_visits;
      if (n > warmup) {
        ++s.k_visits_post_warmup;
        if (n <= half_mark) ++s.k_visits_first_half;
      }
      if (trace.k_visit_slots.size() < Trace::kVisitCap) trace.k_visit_slots.push_back(n);
    }

    if (n % trace.stride == 0) {
      trace.records.push_back({n, state.backlog, state.estimator, r.p, r.transmitted,
                               r.fb.success, s.successes, s.arrivals});
    }

    if (state.backlog > cfg.backlog_guard) {
      s.diverged = true;
      break;
    }
  }

  s.final_backlog = state.backlog;
  s.final_estimator = state.estimator;
  return trace;
}

/// Post-warmup successes per slot. The warmup boundary must match the
/// recorded one (exact counters) or land on a recorded slot.
inline double estimate_throughput(const Trace& trace, std::int64_t warmup) {
  const auto& s = trace.summary;
  if (warmup < 0 || warmup >= s.slots) {
    throw std::invalid_argument("estimate_throughput: warmup must be < recorded slots");
  }
  if (warmup == trace.warmup_slots) {
    return static_cast<double>(s.successes - s.successes_at_warmup) /
           static_cast<double>(s.slots - warmup);
  }
  if (warmup == 0) return static_cast<double>(s.successes) / static_cast<double>(s.slots);
  // fall back to the recorded cumulative counters
  auto it = std::lower_bound(trace.records.begin(), trace.records.end(), warmup,
                             [](const TraceRecord& r, std::int64_t w) { return r.slot < w; });
  if (it == trace.records.end()) {
    throw std::invalid_argument("estimate_throughput: warmup beyond recorded slots");
  }
  const std::int64_t base_slot = it->slot;
  const std::int64_t base_succ = it->cum_successes;
  if (s.slots == base_slot) {
    throw std::invalid_argument("estimate_throughput: empty window after warmup");
  }
  return static_cast<double>(s.successes - base_succ) / static_cast<double>(s.slots - base_slot);
}

/// Gaps between consecutive recorded visits to the compact set (capped at
/// Trace::kVisitCap visits; exact counts live in the summary).
inline std::vector<std::int64_t> recurrence_times(const Trace& trace) {
  std::vector<std::int64_t> gaps;
  if (trace.k_visit_slots.size() < 2) return gaps;
  gaps.reserve(trace.k_visit_slots.size() - 1);
  for (std::size_t i = 1; i < trace.k_visit_slots.size(); ++i) {
    gaps.push_back(trace.k_visit_slots[i] - trace.k_visit_slots[i - 1]);
  }
  return gaps;
}

/// Mean gap between visits over the whole run; 0 when fewer than two visits.
inline double mean_recurrence_time(const Trace& trace) {
  const auto& s = trace.summary;
  if (s.k_visits < 2) return 0.0;
  return static_cast<double>(s.k_last_visit - s.k_first_visit) /
         static_cast<double>(s.k_visits - 1);
}

}  // namespace dra
