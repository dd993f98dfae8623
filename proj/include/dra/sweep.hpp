#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dra/classify.hpp"
#include "dra/hfunctions.hpp"
#include "dra/trace.hpp"

namespace dra {

/// Grid axes for a sweep. An empty axis is not swept; at least one axis
/// must be non-empty.
struct SweepAxes {
  std::vector<double> lambda;
  std::vector<double> mult;  // A1 only (the protocol's D)
  std::vector<double> beta;  // A1 / A2 only

  bool all_empty() const { return lambda.empty() && mult.empty() && beta.empty(); }
};

struct SweepCell {
  std::size_t index = 0;
  double lambda = 0.0;
  std::optional<double> mult;
  std::optional<double> beta;
  bool ok = false;
  std::string error;
  StabilityVerdict verdict;
};

struct SweepResult {
  SweepAxes axes;
  std::vector<SweepCell> cells;
};

namespace detail {

inline void apply_lambda(ArrivalProcess& proc, double lambda) {
  switch (proc.kind) {
    case ArrivalProcess::Kind::poisson:
      proc.rate = lambda;
      return;
    case ArrivalProcess::Kind::bernoulli_batch: {
      if (proc.batch <= 0) throw std::invalid_argument("lambda axis: batch size must be > 0");
      const double q = lambda / static_cast<double>(proc.batch);
      if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("lambda axis: rate not reachable with this batch size");
      }
      proc.batch_prob = q;
      return;
    }
    case ArrivalProcess::Kind::deterministic:
      throw std::invalid_argument("lambda axis: deterministic arrivals cannot be rescaled");
  }
}

inline void apply_overrides(Protocol& proto, const std::optional<double>& mult,
                            const std::optional<double>& beta) {
  if (mult) {
    if (auto* a1 = std::get_if<A1Params>(&proto)) {
      a1->mult = *mult;
    } else {
      throw std::invalid_argument("D axis: only the A1 class has a D parameter");
    }
  }
  if (beta) {
    if (auto* a1 = std::get_if<A1Params>(&proto)) {
      a1->beta = *beta;
    } else if (auto* a2 = std::get_if<A2Params>(&proto)) {
      a2->beta = *beta;
    } else {
      throw std::invalid_argument("beta axis: only A1/A2 have a beta parameter");
    }
  }
}

/// Runs tasks 0..count-1 on `jobs` threads. Exceptions propagate from the
/// first failing task after all workers join.
template <typename Fn>
inline void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Stream id for one (cell, replication) task. Fixed derivation keeps
/// sweeps byte-identical across parallelism degrees and run orders.
inline std::uint64_t sweep_stream_id(std::size_t cell, int replication) {
  return (static_cast<std::uint64_t>(cell) << 32) | static_cast<std::uint64_t>(replication);
}

/// Classifies every cell of the axes grid. Cells are independent; failed
/// cells carry their error and the sweep continues.
inline SweepResult sweep(const Protocol& proto_template, const ArrivalProcess& proc_template,
                         const RunConfig& cfg, const SweepAxes& axes, int jobs = 1) {
  if (axes.all_empty()) throw std::invalid_argument("sweep: empty grid");
  cfg.validate();

  const std::vector<double> lambdas =
      axes.lambda.empty() ? std::vector<double>{proc_template.mean_per_slot()} : axes.lambda;
  const std::vector<std::optional<double>> mults =
      axes.mult.empty() ? std::vector<std::optional<double>>{std::nullopt}
                        : [&] {
                            std::vector<std::optional<double>> v;
                            for (double d : axes.mult) v.emplace_back(d);
                            return v;
                          }();
  const std::vector<std::optional<double>> betas =
      axes.beta.empty() ? std::vector<std::optional<double>>{std::nullopt}
                        : [&] {
                            std::vector<std::optional<double>> v;
                            for (double b : axes.beta) v.emplace_back(b);
                            return v;
                          }();

  SweepResult result;
  result.axes = axes;
  for (double lam : lambdas) {
    for (const auto& d : mults) {
      for (const auto& b : betas) {
        SweepCell cell;
        cell.index = result.cells.size();
        cell.lambda = lam;
        cell.mult = d;
        cell.beta = b;
        result.cells.push_back(cell);
      }
    }
  }

  const int reps = cfg.replications;
  std::vector<std::vector<Trace>> traces(result.cells.size());
  std::vector<std::string> setup_errors(result.cells.size());

  struct Task {
    std::size_t cell;
    int rep;
    Protocol proto;
    ArrivalProcess proc;
  };
  std::vector<Task> tasks;
  for (auto& cell : result.cells) {
    Protocol proto = proto_template;
    ArrivalProcess proc = proc_template;
    try {
      detail::apply_overrides(proto, cell.mult, cell.beta);
      detail::apply_lambda(proc, cell.lambda);
      validate(proto);
    } catch (const std::exception& e) {
      setup_errors[cell.index] = e.what();
      continue;
    }
    traces[cell.index].resize(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) tasks.push_back({cell.index, r, proto, proc});
  }

  detail::parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const Task& task = tasks[i];
    traces[task.cell][static_cast<std::size_t>(task.rep)] =
        run(task.proto, task.proc, cfg, sweep_stream_id(task.cell, task.rep));
  });

  for (auto& cell : result.cells) {
    if (!setup_errors[cell.index].empty()) {
      cell.ok = false;
      cell.error = setup_errors[cell.index];
      continue;
    }
    try {
      cell.verdict = classify_stability(traces[cell.index], cell.lambda);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
  }
  return result;
}

enum class ConjectureFamily { a2, a3 };

/// Sweep over lambda for an A2/A3 protocol built from validated h (and
/// eps) selections. Refuses selections outside the admissible classes.
/// Verdicts are desk-scale evidence about the conjectured behavior, not
/// proof, and the result says so.
struct ExploreResult {
  ConjectureFamily family = ConjectureFamily::a2;
  HReport h_report;
  std::optional<EpsReport> eps_report;
  SweepResult sweep;
  std::string label = "conjecture evidence (desk-scale classification; not a proof)";
};

struct ExploreSpec {
  ConjectureFamily family = ConjectureFamily::a2;
  double step = 2.0;
  double beta = 0.9;  // A2 only
  double s_init = 1.0;
  HFunction h = HFunction::sqrt_shift();
  EpsFunction eps = EpsFunction::power(0.125);  // A3 only
  std::vector<double> lambdas;
};

inline ExploreResult explore_conjectures(const ExploreSpec& spec, const RunConfig& cfg,
                                         int jobs = 1) {
  if (spec.lambdas.empty()) throw std::invalid_argument("explore: empty lambda grid");

  ExploreResult out;
  out.family = spec.family;
  const auto grid = default_class_grid();
  out.h_report = validate_h(spec.h, grid);
  if (!out.h_report.pass()) {
    throw std::invalid_argument("explore: h outside the admissible class: " + out.h_report.detail);
  }

  Protocol proto;
  if (spec.family == ConjectureFamily::a2) {
    A2Params p;
    p.step = spec.step;
    p.beta = spec.beta;
    p.s_init = spec.s_init;
    p.h_up = spec.h;
    p.h_down = spec.h;
    proto = p;
  } else {
    out.eps_report = validate_eps(spec.h, spec.eps, grid);
    if (!out.eps_report->pass()) {
      throw std::invalid_argument("explore: eps outside the admissible class: " +
                                  out.eps_report->detail);
    }
    A3Params p;
    p.step = spec.step;
    p.s_init = spec.s_init;
    p.h_up = spec.h;
    p.h_down = spec.h;
    p.eps = spec.eps;
    proto = p;
  }

  SweepAxes axes;
  axes.lambda = spec.lambdas;
  out.sweep = sweep(proto, ArrivalProcess::poisson(spec.lambdas.front()), cfg, axes, jobs);
  return out;
}

}  // namespace dra
