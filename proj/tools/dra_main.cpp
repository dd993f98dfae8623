// dra — simulator and numerical analysis for doubly randomized slotted
// ALOHA under binary success/failure feedback.
//
// Exit codes: 0 success / all checks passed, 1 a check failed,
// 2 usage or configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dra/dra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = false) {
  auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--seed", opts.seed, "override run.seed");
  cmd->add_option("--jobs", opts.jobs, "worker threads for replications/cells")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_dir, "output directory (default from config)");
}

dra::ExperimentConfig load(const CommonOpts& opts) {
  dra::ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = dra::load_config_file(opts.config_path);
  if (opts.seed) cfg.run.seed = *opts.seed;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  return cfg;
}

fs::path ensure_out_dir(const dra::ExperimentConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << doc.dump(2) << "\n";
}

void write_trace_csv(const fs::path& path, const dra::Trace& trace) {
  dra::CsvWriter w({"n", "N", "S", "p", "B", "J"});
  for (const auto& r : trace.records) {
    w.row({dra::format_int(r.slot), dra::format_int(r.backlog), dra::format_double(r.estimator),
           dra::format_double(r.p), dra::format_int(r.transmitted),
           dra::format_int(r.success ? 1 : 0)});
  }
  w.write_file(path.string());
}

void write_trajectory_csv(const fs::path& path, const dra::FluidTrajectory& traj) {
  dra::CsvWriter w({"t", "x", "y"});
  for (const auto& p : traj.points) {
    w.row({dra::format_double(p.t), dra::format_double(p.x), dra::format_double(p.y)});
  }
  w.write_file(path.string());
}

void write_field_csv(const fs::path& path, const std::vector<dra::FieldSample>& field) {
  dra::CsvWriter w({"x", "y", "a", "b"});
  for (const auto& s : field) {
    w.row({dra::format_double(s.x), dra::format_double(s.y), dra::format_double(s.a),
           dra::format_double(s.b)});
  }
  w.write_file(path.string());
}

std::vector<std::string> sweep_csv_row(const dra::SweepCell& cell) {
  const auto& v = cell.verdict;
  return {dra::format_double(cell.lambda),
          cell.mult ? dra::format_double(*cell.mult) : "",
          cell.beta ? dra::format_double(*cell.beta) : "",
          cell.ok ? to_string(v.cls) : ("error:" + cell.error),
          dra::format_double(cell.ok ? v.slope : 0.0),
          dra::format_double(cell.ok ? v.ci_lo : 0.0),
          dra::format_double(cell.ok ? v.ci_hi : 0.0),
          dra::format_int(cell.ok ? v.recurrences : 0),
          dra::format_double(cell.ok ? v.mean_return : 0.0),
          dra::format_double(cell.ok ? v.throughput : 0.0)};
}

void write_sweep_csv(const fs::path& path, const dra::SweepResult& result) {
  dra::CsvWriter w({"lambda", "D", "beta", "verdict", "slope", "slope_ci_lo", "slope_ci_hi",
                    "recurrences", "mean_return", "throughput"});
  for (const auto& cell : result.cells) w.row(sweep_csv_row(cell));
  w.write_file(path.string());
}

int cmd_derive_params(const CommonOpts& common, double l0, double l1) {
  auto cfg = load(common);
  if (l0 > 0.0) cfg.analysis.lambda0 = l0;
  if (l1 > 0.0) cfg.analysis.lambda1 = l1;
  if (!(cfg.analysis.lambda0 > 0.0 && cfg.analysis.lambda0 < cfg.analysis.lambda1)) {
    std::cerr << "error: need 0 < lambda0 < lambda1 (got " << cfg.analysis.lambda0 << ", "
              << cfg.analysis.lambda1 << ")\n";
    return kExitUsage;
  }
  dra::DerivedParams derived;
  try {
    derived = dra::derive_params(cfg.analysis.lambda0, cfg.analysis.lambda1, cfg.analysis.derive);
  } catch (const dra::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitUsage;
  }
  const json doc = dra::make_report("derived_params", dra::to_json(derived));
  std::cout << doc.dump(2) << "\n";
  const auto dir = ensure_out_dir(cfg);
  write_json(dir / "derived_params.json", doc);
  return kExitOk;
}

int cmd_verify_lemma(const CommonOpts& common, double lambda, double beta, double c, double d) {
  auto cfg = load(common);
  dra::FluidParams params;
  if (const auto* a1 = std::get_if<dra::A1Params>(&cfg.protocol)) {
    params = dra::FluidParams{cfg.arrivals.mean_per_slot(), a1->beta, a1->step, a1->mult};
  } else {
    params = dra::FluidParams{cfg.arrivals.mean_per_slot(), 0.9, 2.2, 64.0};
  }
  if (lambda > 0.0) params.lambda = lambda;
  if (beta > 0.0) params.beta = beta;
  if (c > 0.0) params.step = c;
  if (d > 0.0) params.mult = d;
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto report = dra::verify_lemma(params, cfg.analysis.residual_tol);
  const json doc = dra::make_report("lemma_report", dra::to_json(report));
  std::cout << doc.dump(2) << "\n";
  const auto dir = ensure_out_dir(cfg);
  write_json(dir / "lemma_report.json", doc);
  if (!report.pass()) {
    std::cerr << "lemma checks failed: " << report.failure << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_fluid(const CommonOpts& common) {
  const auto cfg = load(common);
  const auto* a1 = std::get_if<dra::A1Params>(&cfg.protocol);
  if (!a1) {
    std::cerr << "error: fluid analysis needs an A1 protocol block\n";
    return kExitUsage;
  }
  const dra::FluidParams params{cfg.arrivals.mean_per_slot(), a1->beta, a1->step, a1->mult};
  const auto dir = ensure_out_dir(cfg);

  const auto dirs = dra::simplex_directions(cfg.fluid.directions);
  json traj_summaries = json::array();
  bool all_converged = true;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto traj =
        dra::integrate_fluid(dirs[i].first, std::max(dirs[i].second, cfg.fluid.options.y_floor),
                             params, cfg.fluid.options);
    char name[48];
    std::snprintf(name, sizeof(name), "trajectory_%03zu.csv", i);
    write_trajectory_csv(dir / name, traj);
    json t = dra::to_json(traj);
    t["x0"] = dirs[i].first;
    t["y0"] = dirs[i].second;
    t["file"] = name;
    traj_summaries.push_back(t);
    if (traj.status != dra::FluidStatus::converged) all_converged = false;
  }

  auto xs = cfg.fluid.field_x;
  auto ys = cfg.fluid.field_y;
  if (xs.empty()) xs = dra::linspace(0.0, 1.0, 21);
  if (ys.empty()) ys = dra::linspace(0.05, 1.0, 20);
  write_field_csv(dir / "drift_field.csv", dra::drift_field(params, xs, ys));

  const json doc = dra::make_report(
      "fluid", {{"params", dra::to_json(params)},
                {"trajectories", traj_summaries},
                {"all_converged", all_converged}});
  std::cout << doc.dump(2) << "\n";
  write_json(dir / "fluid_summary.json", doc);
  return all_converged ? kExitOk : kExitCheckFailed;
}

int cmd_drift_field(const CommonOpts& common) {
  const auto cfg = load(common);
  const auto* a1 = std::get_if<dra::A1Params>(&cfg.protocol);
  if (!a1) {
    std::cerr << "error: drift-field needs an A1 protocol block\n";
    return kExitUsage;
  }
  const dra::FluidParams params{cfg.arrivals.mean_per_slot(), a1->beta, a1->step, a1->mult};
  auto xs = cfg.fluid.field_x;
  auto ys = cfg.fluid.field_y;
  if (xs.empty()) xs = dra::linspace(0.0, 1.0, 21);
  if (ys.empty()) ys = dra::linspace(0.05, 1.0, 20);
  const auto dir = ensure_out_dir(cfg);
  write_field_csv(dir / "drift_field.csv", dra::drift_field(params, xs, ys));
  std::cout << "wrote " << (dir / "drift_field.csv").string() << "\n";
  return kExitOk;
}

int cmd_simulate(const CommonOpts& common) {
  const auto cfg = load(common);
  const auto dir = ensure_out_dir(cfg);

  std::vector<dra::Trace> traces(static_cast<std::size_t>(cfg.run.replications));
  dra::detail::parallel_for(traces.size(), common.jobs, [&](std::size_t i) {
    traces[i] = dra::run(cfg.protocol, cfg.arrivals, cfg.run, dra::sweep_stream_id(0, static_cast<int>(i)));
  });
  for (std::size_t i = 0; i < traces.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof(name), "trace_rep%03zu.csv", i);
    write_trace_csv(dir / name, traces[i]);
  }

  json doc;
  if (cfg.run.replications >= 3) {
    const auto verdict = dra::classify_stability(traces, cfg.arrivals.mean_per_slot());
    doc = dra::make_report("verdict", dra::to_json(verdict));
  } else {
    json summaries = json::array();
    for (const auto& t : traces) {
      summaries.push_back({{"successes", t.summary.successes},
                           {"arrivals", t.summary.arrivals},
                           {"final_backlog", t.summary.final_backlog},
                           {"diverged", t.summary.diverged}});
    }
    doc = dra::make_report("verdict", {{"class", "inconclusive"},
                                       {"note", "fewer than 3 replications"},
                                       {"replications", summaries}});
  }
  std::cout << doc.dump(2) << "\n";
  write_json(dir / "verdict.json", doc);
  return kExitOk;
}

int cmd_sweep(const CommonOpts& common) {
  const auto cfg = load(common);
  if (cfg.sweep_axes.all_empty()) {
    std::cerr << "error: sweep grid is empty (config /sweep)\n";
    return kExitUsage;
  }
  const auto result = dra::sweep(cfg.protocol, cfg.arrivals, cfg.run, cfg.sweep_axes, common.jobs);
  const auto dir = ensure_out_dir(cfg);
  write_sweep_csv(dir / "sweep.csv", result);
  const json doc = dra::make_report("sweep", dra::to_json(result));
  write_json(dir / "sweep.json", doc);
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_explore(const CommonOpts& common) {
  const auto cfg = load(common);
  if (cfg.explore.lambdas.empty()) {
    std::cerr << "error: explore lambda grid is empty (config /explore/lambda)\n";
    return kExitUsage;
  }
  dra::ExploreResult result;
  try {
    result = dra::explore_conjectures(cfg.explore, cfg.run, common.jobs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto dir = ensure_out_dir(cfg);
  write_sweep_csv(dir / "explore.csv", result.sweep);
  const json doc = dra::make_report("explore", dra::to_json(result));
  write_json(dir / "explore.json", doc);
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doubly randomized slotted ALOHA: simulation and fluid analysis"};
  app.require_subcommand(1);

  CommonOpts derive_opts;
  double l0 = 0.0;
  double l1 = 0.0;
  auto* derive = app.add_subcommand("derive-params", "derive (C, beta, D) for a rate band");
  add_common(derive, derive_opts);
  derive->add_option("--l0", l0, "band lower rate lambda0");
  derive->add_option("--l1", l1, "band upper rate lambda1");

  CommonOpts lemma_opts;
  double v_lambda = 0.0;
  double v_beta = 0.0;
  double v_c = 0.0;
  double v_d = 0.0;
  auto* lemma = app.add_subcommand("verify-lemma", "check the root structure of the drift field");
  add_common(lemma, lemma_opts);
  lemma->add_option("--lambda", v_lambda, "input rate");
  lemma->add_option("--beta", v_beta, "probability scale");
  lemma->add_option("--C", v_c, "failure step");
  lemma->add_option("--D", v_d, "success multiplier");

  CommonOpts fluid_opts;
  auto* fluid = app.add_subcommand("fluid", "integrate fluid trajectories and export the field");
  add_common(fluid, fluid_opts, true);

  CommonOpts field_opts;
  auto* field = app.add_subcommand("drift-field", "export the drift vector field as CSV");
  add_common(field, field_opts, true);

  CommonOpts sim_opts;
  auto* sim = app.add_subcommand("simulate", "run replicated chains and classify stability");
  add_common(sim, sim_opts, true);

  CommonOpts sweep_opts;
  auto* sw = app.add_subcommand("sweep", "classify stability over a parameter grid");
  add_common(sw, sweep_opts, true);

  CommonOpts explore_opts;
  auto* explore = app.add_subcommand("explore", "probe the A2/A3 conjectures (evidence only)");
  add_common(explore, explore_opts, true);

  auto* defaults = app.add_subcommand("print-default-config", "emit the default config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (derive->parsed()) return cmd_derive_params(derive_opts, l0, l1);
    if (lemma->parsed()) return cmd_verify_lemma(lemma_opts, v_lambda, v_beta, v_c, v_d);
    if (fluid->parsed()) return cmd_fluid(fluid_opts);
    if (field->parsed()) return cmd_drift_field(field_opts);
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (sw->parsed()) return cmd_sweep(sweep_opts);
    if (explore->parsed()) return cmd_explore(explore_opts);
    if (defaults->parsed()) {
      std::cout << dra::default_config_json().dump(2) << "\n";
      return kExitOk;
    }
  } catch (const dra::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
