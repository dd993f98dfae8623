#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dra/analysis.hpp"
#include "dra/arrivals.hpp"
#include "dra/ode.hpp"
#include "dra/protocol.hpp"
#include "dra/sweep.hpp"
#include "dra/trace.hpp"

namespace dra {

/// Config problems carry the JSON pointer of the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace cfgdetail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config " + where + ": " + what);
}

inline const json* find(const json& j, const std::string& key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline double get_num(const json& j, const std::string& where, const std::string& key,
                      double fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(where + "/" + key, "expected a number");
  return v->get<double>();
}

inline std::int64_t get_int(const json& j, const std::string& where, const std::string& key,
                            std::int64_t fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(where + "/" + key, "expected an integer");
  return v->get<std::int64_t>();
}

inline std::string get_str(const json& j, const std::string& where, const std::string& key,
                           const std::string& fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(where + "/" + key, "expected a string");
  return v->get<std::string>();
}

inline std::vector<double> get_num_array(const json& j, const std::string& where,
                                         const std::string& key) {
  const json* v = find(j, key);
  if (!v) return {};
  if (!v->is_array()) fail(where + "/" + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) fail(where + "/" + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline HFunction parse_h(const json& j, const std::string& where) {
  const std::string kind = get_str(j, where, "kind", "sqrt");
  try {
    if (kind == "table") {
      const json* pts = find(j, "points");
      if (!pts || !pts->is_array()) fail(where + "/points", "expected [[x,h],...]");
      std::vector<std::array<double, 2>> rows;
      for (const auto& e : *pts) {
        if (!e.is_array() || e.size() != 2) fail(where + "/points", "expected [[x,h],...]");
        rows.push_back({e[0].get<double>(), e[1].get<double>()});
      }
      return HFunction::tabulated(std::move(rows));
    }
    double param = 0.0;
    if (kind == "pow") param = get_num(j, where, "alpha", 0.5);
    if (kind == "linear") param = get_num(j, where, "slope", 1.0);
    if (kind == "const") param = get_num(j, where, "value", 1.0);
    return HFunction::from_key(kind, param);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

inline EpsFunction parse_eps(const json& j, const std::string& where) {
  const std::string kind = get_str(j, where, "kind", "pow");
  try {
    double param = kind == "pow" ? get_num(j, where, "gamma", 0.125)
                                 : get_num(j, where, "value", 0.25);
    return EpsFunction::from_key(kind, param);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

}  // namespace cfgdetail

struct AnalysisConfig {
  double lambda0 = 0.25;
  double lambda1 = 0.35;
  DeriveOptions derive{};
  double residual_tol = 1e-10;
};

struct FluidConfig {
  FluidOptions options{};
  int directions = 20;
  std::vector<double> field_x;  // drift-field grid; defaults filled at load
  std::vector<double> field_y;
};

struct ExperimentConfig {
  Protocol protocol = A1Params{2.2, 64.0, 0.9, 1.0};
  ArrivalProcess arrivals = ArrivalProcess::poisson(0.3);
  RunConfig run{};
  AnalysisConfig analysis{};
  FluidConfig fluid{};
  SweepAxes sweep_axes{};
  ExploreSpec explore{};
  std::string out_dir = "out";
};

inline nlohmann::json default_config_json() {
  return nlohmann::json{
      {"schema_version", 1},
      {"protocol",
       {{"class", "A1"},
        {"C", 2.2},
        {"D", 64.0},
        {"beta", 0.9},
        {"S_init", 1.0},
        {"h", {{"kind", "sqrt"}}},
        {"eps", {{"kind", "pow"}, {"gamma", 0.125}}}}},
      {"arrivals", {{"kind", "poisson"}, {"lambda", 0.3}}},
      {"run",
       {{"horizon", 200000},
        {"replications", 5},
        {"seed", 1},
        {"N0", 0},
        {"S0", 1.0},
        {"stride", 0},
        {"warmup_fraction", 0.25},
        {"K_backlog", 100},
        {"K_estimator", 0.0},
        {"backlog_guard", 1000000000}}},
      {"analysis",
       {{"lambda0", 0.25},
        {"lambda1", 0.35},
        {"lambda_grid_points", 200},
        {"margin_divisor", 4.0},
        {"residual_tol", 1e-10}}},
      {"fluid",
       {{"dt", 1e-3},
        {"horizon", 100.0},
        {"eps_stop", 0.1},
        {"y_floor", 1e-6},
        {"guard_factor", 10.0},
        {"record_stride", 100},
        {"directions", 20},
        {"field_x", nlohmann::json::array()},
        {"field_y", nlohmann::json::array()}}},
      {"sweep", {{"lambda", {0.25, 0.3, 0.35}}, {"D", nlohmann::json::array()}, {"beta", nlohmann::json::array()}}},
      {"explore",
       {{"family", "A3"},
        {"C", 2.2},
        {"beta", 0.9},
        {"S_init", 1.0},
        {"h", {{"kind", "sqrt"}}},
        {"eps", {{"kind", "pow"}, {"gamma", 0.125}}},
        {"lambda", {0.3, 0.35}}}},
      {"output", {{"dir", "out"}}}};
}

/// Default compact-set estimator bound: ten times the protocol's success
/// move so the set is insensitive to the estimator's jump scale.
inline double default_estimator_bound(const Protocol& proto) {
  if (const auto* a1 = std::get_if<A1Params>(&proto)) {
    return std::max(1000.0, 10.0 * a1->step * a1->mult);
  }
  return 1000.0;
}

inline ExperimentConfig config_from_json(const nlohmann::json& root) {
  using cfgdetail::fail;
  using cfgdetail::find;
  using cfgdetail::get_int;
  using cfgdetail::get_num;
  using cfgdetail::get_num_array;
  using cfgdetail::get_str;

  if (!root.is_object()) throw ConfigError("config /: expected a JSON object");
  ExperimentConfig cfg;

  if (const auto* p = find(root, "protocol")) {
    const std::string where = "/protocol";
    const std::string cls = get_str(*p, where, "class", "A1");
    if (cls == "A1") {
      A1Params a;
      a.step = get_num(*p, where, "C", a.step);
      a.mult = get_num(*p, where, "D", a.mult);
      a.beta = get_num(*p, where, "beta", a.beta);
      a.s_init = get_num(*p, where, "S_init", a.s_init);
      cfg.protocol = a;
    } else if (cls == "A2") {
      A2Params a;
      a.step = get_num(*p, where, "C", a.step);
      a.beta = get_num(*p, where, "beta", a.beta);
      a.s_init = get_num(*p, where, "S_init", a.s_init);
      if (const auto* h = find(*p, "h")) a.h_up = a.h_down = cfgdetail::parse_h(*h, where + "/h");
      if (const auto* h = find(*p, "h_down")) a.h_down = cfgdetail::parse_h(*h, where + "/h_down");
      cfg.protocol = a;
    } else if (cls == "A3") {
      A3Params a;
      a.step = get_num(*p, where, "C", a.step);
      a.s_init = get_num(*p, where, "S_init", a.s_init);
      if (const auto* h = find(*p, "h")) a.h_up = a.h_down = cfgdetail::parse_h(*h, where + "/h");
      if (const auto* h = find(*p, "h_down")) a.h_down = cfgdetail::parse_h(*h, where + "/h_down");
      if (const auto* e = find(*p, "eps")) a.eps = cfgdetail::parse_eps(*e, where + "/eps");
      cfg.protocol = a;
    } else if (cls == "ternary_mult") {
      TernaryMultParams t;
      t.up = get_num(*p, where, "up", t.up);
      t.down = get_num(*p, where, "down", t.down);
      t.p_min = get_num(*p, where, "p_min", t.p_min);
      t.p_max = get_num(*p, where, "p_max", t.p_max);
      t.p_init = get_num(*p, where, "p_init", t.p_init);
      cfg.protocol = t;
    } else if (cls == "ternary_add") {
      TernaryAddParams t;
      t.up_step = get_num(*p, where, "up_step", t.up_step);
      t.down_step = get_num(*p, where, "down_step", t.down_step);
      t.p_min = get_num(*p, where, "p_min", t.p_min);
      t.p_max = get_num(*p, where, "p_max", t.p_max);
      t.p_init = get_num(*p, where, "p_init", t.p_init);
      cfg.protocol = t;
    } else {
      fail(where + "/class", "unknown protocol class '" + cls + "'");
    }
    try {
      validate(cfg.protocol);
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }

  if (const auto* a = find(root, "arrivals")) {
    const std::string where = "/arrivals";
    const std::string kind = get_str(*a, where, "kind", "poisson");
    try {
      if (kind == "poisson") {
        cfg.arrivals = ArrivalProcess::poisson(get_num(*a, where, "lambda", 0.3));
      } else if (kind == "bernoulli_batch") {
        cfg.arrivals = ArrivalProcess::bernoulli_batch(get_int(*a, where, "batch", 1),
                                                       get_num(*a, where, "prob", 0.3));
      } else if (kind == "deterministic") {
        cfg.arrivals = ArrivalProcess::deterministic(get_int(*a, where, "count", 0));
      } else {
        fail(where + "/kind", "unknown arrival kind '" + kind + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }

  if (const auto* r = find(root, "run")) {
    const std::string where = "/run";
    cfg.run.horizon = get_int(*r, where, "horizon", cfg.run.horizon);
    cfg.run.replications = static_cast<int>(get_int(*r, where, "replications", cfg.run.replications));
    cfg.run.seed = static_cast<std::uint64_t>(get_int(*r, where, "seed", static_cast<std::int64_t>(cfg.run.seed)));
    cfg.run.n0 = get_int(*r, where, "N0", cfg.run.n0);
    cfg.run.s0 = get_num(*r, where, "S0", cfg.run.s0);
    cfg.run.stride = get_int(*r, where, "stride", cfg.run.stride);
    cfg.run.warmup_fraction = get_num(*r, where, "warmup_fraction", cfg.run.warmup_fraction);
    cfg.run.k.backlog_max = get_int(*r, where, "K_backlog", cfg.run.k.backlog_max);
    cfg.run.k.estimator_max = get_num(*r, where, "K_estimator", 0.0);
    cfg.run.backlog_guard = get_int(*r, where, "backlog_guard", cfg.run.backlog_guard);
    try {
      if (cfg.run.k.estimator_max <= 0.0) {
        cfg.run.k.estimator_max = default_estimator_bound(cfg.protocol);
      }
      cfg.run.validate();
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  } else {
    cfg.run.k.estimator_max = default_estimator_bound(cfg.protocol);
  }

  if (const auto* a = find(root, "analysis")) {
    const std::string where = "/analysis";
    cfg.analysis.lambda0 = get_num(*a, where, "lambda0", cfg.analysis.lambda0);
    cfg.analysis.lambda1 = get_num(*a, where, "lambda1", cfg.analysis.lambda1);
    cfg.analysis.derive.lambda_grid_points =
        static_cast<int>(get_int(*a, where, "lambda_grid_points", cfg.analysis.derive.lambda_grid_points));
    cfg.analysis.derive.margin_divisor =
        get_num(*a, where, "margin_divisor", cfg.analysis.derive.margin_divisor);
    cfg.analysis.derive.user_step = get_num(*a, where, "C", 0.0);
    cfg.analysis.residual_tol = get_num(*a, where, "residual_tol", cfg.analysis.residual_tol);
    cfg.analysis.derive.residual_tol = cfg.analysis.residual_tol;
    if (!(cfg.analysis.lambda0 > 0.0 && cfg.analysis.lambda0 < cfg.analysis.lambda1)) {
      fail(where + "/lambda0", "need 0 < lambda0 < lambda1");
    }
    if (!(cfg.analysis.lambda1 < kCapacity)) {
      fail(where + "/lambda1", "need lambda1 < capacity e^-1 = 0.36787944...");
    }
  }

  if (const auto* f = find(root, "fluid")) {
    const std::string where = "/fluid";
    cfg.fluid.options.dt = get_num(*f, where, "dt", cfg.fluid.options.dt);
    cfg.fluid.options.horizon = get_num(*f, where, "horizon", cfg.fluid.options.horizon);
    cfg.fluid.options.eps_stop = get_num(*f, where, "eps_stop", cfg.fluid.options.eps_stop);
    cfg.fluid.options.y_floor = get_num(*f, where, "y_floor", cfg.fluid.options.y_floor);
    cfg.fluid.options.guard_factor = get_num(*f, where, "guard_factor", cfg.fluid.options.guard_factor);
    cfg.fluid.options.record_stride =
        static_cast<int>(get_int(*f, where, "record_stride", cfg.fluid.options.record_stride));
    cfg.fluid.directions = static_cast<int>(get_int(*f, where, "directions", cfg.fluid.directions));
    cfg.fluid.field_x = get_num_array(*f, where, "field_x");
    cfg.fluid.field_y = get_num_array(*f, where, "field_y");
    try {
      cfg.fluid.options.validate();
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
    if (cfg.fluid.directions < 1) fail(where + "/directions", "need at least one direction");
  }

  if (const auto* s = find(root, "sweep")) {
    const std::string where = "/sweep";
    cfg.sweep_axes.lambda = get_num_array(*s, where, "lambda");
    cfg.sweep_axes.mult = get_num_array(*s, where, "D");
    cfg.sweep_axes.beta = get_num_array(*s, where, "beta");
  }

  if (const auto* e = find(root, "explore")) {
    const std::string where = "/explore";
    const std::string family = get_str(*e, where, "family", "A3");
    if (family == "A2") {
      cfg.explore.family = ConjectureFamily::a2;
    } else if (family == "A3") {
      cfg.explore.family = ConjectureFamily::a3;
    } else {
      fail(where + "/family", "expected A2 or A3");
    }
    cfg.explore.step = get_num(*e, where, "C", cfg.explore.step);
    cfg.explore.beta = get_num(*e, where, "beta", cfg.explore.beta);
    cfg.explore.s_init = get_num(*e, where, "S_init", cfg.explore.s_init);
    if (const auto* h = find(*e, "h")) cfg.explore.h = cfgdetail::parse_h(*h, where + "/h");
    if (const auto* ep = find(*e, "eps")) cfg.explore.eps = cfgdetail::parse_eps(*ep, where + "/eps");
    cfg.explore.lambdas = get_num_array(*e, where, "lambda");
  }

  if (const auto* o = find(root, "output")) {
    cfg.out_dir = get_str(*o, "/output", "dir", cfg.out_dir);
  }

  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(root);
}

}  // namespace dra
