#pragma once

#include <json.hpp>

#include "dra/analysis.hpp"
#include "dra/classify.hpp"
#include "dra/hfunctions.hpp"
#include "dra/ode.hpp"
#include "dra/sweep.hpp"

namespace dra {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json to_json(const FluidParams& p) {
  return {{"lambda", p.lambda}, {"beta", p.beta}, {"C", p.step}, {"D", p.mult}};
}

inline nlohmann::json to_json(const DerivedParams& d) {
  return {{"lambda0", d.lambda0},
          {"lambda1", d.lambda1},
          {"margin", d.margin},
          {"C1", d.c1},
          {"C", d.step},
          {"beta1", d.beta1},
          {"beta", d.beta},
          {"D0", d.d0},
          {"D1", d.d1},
          {"D", d.mult},
          {"inf_beta_z2", d.inf_beta_z2},
          {"inf_gap", d.inf_gap},
          {"t1_at_D", d.t1_at_mult},
          {"t1_target", d.t1_target}};
}

inline nlohmann::json to_json(const ARoots& a) {
  return {{"z1", a.z1},         {"z2", a.z2},
          {"residual_z1", a.res1}, {"residual_z2", a.res2},
          {"degenerate", a.degenerate}, {"j_band_min", a.band_min}};
}

inline nlohmann::json to_json(const BRoots& b) {
  return {{"t1", b.t1},           {"t2", b.t2},          {"residual_t1", b.res1},
          {"residual_t2", b.res2}, {"b1_min", b.b1_min},  {"b1_argmin", b.b1_argmin},
          {"crossings", b.crossings}};
}

inline nlohmann::json to_json(const RSignReport& r) {
  return {{"roots", r.roots},
          {"residuals", r.residuals},
          {"positive_left_of_z1", r.positive_left_of_z1},
          {"negative_right_of_t2", r.negative_right_of_t2},
          {"roots_inside", r.roots_inside}};
}

inline nlohmann::json to_json(const LemmaReport& rep) {
  nlohmann::json j = {{"params", to_json(rep.params)},
                      {"a_two_roots", rep.a_two_roots},
                      {"b_two_roots", rep.b_two_roots},
                      {"ordering", rep.ordering},
                      {"r_sign_ok", rep.r_sign_ok},
                      {"pass", rep.pass()},
                      {"failure", rep.failure}};
  if (rep.a) j["a_roots"] = to_json(*rep.a);
  if (rep.b) j["b_roots"] = to_json(*rep.b);
  if (rep.r) j["r_roots"] = to_json(*rep.r);
  return j;
}

inline nlohmann::json to_json(const StabilityVerdict& v) {
  return {{"class", to_string(v.cls)},
          {"slope", v.slope},
          {"slope_ci_lo", v.ci_lo},
          {"slope_ci_hi", v.ci_hi},
          {"slope_min_used", v.slope_min_used},
          {"recurrences", v.recurrences},
          {"recurrence_per_1e5", v.recurrence_per_1e5},
          {"mean_return", v.mean_return},
          {"throughput", v.throughput},
          {"replications", v.replications}};
}

inline nlohmann::json to_json(const SweepCell& c) {
  nlohmann::json j = {{"index", c.index}, {"lambda", c.lambda}, {"ok", c.ok}};
  if (c.mult) j["D"] = *c.mult;
  if (c.beta) j["beta"] = *c.beta;
  if (c.ok) {
    j["verdict"] = to_json(c.verdict);
  } else {
    j["error"] = c.error;
  }
  return j;
}

inline nlohmann::json to_json(const SweepResult& s) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : s.cells) cells.push_back(to_json(c));
  return {{"axes",
           {{"lambda", s.axes.lambda}, {"D", s.axes.mult}, {"beta", s.axes.beta}}},
          {"cells", cells}};
}

inline nlohmann::json to_json(const HReport& r) {
  return {{"zero_at_one", r.zero_at_one},
          {"nondecreasing", r.nondecreasing},
          {"gap_nondecreasing", r.gap_nondecreasing},
          {"ratio_vanishes", r.ratio_vanishes},
          {"unbounded", r.unbounded},
          {"ratio_at_tail", r.ratio_at_tail},
          {"value_at_tail", r.value_at_tail},
          {"pass", r.pass()},
          {"detail", r.detail}};
}

inline nlohmann::json to_json(const EpsReport& r) {
  return {{"in_range", r.in_range},
          {"vanishes", r.vanishes},
          {"product_diverges", r.product_diverges},
          {"eps_at_tail", r.eps_at_tail},
          {"product_at_tail", r.product_at_tail},
          {"pass", r.pass()},
          {"detail", r.detail}};
}

inline nlohmann::json to_json(const ExploreResult& e) {
  nlohmann::json j = {{"family", e.family == ConjectureFamily::a2 ? "A2" : "A3"},
                      {"label", e.label},
                      {"h_report", to_json(e.h_report)},
                      {"sweep", to_json(e.sweep)}};
  if (e.eps_report) j["eps_report"] = to_json(*e.eps_report);
  return j;
}

inline nlohmann::json to_json(const FluidTrajectory& t) {
  return {{"status", to_string(t.status)},
          {"t_end", t.t_end},
          {"x_end", t.x_end},
          {"y_end", t.y_end},
          {"first_dip_t", t.first_dip_t},
          {"points", t.points.size()}};
}

/// Wraps a payload as a versioned report document.
inline nlohmann::json make_report(const std::string& kind, nlohmann::json payload) {
  payload["schema_version"] = kSchemaVersion;
  payload["report"] = kind;
  return payload;
}

}  // namespace dra
