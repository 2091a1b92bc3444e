#include "commands.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <optional>

#include "gbm_cutoff/commutative.hpp"
#include "gbm_cutoff/error.hpp"
#include "gbm_cutoff/hypotheses.hpp"
#include "gbm_cutoff/mixing.hpp"
#include "report.hpp"

namespace gbm::cli {

namespace {

// Closed-form mean square and cutoff schedule for the configured mode.
struct Model {
  std::function<double(double)> msq;
  std::function<CutoffSchedule(double)> schedule;
  Json summary;
};

Model build_model(const RunConfig& cfg) {
  Model m;
  if (cfg.mode == Mode::commutative) {
    auto cm = std::make_shared<CommutativeModel>(*cfg.system);
    const GBMSystem sys = *cfg.system;
    const double w = cfg.w;
    m.msq = [cm](double t) { return cm->mean_square(t); };
    m.schedule = [sys, w](double eps) { return cutoff_time_commutative(sys, eps, w); };
    m.summary = {{"Q", to_json(cm->Q())}, {"asymptotics", to_json(cm->asymptotics())}};
    return m;
  }
  auto dec = std::make_shared<ModeDecomposition>(
      cfg.synthetic ? decompose_modes(gamma_matrices(*cfg.synthetic, cfg.p_Gamma), cfg.x())
                    : decompose_modes(gamma_matrices(*cfg.system, cfg.p_Gamma), cfg.x()));
  const Vec x = cfg.x();
  m.msq = [dec, x](double t) { return mean_square_first_order(*dec, x, t); };
  m.schedule = [dec, x](double eps) { return cutoff_schedule_first_order(*dec, x, eps); };
  m.summary = {{"modes", to_json(*dec)},
               {"step3_ledger", step3_residuals(dec->matrices, dec->matrices.tol).residuals}};
  return m;
}

const GBMSystem& require_sde(const RunConfig& cfg, const std::string& command) {
  if (!cfg.system) fail("no_sde", command + " needs A and B; synthetic input has no SDE");
  return *cfg.system;
}

void require_eps(const RunConfig& cfg) {
  if (cfg.eps_list.empty()) fail("missing_eps_list", "this command needs eps_list");
}

void require_t_grid(const RunConfig& cfg) {
  if (cfg.t_grid.empty()) fail("missing_t_grid", "this command needs t_grid");
}

std::string render(const Table& t, Format f) {
  return f == Format::csv ? to_csv(t) : to_json(t).dump(2) + "\n";
}

MCOptions mc_options(const RunConfig& cfg) {
  MCOptions o;
  o.n_paths = cfg.mc.n_paths;
  o.dt = cfg.mc.dt;
  o.seed = cfg.mc.seed;
  return o;
}

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

CommandResult cmd_hypotheses(const RunConfig& cfg) {
  const HypothesisReport r = check_hypotheses(require_sde(cfg, "hypotheses"));
  return {to_json(r).dump(2) + "\n"};
}

CommandResult cmd_analyze(const RunConfig& cfg) {
  require_eps(cfg);
  Json out = {{"mode", std::string(to_string(cfg.mode))}};
  if (cfg.system) out["hypotheses"] = to_json(check_hypotheses(*cfg.system));
  const Model m = build_model(cfg);
  out.update(m.summary);
  Json schedules = Json::array();
  for (double eps : cfg.eps_list) schedules.push_back(to_json(m.schedule(eps)));
  out["schedules"] = schedules;
  return {out.dump(2) + "\n"};
}

CommandResult cmd_mean_square(const RunConfig& cfg) {
  require_t_grid(cfg);
  // Systems outside the analytic regimes still get the Monte Carlo column.
  std::optional<Model> m;
  try {
    m = build_model(cfg);
  } catch (const Error&) {
    if (!cfg.system) throw;
  }
  Table t{{"t", "closed_form", "mc_value", "mc_se"}, {}};
  for (double time : cfg.t_grid) {
    Cell value, se;
    if (cfg.system) {
      const MCEstimate e = estimate_mean_square(*cfg.system, time, cfg.mc.scheme, mc_options(cfg));
      value = e.value;
      se = e.std_error;
    }
    Cell closed;
    if (m) closed = m->msq(time);
    t.add({time, closed, value, se});
  }
  return {render(t, cfg.format)};
}

CommandResult cmd_mixing(const RunConfig& cfg) {
  require_eps(cfg);
  const Model m = build_model(cfg);
  Table t{{"eps", "delta", "tau", "tau_over_t_eps", "tau_ratio"}, {}};
  for (double eps : cfg.eps_list) {
    const CutoffSchedule s = m.schedule(eps);
    const MixingTimeResult r = mixing_time(m.msq, eps, cfg.delta, s.t_eps);
    t.add({eps, cfg.delta, r.tau, optional_cell(r.tau_over_t_ref), optional_cell(r.tau_ratio)});
  }
  return {render(t, cfg.format)};
}

CommandResult cmd_profile(const RunConfig& cfg) {
  require_eps(cfg);
  if (cfg.rho_grid.empty()) fail("missing_rho_grid", "profile needs rho_grid");
  const Model m = build_model(cfg);
  Table t{{"rho", "eps", "t", "normalized"}, {}};
  for (double eps : cfg.eps_list) {
    const CutoffSchedule s = m.schedule(eps);
    if (!s.t_eps || !s.w_eps) fail("no_decay", "no cutoff schedule at eps " + format_double(eps));
    for (double rho : cfg.rho_grid) {
      const double time = *s.t_eps + rho * *s.w_eps;
      if (time < 0.0) fail("negative_time", "t_eps + rho w_eps < 0 at rho " + format_double(rho));
      t.add({rho, eps, time, m.msq(time) / (eps * eps)});
    }
  }
  return {render(t, cfg.format)};
}

CommandResult cmd_verify(const RunConfig& cfg) {
  const GBMSystem& sys = require_sde(cfg, "verify");
  require_t_grid(cfg);
  const Model m = build_model(cfg);
  Table t{{"t", "closed_form", "mc_value", "mc_se", "z_score", "pass"}, {}};
  bool all_pass = true;
  for (double time : cfg.t_grid) {
    const double cf = m.msq(time);
    const MCEstimate e = estimate_mean_square(sys, time, cfg.mc.scheme, mc_options(cfg));
    const double diff = std::abs(e.value - cf);
    Cell z;
    bool pass;
    if (e.std_error > 0.0) {
      z = diff / e.std_error;
      pass = diff <= 3.0 * e.std_error;
    } else {
      pass = diff <= 1e-12 * (1.0 + std::abs(cf));
    }
    all_pass = all_pass && pass;
    t.add({time, cf, e.value, e.std_error, z, pass});
  }
  return {render(t, cfg.format), !all_pass};
}

CommandResult cmd_example35(const RunConfig& cfg) {
  std::vector<double> grid = cfg.t_grid;
  if (grid.empty()) {
    for (int i = 0; i < 100; ++i) grid.push_back(0.2 + 1.8 * i / 99.0);
  }
  Table t{{"t", "x", "g_of_x", "f_of_x", "g_residual", "f_residual"}, {}};
  for (double time : grid) {
    const Example35Point p = example35_check(time);
    const double f_expected = -(3.0 * time * time + 2.0 * time) * p.x;
    t.add({time, p.x, p.g_of_x, p.f_of_x, std::abs(p.g_of_x - time),
           std::abs(p.f_of_x - f_expected)});
  }
  return {render(t, cfg.format)};
}

using Handler = CommandResult (*)(const RunConfig&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"hypotheses", cmd_hypotheses}, {"analyze", cmd_analyze}, {"mean-square", cmd_mean_square},
      {"mixing", cmd_mixing},         {"profile", cmd_profile}, {"verify", cmd_verify},
      {"example35", cmd_example35}};
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, h] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg) {
  for (const auto& [name, h] : handlers()) {
    if (name == command) return h(cfg);
  }
  fail("unknown_command", "unknown command '" + command + "'");
}

}  // namespace gbm::cli
