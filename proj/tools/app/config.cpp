#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gbm_cutoff/error.hpp"

namespace gbm::cli {

namespace {

const std::set<std::string> kKnownKeys = {"mode",     "A",     "B",      "alpha",   "beta",
                                          "Gamma",    "x",     "eps_list", "delta", "rho_grid",
                                          "w",        "t_grid", "p_Gamma", "mc",    "tol",
                                          "output"};

double number(const Json& j, const std::string& field, const std::string& code) {
  if (!j.is_number()) fail(code, field + " must be a number");
  return j.get<double>();
}

std::vector<double> number_list(const Json& j, const std::string& field, const std::string& code) {
  if (!j.is_array()) fail(code, field + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, field, code));
  return out;
}

MatrixD required_matrix(const Json& j, const std::string& field) {
  if (!j.contains(field)) fail("missing_matrix", "config needs matrix " + field);
  return matrix_from_json(j.at(field), field);
}

Mode parse_mode(const Json& j) {
  if (!j.contains("mode")) fail("missing_mode", "config needs a mode");
  if (!j.at("mode").is_string()) fail("bad_mode", "mode must be a string");
  const auto s = j.at("mode").get<std::string>();
  if (s == "commutative") return Mode::commutative;
  if (s == "first_order") return Mode::first_order;
  if (s == "synthetic") return Mode::synthetic;
  fail("bad_mode", "unknown mode '" + s + "'");
}

void check_dims(const std::vector<const MatrixD*>& ms, const Vec& x) {
  for (const MatrixD* m : ms) {
    if (m->dim() != ms.front()->dim()) {
      fail("matrix_dim_mismatch", "all matrices must share one dimension");
    }
  }
  if (x.size() != ms.front()->dim()) fail("x_dim_mismatch", "x does not match the matrix dimension");
  if (x.norm() == 0.0) fail("zero_vector", "x must be nonzero");
}

McConfig parse_mc(const Json& j) {
  McConfig mc;
  if (!j.is_object()) fail("bad_mc", "mc must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "n_paths") {
      if (!value.is_number_integer()) fail("bad_mc_paths", "mc.n_paths must be an integer");
      mc.n_paths = value.get<long>();
    } else if (key == "dt") {
      mc.dt = number(value, "mc.dt", "bad_mc_dt");
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) fail("bad_mc_seed", "mc.seed must be a non-negative integer");
      mc.seed = value.get<std::uint64_t>();
    } else if (key == "scheme") {
      if (!value.is_string()) fail("bad_scheme", "mc.scheme must be a string");
      mc.scheme = parse_scheme(value.get<std::string>());
    } else {
      fail("unknown_field", "unknown field mc." + key);
    }
  }
  return mc;
}

void parse_output(const Json& j, RunConfig& cfg) {
  if (!j.is_object()) fail("bad_output", "output must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "path") {
      if (!value.is_string() || value.get<std::string>().empty()) {
        fail("bad_output", "output.path must be a non-empty string");
      }
      cfg.output = value.get<std::string>();
    } else if (key == "format") {
      const std::string f = value.is_string() ? value.get<std::string>() : "";
      if (f == "csv") {
        cfg.format = Format::csv;
      } else if (f == "json") {
        cfg.format = Format::json;
      } else {
        fail("bad_output_format", "output.format must be csv or json");
      }
    } else {
      fail("unknown_field", "unknown field output." + key);
    }
  }
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::commutative: return "commutative";
    case Mode::first_order: return "first_order";
    case Mode::synthetic: return "synthetic";
  }
  return "unknown";
}

const Vec& RunConfig::x() const { return system ? system->x : synthetic->x; }

RunConfig parse_config(const Json& j) {
  if (!j.is_object()) fail("config_not_object", "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) fail("unknown_field", "unknown field " + key);
  }
  RunConfig cfg;
  cfg.mode = parse_mode(j);
  if (j.contains("tol")) {
    cfg.tol = number(j.at("tol"), "tol", "invalid_tolerance");
    if (!(cfg.tol > 0.0)) fail("invalid_tolerance", "tol must be positive");
  }

  if (!j.contains("x")) fail("missing_x", "config needs x");
  Vec x = vector_from_json(j.at("x"), "x");
  if (cfg.mode == Mode::synthetic) {
    if (j.contains("B")) fail("unknown_field", "B is not used in synthetic mode");
    MatrixD alpha = required_matrix(j, "alpha");
    MatrixD beta = required_matrix(j, "beta");
    MatrixD gamma = required_matrix(j, "Gamma");
    MatrixD a = required_matrix(j, "A");
    check_dims({&alpha, &beta, &gamma, &a}, x);
    cfg.synthetic.emplace(std::move(alpha), std::move(beta), std::move(gamma), std::move(a),
                          std::move(x), cfg.tol);
  } else {
    for (const char* k : {"alpha", "beta", "Gamma"}) {
      if (j.contains(k)) fail("unknown_field", std::string(k) + " is only used in synthetic mode");
    }
    MatrixD a = required_matrix(j, "A");
    MatrixD b = required_matrix(j, "B");
    check_dims({&a, &b}, x);
    cfg.system.emplace(std::move(a), std::move(b), std::move(x), cfg.tol);
  }

  if (j.contains("eps_list")) cfg.eps_list = number_list(j.at("eps_list"), "eps_list", "bad_eps_list");
  if (j.contains("delta")) cfg.delta = number(j.at("delta"), "delta", "delta_out_of_range");
  if (j.contains("rho_grid")) cfg.rho_grid = number_list(j.at("rho_grid"), "rho_grid", "bad_rho_grid");
  if (j.contains("w")) cfg.w = number(j.at("w"), "w", "bad_window");
  if (j.contains("t_grid")) cfg.t_grid = number_list(j.at("t_grid"), "t_grid", "bad_t_grid");
  if (j.contains("p_Gamma")) cfg.p_Gamma = number(j.at("p_Gamma"), "p_Gamma", "bad_p_gamma");
  if (j.contains("mc")) cfg.mc = parse_mc(j.at("mc"));
  if (j.contains("output")) parse_output(j.at("output"), cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("config_unreadable", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    fail("config_parse", e.what());
  }
  return parse_config(j);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (!o.eps.empty()) cfg.eps_list = o.eps;
  if (o.seed) cfg.mc.seed = *o.seed;
  if (o.paths) cfg.mc.n_paths = *o.paths;
  if (o.dt) cfg.mc.dt = *o.dt;
  if (o.out) cfg.output = *o.out;
}

void validate(const RunConfig& cfg) {
  for (double e : cfg.eps_list) {
    if (!(e > 0.0 && e < std::exp(-1.0))) fail("eps_out_of_range", "eps values must lie in (0, 1/e)");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) fail("delta_out_of_range", "delta must lie in (0, 1)");
  for (double r : cfg.rho_grid) {
    if (!std::isfinite(r)) fail("bad_rho_grid", "rho_grid values must be finite");
  }
  if (!(cfg.w > 0.0) || !std::isfinite(cfg.w)) fail("bad_window", "w must be positive");
  for (double t : cfg.t_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail("bad_t_grid", "t_grid values must be non-negative");
  }
  if (cfg.p_Gamma && !(*cfg.p_Gamma >= 0.0)) fail("bad_p_gamma", "p_Gamma must be non-negative");
  if (cfg.mc.n_paths < 100) fail("bad_mc_paths", "mc.n_paths must be at least 100");
  if (!(cfg.mc.dt > 0.0) || !std::isfinite(cfg.mc.dt)) fail("bad_mc_dt", "mc.dt must be positive");
}

}  // namespace gbm::cli
