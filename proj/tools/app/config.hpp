#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gbm_cutoff/json_io.hpp"
#include "gbm_cutoff/noncommutative.hpp"
#include "gbm_cutoff/simulate.hpp"

namespace gbm::cli {

enum class Mode { commutative, first_order, synthetic };
enum class Format { csv, json };

struct McConfig {
  long n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::euler_maruyama;
};

struct RunConfig {
  Mode mode = Mode::commutative;
  // commutative / first_order: A, B. synthetic: alpha, beta, Gamma, A.
  std::optional<GBMSystem> system;
  std::optional<SyntheticSystem> synthetic;
  std::vector<double> eps_list;
  double delta = 0.1;
  std::vector<double> rho_grid;
  double w = 1.0;
  std::vector<double> t_grid;
  std::optional<double> p_Gamma;
  McConfig mc;
  double tol = kDefaultTol;
  std::optional<std::filesystem::path> output;  // stdout when empty
  Format format = Format::csv;

  const Vec& x() const;
};

struct Overrides {
  std::vector<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<long> paths;
  std::optional<double> dt;
  std::optional<std::string> out;
};

// Every invariant violation maps to its own error code (see docs/formats.md).
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::filesystem::path& path);
void apply_overrides(RunConfig& cfg, const Overrides& o);
void validate(const RunConfig& cfg);

std::string_view to_string(Mode m);

}  // namespace gbm::cli
