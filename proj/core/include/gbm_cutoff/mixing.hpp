#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace gbm {

using MeanSquareFn = std::function<double(double)>;

struct MixingTimeResult {
  double delta = 0.0;
  double eps = 0.0;
  double tau = 0.0;
  double t_ref = 0.0;
  // tau / t_ref (when t_ref > 0) and tau(delta) / tau(1 - delta).
  std::optional<double> tau_over_t_ref;
  std::optional<double> tau_ratio;
  // Width h of the final bracket: msq(tau)/eps^2 <= delta < msq(tau - h)/eps^2.
  double bracket_width = 0.0;
};

// Smallest t >= 0 with msq(t) / eps^2 <= delta, assuming msq is non-increasing.
// Bracket by doubling from t = 1 (up to 1e6), then bisect to 1e-8 (1 + tau).
double mixing_tau(const MeanSquareFn& msq, double eps, double delta,
                  double* bracket_width = nullptr);

// mixing_tau for delta and for 1 - delta, with both ratios filled in.
MixingTimeResult mixing_time(const MeanSquareFn& msq, double eps, double delta,
                             std::optional<double> t_ref = std::nullopt);

// One row per eps; t_ref_of_eps gives the cutoff time used in tau / t_eps.
std::vector<MixingTimeResult> mixing_ratio_check(const std::function<double(double)>& t_ref_of_eps,
                                                 const MeanSquareFn& msq,
                                                 const std::vector<double>& eps_list,
                                                 double delta);

}  // namespace gbm
