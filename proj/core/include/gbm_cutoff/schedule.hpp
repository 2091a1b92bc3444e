#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gbm {

enum class Regime { commutative, first_order, synthetic, no_decay };

std::string_view to_string(Regime r);

// Cutoff time scale and window for one eps. Entries that do not apply to the
// regime stay empty.
struct CutoffSchedule {
  Regime regime = Regime::commutative;
  double eps = 0.0;

  // commutative regime
  std::optional<double> q;
  std::optional<int> ell;

  // first-order regime: gamma t^3 + b t^2 + a t - ell_star ln t + ln eps = 0
  std::optional<double> gamma;
  std::optional<double> b;
  std::optional<double> a;
  std::optional<int> ell_star;
  std::optional<int> selected_mode;

  std::optional<double> t_eps;
  std::optional<double> w_eps;
  std::optional<double> r_eps;
  std::optional<double> T_eps;
  std::optional<double> tau_eps;

  std::string diagnostic;
};

// eps must lie in (0, 1/e) so that ln|ln eps| > 0.
void require_cutoff_eps(double eps);

}  // namespace gbm
