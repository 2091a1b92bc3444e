#include "gbm_cutoff/mixing.hpp"

#include <cmath>
#include <string>

#include "gbm_cutoff/error.hpp"

namespace gbm {

namespace {

constexpr double kSearchCap = 1e6;

void require_unit_interval(double v, const char* code, const char* what) {
  if (!(v > 0.0 && v < 1.0)) fail(code, std::string(what) + " must lie in (0, 1)");
}

}  // namespace

double mixing_tau(const MeanSquareFn& msq, double eps, double delta, double* bracket_width) {
  require_unit_interval(eps, "eps_out_of_range", "eps");
  require_unit_interval(delta, "delta_out_of_range", "delta");
  const double level = delta * eps * eps;
  auto above = [&](double t) {
    const double v = msq(t);
    if (!std::isfinite(v)) fail("non_finite", "mean-square evaluator returned a non-finite value");
    return v > level;
  };
  if (bracket_width) *bracket_width = 0.0;
  if (!above(0.0)) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (above(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kSearchCap) fail("no_decay", "mean square stays above delta eps^2 up to t = 1e6");
  }
  while (hi - lo > 1e-8 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? lo : hi) = mid;
  }
  if (bracket_width) *bracket_width = hi - lo;
  return hi;
}

MixingTimeResult mixing_time(const MeanSquareFn& msq, double eps, double delta,
                             std::optional<double> t_ref) {
  MixingTimeResult out;
  out.delta = delta;
  out.eps = eps;
  out.tau = mixing_tau(msq, eps, delta, &out.bracket_width);
  if (t_ref) {
    if (!(*t_ref >= 0.0)) fail("invalid_argument", "t_ref must be non-negative");
    out.t_ref = *t_ref;
    if (*t_ref > 0.0) out.tau_over_t_ref = out.tau / *t_ref;
  }
  if (delta == 0.5) {
    out.tau_ratio = 1.0;
  } else {
    const double tau_dual = mixing_tau(msq, eps, 1.0 - delta);
    if (tau_dual > 0.0) out.tau_ratio = out.tau / tau_dual;
  }
  return out;
}

std::vector<MixingTimeResult> mixing_ratio_check(const std::function<double(double)>& t_ref_of_eps,
                                                 const MeanSquareFn& msq,
                                                 const std::vector<double>& eps_list,
                                                 double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) fail("delta_out_of_range", "delta must lie in (0, 1/2]");
  std::vector<MixingTimeResult> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) rows.push_back(mixing_time(msq, eps, delta, t_ref_of_eps(eps)));
  return rows;
}

}  // namespace gbm
