#pragma once

#include "gbm_cutoff/schedule.hpp"
#include "gbm_cutoff/spectral.hpp"
#include "gbm_cutoff/system.hpp"

namespace gbm {

// Q = A + (B + B*)^2 / 4. Requires [B, B*] = [A, B] = [A, B*] = O.
MatrixD effective_drift(const GBMSystem& sys);

// Closed-form mean square of a commuting system, E|X_t(x)|^2 = |exp(tQ) x|^2.
// Holds Q so repeated evaluations skip the hypothesis checks.
class CommutativeModel {
 public:
  explicit CommutativeModel(const GBMSystem& sys);

  const MatrixD& Q() const noexcept { return q_; }
  const Vec& x() const noexcept { return x_; }
  double mean_square(double t) const;

  // Leading-order parameters of exp(tQ) x; throws not_stable unless Q is Hurwitz.
  const SpectralAsymptotics& asymptotics() const;

 private:
  MatrixD q_;
  Vec x_;
  mutable std::optional<SpectralAsymptotics> asymptotics_;
};

double mean_square_commutative(const GBMSystem& sys, double t);

// t_eps = |ln eps| / q + (ell - 1) ln|ln eps| / q with constant window w.
CutoffSchedule cutoff_time_commutative(const GBMSystem& sys, double eps, double w = 1.0);

// Limit of E|X_{t_eps + rho w}|^2 / eps^2 as eps -> 0: (e^{-q rho w})^2 |v|^2.
// Needs diagonalizable A and a single non-oscillating leading mode.
double profile_limit(const GBMSystem& sys, double rho, double w = 1.0);

}  // namespace gbm
