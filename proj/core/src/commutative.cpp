#include "gbm_cutoff/commutative.hpp"

#include <cmath>
#include <numbers>

#include "gbm_cutoff/error.hpp"
#include "gbm_cutoff/hypotheses.hpp"

namespace gbm {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::commutative: return "commutative";
    case Regime::first_order: return "first_order";
    case Regime::synthetic: return "synthetic";
    case Regime::no_decay: return "no_decay";
  }
  return "unknown";
}

void require_cutoff_eps(double eps) {
  if (!(eps > 0.0) || !(eps < std::exp(-1.0))) {
    fail("eps_out_of_range", "eps must lie in (0, 1/e), got " + std::to_string(eps));
  }
}

MatrixD effective_drift(const GBMSystem& sys) {
  const HypothesisReport report = check_hypotheses(sys);
  if (!report.normal_B || !report.commutative) {
    fail("hypotheses_violated", "requires [B,B*] = [A,B] = [A,B*] = O");
  }
  const MatrixD bhat = sys.B + sys.B.adjoint();
  return sys.A + 0.25 * (bhat * bhat);
}

CommutativeModel::CommutativeModel(const GBMSystem& sys) : q_(effective_drift(sys)), x_(sys.x) {}

double CommutativeModel::mean_square(double t) const {
  if (!(t >= 0.0)) fail("invalid_argument", "t must be non-negative");
  return (expm(t * q_.mat()) * x_).squaredNorm();
}

const SpectralAsymptotics& CommutativeModel::asymptotics() const {
  if (!asymptotics_) asymptotics_ = extract_asymptotics(q_, x_);
  return *asymptotics_;
}

double mean_square_commutative(const GBMSystem& sys, double t) {
  return CommutativeModel(sys).mean_square(t);
}

CutoffSchedule cutoff_time_commutative(const GBMSystem& sys, double eps, double w) {
  require_cutoff_eps(eps);
  if (!(w > 0.0)) fail("invalid_argument", "window must be positive");
  const CommutativeModel model(sys);
  const SpectralAsymptotics& s = model.asymptotics();
  const double log_eps = std::abs(std::log(eps));

  CutoffSchedule out;
  out.regime = Regime::commutative;
  out.eps = eps;
  out.q = s.q;
  out.ell = s.ell;
  out.t_eps = log_eps / s.q + (s.ell - 1) * std::log(log_eps) / s.q;
  out.w_eps = w;
  return out;
}

double profile_limit(const GBMSystem& sys, double rho, double w) {
  if (!(w > 0.0)) fail("invalid_argument", "window must be positive");
  if (!is_diagonalizable(sys.A)) fail("not_diagonalizable", "A is not diagonalizable");
  const CommutativeModel model(sys);
  const SpectralAsymptotics& s = model.asymptotics();
  if (s.ell != 1 || s.m != 1) {
    fail("no_profile_limit", "leading behaviour oscillates or carries a polynomial factor");
  }
  const double decay = std::exp(-s.q * rho * w);
  return decay * decay * s.vs.front().squaredNorm();
}

}  // namespace gbm
