#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbm_cutoff/schedule.hpp"
#include "gbm_cutoff/system.hpp"

namespace gbm {

// Mode-level input that bypasses construction from (A, B): the analytic
// pipeline only needs alpha, beta, Gamma and the drift A.
struct SyntheticSystem {
  SyntheticSystem(MatrixD alpha_, MatrixD beta_, MatrixD Gamma_, MatrixD A_, Vec x_,
                  double tolerance = kDefaultTol);

  MatrixD alpha;
  MatrixD beta;
  MatrixD Gamma;
  MatrixD A;
  Vec x;
  double tol;
};

// C = [B, A], Bhat = B + B*, Chat = C + C*, alpha = Bhat^2 / 2,
// beta = Bhat Chat / 2, Gamma = Chat^2 / 6, A_tilde = A + (p_Gamma / 2) Gamma.
struct GammaMatrices {
  std::optional<MatrixD> C;  // absent for synthetic input
  std::optional<MatrixD> Bhat;
  std::optional<MatrixD> Chat;
  MatrixD A;
  MatrixD alpha;
  MatrixD beta;
  MatrixD Gamma;
  double p_Gamma = 0.0;
  MatrixD A_tilde;
  bool synthetic = false;
  double tol = kDefaultTol;
};

// p_Gamma defaults to 0 for Hurwitz A, else the smallest p in {1, 2, 4, ...,
// 2^20} making A + (p/2) Gamma Hurwitz ("no_stabilizer" if none does). An
// explicit p_Gamma must itself be stabilizing.
GammaMatrices gamma_matrices(const GBMSystem& sys, std::optional<double> p_Gamma = {});
GammaMatrices gamma_matrices(const SyntheticSystem& sys, std::optional<double> p_Gamma = {});

// Residuals of [alpha,beta], [alpha,Gamma], [beta,Gamma], [A,Gamma] with
// thresholds tol (1 + |X|)(1 + |Y|).
struct CommutatorLedger {
  std::map<std::string, double> residuals;
  std::map<std::string, double> thresholds;
  bool all_pass() const;
};

CommutatorLedger step3_residuals(const GammaMatrices& g, double tol);

// Joint eigenbasis v_j of (alpha, beta, Gamma) with per-mode coefficients in
// the sign convention alpha v_j = -a_j v_j, beta v_j = b_j v_j,
// Gamma v_j = -gamma_j v_j, and per-mode decay (lambda_j, ell_j) of
// exp(t A_tilde) v_j.
struct ModeDecomposition {
  GammaMatrices matrices;
  Eigen::MatrixXd basis;  // columns v_j
  std::vector<double> a_coeffs;
  std::vector<double> b_coeffs;
  std::vector<double> g_coeffs;
  std::vector<double> lambda;
  std::vector<int> ell;
  std::vector<double> overlaps;  // <x, v_j>
};

ModeDecomposition decompose_modes(GammaMatrices g, const Vec& x);
ModeDecomposition mode_decomposition(const GBMSystem& sys);
ModeDecomposition mode_decomposition(const SyntheticSystem& sys);

// |exp(t A_tilde) exp((t alpha - t^2 beta + (t^3 - p_Gamma t) Gamma) / 2) x|^2
// evaluated mode by mode.
double mean_square_first_order(const ModeDecomposition& dec, const Vec& x, double t);

// Selection cascade over the modes excited by x (|<x, v_j>| > 1e-12 |x|):
// min gamma_j, then min b_j, then min a~_j = a_j/2 + lambda_j - p_Gamma gamma_j / 2,
// then max ell_j. Ties within 1e-9 relative are kept as sets.
CutoffSchedule cutoff_schedule_first_order(const ModeDecomposition& dec, const Vec& x,
                                           double eps);

// exp((t Bhat^2 - t^2 Bhat Chat + t^3 Chat^2 / 3) / 2), the mean of
// exp(int_0^t (Bhat - (t - s) Chat) dW_s) for commuting symmetric Bhat, Chat.
Eigen::MatrixXd gaussian_exponential_mean(const MatrixD& bhat, const MatrixD& chat, double t);

// x(t) = exp(-t^3 - t^2) solves x' = f(x), f(x) = -x (3 g(x)^2 + 2 g(x)), with g
// the closed-form inverse of t -> t^3 + t^2 evaluated at -ln x.
struct Example35Point {
  double x = 0.0;
  double f_of_x = 0.0;
  double g_of_x = 0.0;
};

Example35Point example35_check(double t);

}  // namespace gbm
