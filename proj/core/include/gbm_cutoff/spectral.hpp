#pragma once

#include <vector>

#include "gbm_cutoff/linalg.hpp"

namespace gbm {

// Leading-order behaviour of t -> exp(tQ) y for Hurwitz Q:
//   (e^{qt} / t^{ell-1}) exp(tQ) y  ~  sum_k e^{i theta_k t} v_k.
struct SpectralAsymptotics {
  double q = 0.0;
  int ell = 1;
  int m = 1;
  std::vector<double> thetas;
  std::vector<CVec> vs;
  double K0 = 0.0;
  double K1 = 0.0;

  // sum_k e^{i theta_k t} v_k
  CVec oscillation(double t) const;
};

// Component threshold: a generalized eigenspace counts as excited by y when
// its component exceeds 1e-9 |y|. Only chains of maximal height among the
// leading eigenvalues contribute to the v_k.
SpectralAsymptotics extract_asymptotics(const MatrixD& Q, const Vec& y, double margin = 0.0);

// | (e^{qt} / t^{ell-1}) exp(tQ) y - sum_k e^{i theta_k t} v_k |
double asymptotic_residual(const MatrixD& Q, const Vec& y, const SpectralAsymptotics& s,
                           double t);

}  // namespace gbm
