#pragma once

#include "gbm_cutoff/linalg.hpp"

namespace gbm {

// dX = A X dt + B X o dW (Stratonovich), started at x != 0.
struct GBMSystem {
  GBMSystem(MatrixD a, MatrixD b, Vec x0, double tolerance = kDefaultTol);

  Eigen::Index dim() const noexcept { return A.dim(); }

  MatrixD A;
  MatrixD B;
  Vec x;
  double tol;
};

// Validates an initial vector against dimension d: finite and nonzero.
void require_initial_state(const Vec& x, Eigen::Index d);

}  // namespace gbm
