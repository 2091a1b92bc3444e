#include "gbm_cutoff/system.hpp"

#include <cmath>

#include "gbm_cutoff/error.hpp"

namespace gbm {

GBMSystem::GBMSystem(MatrixD a, MatrixD b, Vec x0, double tolerance)
    : A(std::move(a)), B(std::move(b)), x(std::move(x0)), tol(tolerance) {
  require_same_dim(A, B);
  require_initial_state(x, A.dim());
  if (!(tol > 0.0) || !std::isfinite(tol)) fail("invalid_tolerance", "tol must be positive");
}

void require_initial_state(const Vec& x, Eigen::Index d) {
  if (x.size() != d) {
    fail("dim_mismatch", "initial state has length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(d));
  }
  if (!x.allFinite()) fail("non_finite", "initial state entries must be finite");
  if (x.norm() == 0.0) fail("zero_vector", "initial state must be nonzero");
}

}  // namespace gbm
