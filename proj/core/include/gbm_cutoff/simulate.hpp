#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "gbm_cutoff/system.hpp"

namespace gbm {

enum class Scheme { exact_commutative, exact_first_order, euler_maruyama, magnus_truncated };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

// Independent generator per (seed, path index); any path can be regenerated
// without touching the others.
std::mt19937_64 path_generator(std::uint64_t seed, std::uint64_t index);

struct PathFunctionals {
  double W = 0.0;       // W_t
  double int_W = 0.0;   // int_0^t W_s ds
  double int_W2 = 0.0;  // int_0^t W_s^2 ds
  double int_sW = 0.0;  // int_0^t s W_s ds
};

// Brownian increments on a uniform grid; integrals use left-endpoint sums.
struct BrownianPath {
  double dt = 0.0;
  std::vector<double> increments;

  static BrownianPath sample(double t, double dt, std::uint64_t seed, std::uint64_t index);

  double duration() const { return dt * static_cast<double>(increments.size()); }
  // Functionals over the first `steps` increments (all when steps < 0).
  PathFunctionals functionals(long steps = -1) const;
};

// Exact draw of (W_t, int_0^t W_s ds) from covariance [[t, t^2/2], [t^2/2, t^3/3]].
std::pair<double, double> sample_gaussian_pair(double t, std::uint64_t seed,
                                               std::uint64_t index);

// exp(tA + W_t B + (t W_t / 2 - int W) C) x with C = [B, A]; needs
// [A, C] = [B, C] = O.
Vec sample_exact_first_order(const GBMSystem& sys, double t, std::uint64_t seed,
                             std::uint64_t index);

// exp(tA + W_t B) x; needs [A, B] = O.
Vec sample_exact_commutative(const GBMSystem& sys, double t, std::uint64_t seed,
                             std::uint64_t index);

// X <- X + (A + B^2/2) X dt + B X dW on the same increments as BrownianPath::sample.
Vec euler_maruyama(const GBMSystem& sys, double t, double dt, std::uint64_t seed,
                   std::uint64_t index);

// Truncated stochastic Magnus exponent with M = A + B^2/2:
//   M t + B W + [B,M](t W/2 - int W) - B^2 t/2
//   + [[M,B],B](int W^2 / 2 - W int W / 2 + t W^2 / 2)
//   + [[M,B],M](int sW - t int W / 2 - t^2 W / 12)
MatrixD magnus_exponent(const GBMSystem& sys, const BrownianPath& path, double t);

// Y_t = tA + W_t B + (t W_t / 2 - int W) [B, A] from the same path functionals.
MatrixD first_order_exponent(const GBMSystem& sys, const BrownianPath& path, double t);

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::euler_maruyama;
};

struct MCOptions {
  long n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: GBM_CUTOFF_THREADS or hardware concurrency
};

// Mean of |X_t|^2 over paths 0..n_paths-1. Per-path values are reduced in
// index order, so the result does not depend on the thread count.
MCEstimate estimate_mean_square(const GBMSystem& sys, double t, Scheme scheme,
                                const MCOptions& opts);

struct MatrixEstimate {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd std_error;
  long n_samples = 0;
};

// Entrywise Monte Carlo mean of exp(W_t Bhat - int_0^t W_s ds Chat) using
// exact pair draws.
MatrixEstimate estimate_gaussian_exponential(const MatrixD& bhat, const MatrixD& chat, double t,
                                             const MCOptions& opts);

// Sample mean and standard error with pairwise compensated sums.
std::pair<double, double> mean_and_std_error(const std::vector<double>& values);

unsigned resolve_threads(unsigned requested);

}  // namespace gbm
