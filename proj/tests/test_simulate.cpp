#include <cmath>
#include <cstdlib>
#include <functional>

#include <gtest/gtest.h>

#include "gbm_cutoff/commutative.hpp"
#include "gbm_cutoff/error.hpp"
#include "gbm_cutoff/simulate.hpp"

using namespace gbm;

namespace {

MatrixD E(int i, int j) { return MatrixD::unit(3, i - 1, j - 1); }

GBMSystem scalar() { return GBMSystem(MatrixD::diagonal({-1}), MatrixD::diagonal({0.5}), Vec::Ones(1)); }
GBMSystem heisenberg() { return GBMSystem(E(2, 3), E(1, 2), Vec::Unit(3, 2)); }

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

struct Moments {
  double var_w = 0, cov = 0, var_i = 0;
  double se_var_w = 0, se_cov = 0, se_var_i = 0;
};

Moments pair_moments(double t, long n) {
  std::vector<double> ww(n), wi(n), ii(n);
  for (long k = 0; k < n; ++k) {
    const auto [w, i] = sample_gaussian_pair(t, 99, static_cast<std::uint64_t>(k));
    ww[k] = w * w;
    wi[k] = w * i;
    ii[k] = i * i;
  }
  Moments m;
  std::tie(m.var_w, m.se_var_w) = mean_and_std_error(ww);
  std::tie(m.cov, m.se_cov) = mean_and_std_error(wi);
  std::tie(m.var_i, m.se_var_i) = mean_and_std_error(ii);
  return m;
}

}  // namespace

TEST(Scheme, Names) {
  for (Scheme s : {Scheme::exact_commutative, Scheme::exact_first_order, Scheme::euler_maruyama,
                   Scheme::magnus_truncated}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  EXPECT_EQ(error_code([] { parse_scheme("milstein"); }), "bad_scheme");
}

TEST(GaussianPair, Covariance) {
  const Moments a = pair_moments(2.0, 100000);
  EXPECT_LE(std::abs(a.var_w - 2.0), 3 * a.se_var_w);
  EXPECT_LE(std::abs(a.cov - 2.0), 3 * a.se_cov);
  const Moments b = pair_moments(3.0, 100000);
  EXPECT_LE(std::abs(b.var_i - 9.0), 3 * b.se_var_i);
}

TEST(BrownianPath, ReproducibleAndConsistent) {
  const BrownianPath a = BrownianPath::sample(1.0, 1e-3, 4, 17);
  const BrownianPath b = BrownianPath::sample(1.0, 1e-3, 4, 17);
  ASSERT_EQ(a.increments.size(), 1000u);
  EXPECT_EQ(a.increments, b.increments);
  EXPECT_NE(a.increments, BrownianPath::sample(1.0, 1e-3, 4, 18).increments);
  EXPECT_NEAR(a.duration(), 1.0, 1e-12);
  const PathFunctionals f = a.functionals();
  const PathFunctionals g = b.functionals();
  EXPECT_EQ(f.W, g.W);
  EXPECT_EQ(f.int_W, g.int_W);
  EXPECT_EQ(error_code([&] { a.functionals(2000); }), "path_too_short");
  EXPECT_EQ(error_code([] { BrownianPath::sample(1.0, 0.3, 0, 0); }), "invalid_argument");
}

TEST(BrownianPath, IncrementVariance) {
  const BrownianPath p = BrownianPath::sample(100.0, 1e-3, 1, 0);
  std::vector<double> sq;
  for (double d : p.increments) sq.push_back(d * d / 1e-3);
  const auto [mean, se] = mean_and_std_error(sq);
  EXPECT_LE(std::abs(mean - 1.0), 3 * se);
}

TEST(ExactFirstOrder, ReducesToCommutativeDraw) {
  const GBMSystem c(MatrixD::diagonal({-2, -3}), MatrixD::diagonal({1, 0.5}), Vec::Ones(2));
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto [w, integral] = sample_gaussian_pair(0.7, 3, i);
    const Vec expected = expm(0.7 * c.A.mat() + w * c.B.mat()) * c.x;
    EXPECT_LT((sample_exact_first_order(c, 0.7, 3, i) - expected).norm(), 1e-14);
    // The commutative scheme draws W from the same first normal.
    EXPECT_LT((sample_exact_commutative(c, 0.7, 3, i) - expected).norm(), 1e-14);
  }
}

TEST(ExactFirstOrder, HeisenbergPolynomial) {
  // exp(Y) with Y = tE23 + W E12 + (tW/2 - I) E13 terminates at second order.
  const GBMSystem h = heisenberg();
  for (std::uint64_t i = 0; i < 10; ++i) {
    const double t = 1.3;
    const auto [w, integral] = sample_gaussian_pair(t, 5, i);
    const double c = 0.5 * t * w - integral;
    const Vec expected = (Vec(3) << c + 0.5 * w * t, t, 1.0).finished();
    EXPECT_LT((sample_exact_first_order(h, t, 5, i) - expected).norm(), 1e-13);
  }
}

TEST(ExactSchemes, RepresentationChecks) {
  const GBMSystem generic(MatrixD::from_rows({{-1, 1}, {0, -2}}),
                          MatrixD::from_rows({{0.3, 0}, {0.4, 0.1}}), Vec::Ones(2));
  EXPECT_EQ(error_code([&] { sample_exact_commutative(generic, 1.0, 0, 0); }),
            "representation_invalid");
  EXPECT_EQ(error_code([&] { sample_exact_first_order(generic, 1.0, 0, 0); }),
            "representation_invalid");
  EXPECT_EQ(error_code([&] { sample_exact_commutative(heisenberg(), 1.0, 0, 0); }),
            "representation_invalid");
}

TEST(EulerMaruyama, ZeroNoiseConvergesToFlow) {
  const MatrixD a = MatrixD::from_rows({{-1, 2}, {-2, -1}});
  const GBMSystem sys(a, MatrixD::zero(2), Vec::Ones(2));
  const Vec exact = expm(a.mat()) * sys.x;
  double previous = INFINITY;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const double err = (euler_maruyama(sys, 1.0, dt, 0, 0) - exact).norm();
    EXPECT_LT(err, previous);
    EXPECT_LT(err, 5 * dt);
    previous = err;
  }
}

TEST(EulerMaruyama, ScalarMeanSquare) {
  MCOptions opts;
  opts.n_paths = 100000;
  opts.seed = 1;
  const MCEstimate e = estimate_mean_square(scalar(), 1.0, Scheme::euler_maruyama, opts);
  EXPECT_LE(std::abs(e.value - std::exp(-1.5)), 3 * e.std_error);
  EXPECT_NEAR(e.value, 0.2231, 0.01);
}

TEST(EulerMaruyama, StepHalvingShrinksTheBias) {
  // The same seed couples estimates at dt and dt/2 only loosely, so compare
  // each against the closed form with a generous number of paths.
  MCOptions coarse;
  coarse.n_paths = 20000;
  coarse.dt = 0.1;
  MCOptions fine = coarse;
  fine.dt = 0.0125;
  const double exact = std::exp(-1.5 * 2.0);
  const MCEstimate a = estimate_mean_square(scalar(), 2.0, Scheme::euler_maruyama, coarse);
  const MCEstimate b = estimate_mean_square(scalar(), 2.0, Scheme::euler_maruyama, fine);
  // Coarse EM has a deterministic bias: E X^2 = ((1 - 0.875 dt)^2 + 0.25 dt)^{t/dt}.
  const double coarse_mean = std::pow(std::pow(1 - 0.875 * 0.1, 2) + 0.25 * 0.1, 20);
  EXPECT_LE(std::abs(a.value - coarse_mean), 3 * a.std_error);
  EXPECT_LT(std::abs(b.value - exact), std::abs(coarse_mean - exact));
}

TEST(Magnus, CommutingPairReducesToExactExponent) {
  const GBMSystem c(MatrixD::diagonal({-2, -3}), MatrixD::diagonal({1, 0.5}), Vec::Ones(2));
  const BrownianPath p = BrownianPath::sample(1.0, 1e-3, 2, 3);
  const MatrixD y = magnus_exponent(c, p, 1.0);
  const MatrixD ref = 1.0 * c.A + p.functionals().W * c.B;
  EXPECT_LT((y - ref).norm(), 1e-12);
}

TEST(Magnus, HeisenbergMatchesFirstOrderExponent) {
  const GBMSystem h = heisenberg();
  for (std::uint64_t i = 0; i < 20; ++i) {
    const BrownianPath p = BrownianPath::sample(1.0, 1e-3, 6, i);
    EXPECT_LT((magnus_exponent(h, p, 1.0) - first_order_exponent(h, p, 1.0)).norm(), 1e-12);
  }
}

TEST(Magnus, ZeroTime) {
  const BrownianPath p = BrownianPath::sample(1.0, 1e-3, 0, 0);
  EXPECT_EQ(magnus_exponent(heisenberg(), p, 0.0).norm(), 0.0);
}

TEST(Estimator, Basics) {
  MCOptions opts;
  opts.n_paths = 1000;
  const MCEstimate zero = estimate_mean_square(scalar(), 0.0, Scheme::euler_maruyama, opts);
  EXPECT_EQ(zero.value, 1.0);
  EXPECT_EQ(zero.std_error, 0.0);
  opts.n_paths = 50;
  EXPECT_EQ(error_code([&] { estimate_mean_square(scalar(), 1.0, Scheme::euler_maruyama, opts); }),
            "invalid_argument");
}

TEST(Estimator, StandardErrorShrinksLikeRootN) {
  MCOptions opts;
  opts.n_paths = 20000;
  const MCEstimate a = estimate_mean_square(scalar(), 1.0, Scheme::exact_commutative, opts);
  opts.n_paths = 40000;
  const MCEstimate b = estimate_mean_square(scalar(), 1.0, Scheme::exact_commutative, opts);
  EXPECT_NEAR(a.std_error / b.std_error, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
}

TEST(Estimator, BitIdenticalAcrossThreadCounts) {
  MCOptions opts;
  opts.n_paths = 3000;
  opts.dt = 1e-2;
  opts.seed = 8;
  for (Scheme s : {Scheme::euler_maruyama, Scheme::exact_first_order, Scheme::magnus_truncated}) {
    opts.threads = 1;
    const MCEstimate serial = estimate_mean_square(heisenberg(), 1.0, s, opts);
    for (unsigned th : {2u, 3u, 7u}) {
      opts.threads = th;
      const MCEstimate par = estimate_mean_square(heisenberg(), 1.0, s, opts);
      EXPECT_EQ(par.value, serial.value) << to_string(s) << " " << th;
      EXPECT_EQ(par.std_error, serial.std_error);
    }
  }
}

TEST(Estimator, HeisenbergSchemesAgree) {
  MCOptions opts;
  opts.n_paths = 20000;
  opts.dt = 1e-2;
  const MCEstimate exact = estimate_mean_square(heisenberg(), 1.0, Scheme::exact_first_order, opts);
  const MCEstimate em = estimate_mean_square(heisenberg(), 1.0, Scheme::euler_maruyama, opts);
  const double joint = std::hypot(exact.std_error, em.std_error);
  EXPECT_LE(std::abs(exact.value - em.value), 3 * joint);
  // E|X_1|^2 = E[(W - I)^2] + 2 = 1/3 + 2.
  EXPECT_LE(std::abs(exact.value - 7.0 / 3.0), 3 * exact.std_error);
}

TEST(Estimator, ThreadsEnvironmentCap) {
  setenv("GBM_CUTOFF_THREADS", "1", 1);
  EXPECT_EQ(resolve_threads(0), 1u);
  unsetenv("GBM_CUTOFF_THREADS");
  EXPECT_EQ(resolve_threads(5), 5u);
}

TEST(GaussianExponential, MonteCarloMatchesIdentity) {
  MCOptions opts;
  opts.n_paths = 20000;
  const MatrixD bhat = MatrixD::diagonal({1, 0.5});
  const MatrixD chat = MatrixD::diagonal({0.4, -0.2});
  const MatrixEstimate m = estimate_gaussian_exponential(bhat, chat, 1.0, opts);
  for (int i = 0; i < 2; ++i) {
    const double mu = bhat(i, i), nu = chat(i, i);
    const double ref = std::exp(mu * mu / 2 - mu * nu / 2 + nu * nu / 6);
    EXPECT_LE(std::abs(m.mean(i, i) - ref), 3 * m.std_error(i, i));
  }
  EXPECT_EQ(m.mean(0, 1), 0.0);
}
