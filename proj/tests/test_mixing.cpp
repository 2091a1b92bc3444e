#include <cmath>

#include <gtest/gtest.h>

#include "gbm_cutoff/commutative.hpp"
#include "gbm_cutoff/error.hpp"
#include "gbm_cutoff/mixing.hpp"
#include "gbm_cutoff/noncommutative.hpp"

using namespace gbm;

namespace {

double scalar_msq(double t) { return std::exp(-1.5 * t); }

// Closed-form tau for |X_t|^2 = e^{-1.5 t}.
double scalar_tau(double log_eps, double delta) { return (2 * log_eps - std::log(delta)) / 1.5; }

void expect_certificate(const MeanSquareFn& msq, const MixingTimeResult& r) {
  const double level = r.delta * r.eps * r.eps;
  EXPECT_LE(msq(r.tau), level);
  EXPECT_LE(r.bracket_width, 1e-8 * (1 + r.tau));
  if (r.tau > 0) EXPECT_GT(msq(r.tau - r.bracket_width), level);
}

}  // namespace

TEST(MixingTime, ScalarClosedForm) {
  const MixingTimeResult r = mixing_time(scalar_msq, std::exp(-6.0), 0.5);
  EXPECT_NEAR(r.tau, (12 + std::log(2.0)) / 1.5, 1e-7);
  EXPECT_NEAR(r.tau, 8.4621, 1e-4);
  EXPECT_EQ(*r.tau_ratio, 1.0);
  expect_certificate(scalar_msq, r);
}

TEST(MixingTime, ZeroWhenAlreadyBelow) {
  const auto flat = [](double) { return 1e-10; };
  const MixingTimeResult r = mixing_time(flat, 0.1, 0.5);
  EXPECT_EQ(r.tau, 0.0);
}

TEST(MixingTime, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return std::string();
  };
  EXPECT_EQ(code([] { mixing_time([](double) { return 1.0; }, 0.1, 0.5); }), "no_decay");
  EXPECT_EQ(code([] { mixing_time(scalar_msq, 0.1, 1.5); }), "delta_out_of_range");
  EXPECT_EQ(code([] { mixing_time(scalar_msq, 0.0, 0.5); }), "eps_out_of_range");
  EXPECT_EQ(code([] { mixing_ratio_check([](double) { return 1.0; }, scalar_msq, {0.1}, 0.7); }),
            "delta_out_of_range");
}

TEST(MixingTime, SyntheticFirstOrderNearCardanoScale) {
  const SyntheticSystem s(MatrixD::diagonal({0.2, 0.4}), MatrixD::diagonal({0.3, 0.1}),
                          MatrixD::diagonal({-0.6, -1.2}), MatrixD::diagonal({-1, -2}),
                          Vec::Ones(2));
  const ModeDecomposition d = mode_decomposition(s);
  const double eps = std::exp(-15.0);
  const double t_eps = *cutoff_schedule_first_order(d, s.x, eps).t_eps;
  const auto msq = [&](double t) { return mean_square_first_order(d, s.x, t); };
  const MixingTimeResult r = mixing_time(msq, eps, 0.5, t_eps);
  EXPECT_NEAR(*r.tau_over_t_ref, 1.0, 0.02);
  expect_certificate(msq, r);
}

TEST(MixingRatio, ScalarTable) {
  std::vector<double> eps_list;
  for (int n : {5, 10, 20, 30}) eps_list.push_back(std::exp(-n));
  const auto t_ref = [](double eps) { return std::abs(std::log(eps)) / 0.75; };
  const auto rows = mixing_ratio_check(t_ref, scalar_msq, eps_list, 0.1);
  ASSERT_EQ(rows.size(), 4u);
  double prev_ratio = INFINITY, prev_scale = INFINITY;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double n = -std::log(eps_list[i]);
    EXPECT_NEAR(rows[i].tau, scalar_tau(n, 0.1), 1e-7 * (1 + rows[i].tau));
    EXPECT_NEAR(*rows[i].tau_ratio, scalar_tau(n, 0.1) / scalar_tau(n, 0.9), 1e-8);
    // Both ratios approach 1 monotonically.
    EXPECT_LT(*rows[i].tau_ratio - 1, prev_ratio);
    EXPECT_LT(*rows[i].tau_over_t_ref - 1, prev_scale);
    prev_ratio = *rows[i].tau_ratio - 1;
    prev_scale = *rows[i].tau_over_t_ref - 1;
    expect_certificate(scalar_msq, rows[i]);
  }
  EXPECT_GE(*rows[2].tau_ratio, 0.9);
  EXPECT_LE(*rows[2].tau_ratio, 1.1);
  EXPECT_GE(*rows[3].tau_over_t_ref, 0.95);
  EXPECT_LE(*rows[3].tau_over_t_ref, 1.05);
}

TEST(MixingProperty, MonotoneInDelta) {
  const GBMSystem sys(MatrixD::diagonal({-2, -3}), MatrixD::diagonal({1, 0.5}), Vec::Ones(2));
  const CommutativeModel m(sys);
  const auto msq = [&](double t) { return m.mean_square(t); };
  double previous = INFINITY;
  for (double delta : {0.05, 0.1, 0.3, 0.5, 0.7, 0.95}) {
    const MixingTimeResult r = mixing_time(msq, 1e-3, delta);
    EXPECT_LE(r.tau, previous);
    expect_certificate(msq, r);
    previous = r.tau;
  }
}
