#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gbm_cutoff/error.hpp"
#include "gbm_cutoff/spectral.hpp"

using namespace gbm;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

MatrixD rotation_pair() {
  // Two decaying rotations with the same rate and incommensurate frequencies.
  const double w = std::sqrt(2.0);
  return MatrixD::from_rows(
      {{-1, 2, 0, 0}, {-2, -1, 0, 0}, {0, 0, -1, w}, {0, 0, -w, -1}});
}

}  // namespace

TEST(Spectral, SlowestModeDominates) {
  const SpectralAsymptotics s = extract_asymptotics(MatrixD::diagonal({-1, -2}), vec({1, 1}));
  EXPECT_NEAR(s.q, 1.0, 1e-14);
  EXPECT_EQ(s.ell, 1);
  EXPECT_EQ(s.m, 1);
  EXPECT_NEAR(std::abs(s.vs[0](0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s.vs[0](1)), 0.0, 1e-12);
  EXPECT_NEAR(s.K0, 1.0, 1e-12);
  EXPECT_NEAR(s.K1, 1.0, 1e-12);
}

TEST(Spectral, JordanBlock) {
  const MatrixD q = MatrixD::from_rows({{-1, 1}, {0, -1}});
  const SpectralAsymptotics s = extract_asymptotics(q, vec({0, 1}));
  EXPECT_NEAR(s.q, 1.0, 1e-7);
  EXPECT_EQ(s.ell, 2);
  EXPECT_EQ(s.m, 1);
  EXPECT_NEAR(s.vs[0](0).real(), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(s.vs[0](1)), 0.0, 1e-9);
  // The normalized orbit is (1, 1/t): the gap closes like 1/t, not exponentially.
  double previous = INFINITY;
  for (double t : {10.0, 20.0, 50.0}) {
    const double r = asymptotic_residual(q, vec({0, 1}), s, t);
    EXPECT_NEAR(r, 1.0 / t, 1e-6);
    EXPECT_LT(r, previous);
    previous = r;
  }
}

TEST(Spectral, DecayingRotation) {
  const SpectralAsymptotics s =
      extract_asymptotics(MatrixD::from_rows({{-1, 2}, {-2, -1}}), vec({1, 0}));
  EXPECT_NEAR(s.q, 1.0, 1e-12);
  EXPECT_EQ(s.ell, 1);
  EXPECT_EQ(s.m, 2);
  std::vector<double> th = s.thetas;
  std::sort(th.begin(), th.end());
  EXPECT_NEAR(th[0], -2.0, 1e-12);
  EXPECT_NEAR(th[1], 2.0, 1e-12);
  EXPECT_NEAR(s.K0, 1.0, 1e-9);
  EXPECT_NEAR(s.K1, 1.0, 1e-9);
}

TEST(Spectral, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return std::string();
  };
  EXPECT_EQ(code([] { extract_asymptotics(MatrixD::diagonal({-1, 0}), vec({1, 1})); }),
            "not_stable");
  EXPECT_EQ(code([] { extract_asymptotics(MatrixD::diagonal({-1, -2}), vec({0, 0})); }),
            "zero_vector");
  EXPECT_EQ(code([] { extract_asymptotics(MatrixD::diagonal({-1, -2}), vec({1})); }),
            "dim_mismatch");
}

TEST(SpectralProperty, ConvergenceForSimpleLeadingModes) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> n;
  const std::vector<MatrixD> qs = {MatrixD::diagonal({-1, -2}),
                                   MatrixD::from_rows({{-1, 2}, {-2, -1}}), rotation_pair(),
                                   MatrixD::from_rows({{-0.5, 1, 0}, {0, -1, 1}, {0, 0, -2}})};
  for (const MatrixD& q : qs) {
    Vec y(q.dim());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = n(gen);
    const SpectralAsymptotics s = extract_asymptotics(q, y);
    ASSERT_EQ(s.ell, 1);
    EXPECT_LE(s.ell, q.dim());
    EXPECT_LE(s.m, q.dim());
    EXPECT_LE(s.K0, s.K1);
    double previous = INFINITY;
    for (double t : {10.0 / s.q, 20.0 / s.q, 50.0 / s.q}) {
      const double r = asymptotic_residual(q, y, s, t);
      EXPECT_LE(r, previous + 1e-6);
      previous = r;
    }
    EXPECT_LE(previous, 1e-6 * y.norm());
  }
}

TEST(SpectralProperty, Homogeneity) {
  const Vec y = vec({0.3, -1.2, 0.7, 0.4});
  const SpectralAsymptotics s = extract_asymptotics(rotation_pair(), y);
  for (double c : {-2.0, 0.5, 7.0}) {
    const SpectralAsymptotics sc = extract_asymptotics(rotation_pair(), c * y);
    EXPECT_NEAR(sc.q, s.q, 1e-12);
    EXPECT_EQ(sc.ell, s.ell);
    ASSERT_EQ(sc.m, s.m);
    for (int k = 0; k < s.m; ++k) {
      EXPECT_NEAR(sc.thetas[k], s.thetas[k], 1e-12);
      EXPECT_LT((sc.vs[k] - c * s.vs[k]).norm(), 1e-10 * std::abs(c));
    }
  }
}

TEST(SpectralProperty, GridBound) {
  const Vec y = vec({1, 0, 0.5, 0.2});
  const SpectralAsymptotics s = extract_asymptotics(rotation_pair(), y);
  ASSERT_EQ(s.m, 4);
  EXPECT_LT(s.K0, s.K1);
  double min_gap = INFINITY;
  for (int i = 0; i < s.m; ++i)
    for (int j = i + 1; j < s.m; ++j) min_gap = std::min(min_gap, std::abs(s.thetas[i] - s.thetas[j]));
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.0, 200.0 * std::numbers::pi / min_gap);
  for (int i = 0; i < 1000; ++i) {
    const double value = s.oscillation(u(gen)).norm();
    EXPECT_GE(value, s.K0 - 1e-9);
    EXPECT_LE(value, s.K1 + 1e-9);
  }
}
