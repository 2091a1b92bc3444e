#include "gbm_cutoff/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbm_cutoff/error.hpp"

namespace gbm {

namespace {

double polish(const CubicCoefficients& c, double t) {
  double best = t;
  double best_res = std::abs(c(t));
  for (int it = 0; it < 5 && best_res > 0.0; ++it) {
    const double slope = c.derivative(best);
    if (slope == 0.0) break;
    const double next = best - c(best) / slope;
    const double res = std::abs(c(next));
    if (!(res < best_res)) break;
    best = next;
    best_res = res;
  }
  return best;
}

double unique_quadratic_or_linear(const CubicCoefficients& c) {
  if (c.c2 == 0.0) {
    if (c.c1 == 0.0) fail("degenerate_polynomial", "polynomial is constant");
    return -c.c0 / c.c1;
  }
  const double disc = c.c1 * c.c1 - 4.0 * c.c2 * c.c0;
  if (disc < 0.0) fail("no_real_root", "quadratic has no real root");
  if (disc > 0.0) fail("ambiguous_roots", "quadratic has two distinct real roots");
  return -c.c1 / (2.0 * c.c2);
}

}  // namespace

CubicCoefficients cutoff_cubic(double gamma, double b, double a, double eps) {
  if (!(eps > 0.0)) fail("invalid_argument", "eps must be positive");
  return {gamma, b, a, std::log(eps)};
}

double DepressedCubic::discriminant() const {
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  return half_q * half_q + third_p * third_p * third_p;
}

DepressedCubic depress(const CubicCoefficients& c) {
  const double b = c.c2 / c.c3;
  const double a = c.c1 / c.c3;
  const double k = c.c0 / c.c3;
  DepressedCubic out;
  out.p = a - b * b / 3.0;
  out.q = 2.0 * b * b * b / 27.0 - a * b / 3.0 + k;
  out.shift = -b / 3.0;
  return out;
}

double cardano_unique_real(const CubicCoefficients& c) {
  if (c.c3 == 0.0) return unique_quadratic_or_linear(c);
  const DepressedCubic dc = depress(c);
  const double disc = dc.discriminant();

  double s;
  if (disc > 0.0) {
    // Choose the radical that avoids cancellation, then recover the partner
    // from u v = -p/3.
    const double big = -0.5 * dc.q - std::copysign(std::sqrt(disc), dc.q);
    const double u = std::cbrt(big);
    const double v = u != 0.0 ? -dc.p / (3.0 * u) : 0.0;
    s = u + v;
  } else {
    const double scale = 1.0 + std::abs(dc.shift);
    const bool triple = std::abs(dc.p) <= 1e-12 * scale * scale &&
                        std::abs(dc.q) <= 1e-12 * scale * scale * scale;
    if (!triple) {
      fail("ambiguous_roots", "cubic has three real roots (discriminant " +
                                  std::to_string(disc) + ")");
    }
    s = 0.0;
  }
  return polish(c, s + dc.shift);
}

double solve_log_cubic(const CubicCoefficients& c, int ell_star) {
  if (ell_star < 0) fail("invalid_argument", "ell_star must be non-negative");
  if (!(c.c3 > 0.0)) fail("invalid_argument", "leading coefficient must be positive");
  const double t0 = cardano_unique_real(c);
  if (ell_star == 0) return t0;

  auto f = [&](double t) { return c(t) - ell_star * std::log(t); };
  auto df = [&](double t) { return c.derivative(t) - ell_star / t; };
  if (!(t0 > 0.0)) fail("bracket_failure", "cubic root is not positive");
  double lo = 0.5 * t0;
  double hi = 4.0 * t0;
  double flo = f(lo);
  const double fhi = f(hi);
  if (std::signbit(flo) == std::signbit(fhi)) {
    fail("bracket_failure", "no sign change in [t0/2, 4 t0]");
  }

  // Newton steps that leave the bracket fall back to bisection.
  double t = std::clamp(t0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double ft = f(t);
    if (ft == 0.0) return t;
    if (std::signbit(ft) == std::signbit(flo)) {
      lo = t;
      flo = ft;
    } else {
      hi = t;
    }
    const double slope = df(t);
    double next = slope != 0.0 ? t - ft / slope : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * std::abs(t)) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

double correction_root(double t_eps, const CubicCoefficients& c, int ell_star) {
  if (ell_star < 0) fail("invalid_argument", "ell_star must be non-negative");
  if (!(c.c3 > 0.0)) fail("invalid_argument", "gamma must be positive");
  if (ell_star == 0) return 0.0;
  if (!(t_eps > 1.0)) fail("invalid_argument", "t_eps must exceed 1");
  const double gamma = c.c3;
  const CubicCoefficients shifted{gamma, 3.0 * gamma * t_eps + c.c2,
                                  (3.0 * gamma * t_eps + 2.0 * c.c2) * t_eps + c.c1,
                                  -ell_star * std::log(t_eps)};
  return cardano_unique_real(shifted);
}

}  // namespace gbm
