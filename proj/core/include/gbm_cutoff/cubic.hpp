#pragma once

namespace gbm {

// c3 t^3 + c2 t^2 + c1 t + c0
struct CubicCoefficients {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double t) const { return ((c3 * t + c2) * t + c1) * t + c0; }
  double derivative(double t) const { return (3.0 * c3 * t + 2.0 * c2) * t + c1; }
};

// gamma t^3 + b t^2 + a t + ln(eps)
CubicCoefficients cutoff_cubic(double gamma, double b, double a, double eps);

// t = s - c2 / (3 c3) turns the cubic into s^3 + p s + q.
struct DepressedCubic {
  double p = 0.0;
  double q = 0.0;
  double shift = 0.0;  // -c2 / (3 c3)

  double discriminant() const;  // (q/2)^2 + (p/3)^3
};

DepressedCubic depress(const CubicCoefficients& c);

// The single real root by Cardano's radicals followed by Newton polishing.
// Three distinct real roots raise "ambiguous_roots"; c3 == 0 falls back to the
// quadratic/linear case.
double cardano_unique_real(const CubicCoefficients& c);

// Root of c3 T^3 + c2 T^2 + c1 T - ell_star ln T + c0, bracketed in
// [t0 / 2, 4 t0] around the Cardano root t0 of the ell_star = 0 cubic.
double solve_log_cubic(const CubicCoefficients& c, int ell_star);

// r with gamma r^3 + (3 gamma t + b) r^2 + (3 gamma t^2 + 2 b t + a) r
//        - ell_star ln t = 0, so that t + r approximates the log-cubic root.
double correction_root(double t_eps, const CubicCoefficients& c, int ell_star);

}  // namespace gbm
