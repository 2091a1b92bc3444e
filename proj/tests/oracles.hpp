#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace oracle {

// exp(U) as a truncated Taylor series on U / 2^s, squared back s times.
inline Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd& u, int terms = 30) {
  int s = 0;
  const double n = u.cwiseAbs().rowwise().sum().maxCoeff();
  if (n > 0.5) s = static_cast<int>(std::ceil(std::log2(n / 0.5)));
  const Eigen::MatrixXd v = u / std::ldexp(1.0, s);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(u.rows(), u.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < terms; ++k) {
    term = term * v / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// Plain bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Expands [0, hi] by doubling until f changes sign, then bisects. Assumes f(0) < 0.
inline double first_positive_root(const std::function<double(double)>& f) {
  double hi = 1.0;
  while (f(hi) < 0) hi *= 2.0;
  return bisect(f, 0.0, hi);
}

}  // namespace oracle
