#include "gbm_cutoff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gbm_cutoff/error.hpp"

namespace gbm {

namespace {

constexpr double kComponentThreshold = 1e-9;
constexpr int kGridPoints = 10000;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Golden-section search for an extremum of f on [lo, hi]; sign = +1 finds a
// minimum, -1 a maximum. Returns the extremal value.
template <typename F>
double golden_extremum(F&& f, double lo, double hi, double sign) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sign * f(c), fd = sign * f(d);
  for (int it = 0; it < 100 && (b - a) > 1e-13 * (1.0 + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sign * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sign * f(d);
    }
  }
  return sign * std::min({fc, fd, sign * f(lo), sign * f(hi)});
}

}  // namespace

CVec SpectralAsymptotics::oscillation(double t) const {
  CVec sum = CVec::Zero(vs.front().size());
  for (int k = 0; k < m; ++k) sum += std::exp(Complex(0.0, thetas[k] * t)) * vs[k];
  return sum;
}

SpectralAsymptotics extract_asymptotics(const MatrixD& Q, const Vec& y, double margin) {
  if (y.size() != Q.dim()) fail("dim_mismatch", "vector length differs from matrix dimension");
  const double ynorm = y.norm();
  if (ynorm == 0.0) fail("zero_vector", "y must be nonzero");
  if (!is_hurwitz(Q, margin)) fail("not_stable", "matrix is not Hurwitz stable");

  const EigDecomposition dec = eig(Q);
  const Eigen::Index d = Q.dim();
  Eigen::MatrixXcd basis(d, d);
  for (Eigen::Index j = 0; j < d; ++j) basis.col(j) = dec.basis[j];
  const CVec coords = basis.fullPivLu().solve(y.cast<Complex>());

  struct Excited {
    Complex lambda;
    CVec component;
  };
  std::vector<Excited> excited;
  for (const auto& cl : dec.clusters) {
    CVec z = basis.middleCols(cl.offset, cl.size) * coords.segment(cl.offset, cl.size);
    if (z.norm() > kComponentThreshold * ynorm) excited.push_back({cl.value, std::move(z)});
  }
  if (excited.empty()) fail("eig_failure", "no generalized eigenspace carries y");

  double lead_re = -std::numeric_limits<double>::infinity();
  for (const auto& e : excited) lead_re = std::max(lead_re, e.lambda.real());
  const double scale = std::max(Q.norm(), 1e-300);
  const double re_gap = kClusterGap * std::max(std::abs(lead_re), scale);

  // For each leading eigenvalue, the chain height attained by y's component.
  const Eigen::MatrixXcd qc = Q.mat().cast<Complex>();
  struct Leading {
    Complex lambda;
    int height;
    CVec top;  // (Q - lambda)^{height-1} z / (height-1)!
  };
  std::vector<Leading> leading;
  for (const auto& e : excited) {
    if (e.lambda.real() < lead_re - re_gap) continue;
    const Eigen::MatrixXcd shifted = qc - e.lambda * Eigen::MatrixXcd::Identity(d, d);
    CVec chain = e.component;
    int height = 1;
    CVec top = chain;
    for (Eigen::Index k = 1; k < d; ++k) {
      chain = shifted * chain;
      const double threshold = 1e-6 * e.component.norm() * std::pow(std::max(1.0, scale), k);
      if (chain.norm() <= threshold) break;
      height = static_cast<int>(k) + 1;
      top = chain;
    }
    leading.push_back({e.lambda, height, top / factorial(height - 1)});
  }

  SpectralAsymptotics out;
  out.q = -lead_re;
  for (const auto& l : leading) out.ell = std::max(out.ell, l.height);
  for (const auto& l : leading) {
    if (l.height != out.ell) continue;
    out.thetas.push_back(l.lambda.imag());
    out.vs.push_back(l.top);
  }
  out.m = static_cast<int>(out.vs.size());

  if (out.m == 1) {
    out.K0 = out.K1 = out.vs.front().norm();
    return out;
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < out.m; ++i)
    for (int j = i + 1; j < out.m; ++j)
      min_gap = std::min(min_gap, std::abs(out.thetas[i] - out.thetas[j]));
  const double horizon = 200.0 * std::numbers::pi / min_gap;
  const double step = horizon / (kGridPoints - 1);
  auto magnitude = [&](double t) { return out.oscillation(t).norm(); };

  std::vector<double> grid(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) grid[i] = magnitude(i * step);

  // Polish every grid-local extremum so that the bounds hold between nodes.
  double k0 = *std::min_element(grid.begin(), grid.end());
  double k1 = *std::max_element(grid.begin(), grid.end());
  for (int i = 0; i < kGridPoints; ++i) {
    const double left = i > 0 ? grid[i - 1] : grid[i];
    const double right = i + 1 < kGridPoints ? grid[i + 1] : grid[i];
    const double lo = std::max(0.0, (i - 1) * step);
    const double hi = std::min(horizon, (i + 1) * step);
    if (grid[i] <= left && grid[i] <= right) k0 = std::min(k0, golden_extremum(magnitude, lo, hi, 1.0));
    if (grid[i] >= left && grid[i] >= right) k1 = std::max(k1, golden_extremum(magnitude, lo, hi, -1.0));
  }
  out.K0 = k0;
  out.K1 = k1;
  return out;
}

double asymptotic_residual(const MatrixD& Q, const Vec& y, const SpectralAsymptotics& s,
                           double t) {
  const Eigen::Index d = Q.dim();
  // e^{qt} exp(tQ) = exp(t (Q + q I)) avoids underflow at large t.
  const Eigen::MatrixXd shifted = t * (Q.mat() + s.q * Eigen::MatrixXd::Identity(d, d));
  const Vec scaled = expm(shifted) * y / std::pow(t, s.ell - 1);
  return (scaled.cast<Complex>() - s.oscillation(t)).norm();
}

}  // namespace gbm
