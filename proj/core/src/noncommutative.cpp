#include "gbm_cutoff/noncommutative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbm_cutoff/cubic.hpp"
#include "gbm_cutoff/error.hpp"
#include "gbm_cutoff/spectral.hpp"

namespace gbm {

SyntheticSystem::SyntheticSystem(MatrixD alpha_, MatrixD beta_, MatrixD Gamma_, MatrixD A_,
                                 Vec x_, double tolerance)
    : alpha(std::move(alpha_)),
      beta(std::move(beta_)),
      Gamma(std::move(Gamma_)),
      A(std::move(A_)),
      x(std::move(x_)),
      tol(tolerance) {
  require_same_dim(alpha, beta);
  require_same_dim(alpha, Gamma);
  require_same_dim(alpha, A);
  require_initial_state(x, A.dim());
  if (!(tol > 0.0) || !std::isfinite(tol)) fail("invalid_tolerance", "tol must be positive");
}

namespace {

bool strictly_stable(const MatrixD& m) { return spectral_abscissa(m) < 0.0; }

double choose_p_gamma(const MatrixD& a, const MatrixD& gamma, std::optional<double> requested) {
  if (requested) {
    if (!(*requested >= 0.0)) fail("invalid_argument", "p_Gamma must be non-negative");
    if (!strictly_stable(a + (0.5 * *requested) * gamma)) {
      fail("not_stable", "A + (p_Gamma/2) Gamma is not Hurwitz");
    }
    return *requested;
  }
  if (strictly_stable(a)) return 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double p = std::ldexp(1.0, k);
    if (strictly_stable(a + (0.5 * p) * gamma)) return p;
  }
  fail("no_stabilizer", "no p in {1, 2, ..., 2^20} makes A + (p/2) Gamma Hurwitz");
}

GammaMatrices assemble(std::optional<MatrixD> c, std::optional<MatrixD> bhat,
                       std::optional<MatrixD> chat, MatrixD a, MatrixD alpha, MatrixD beta,
                       MatrixD gamma, std::optional<double> p_request, bool synthetic,
                       double tol) {
  const double p = choose_p_gamma(a, gamma, p_request);
  MatrixD a_tilde = a + (0.5 * p) * gamma;
  return GammaMatrices{std::move(c),     std::move(bhat),  std::move(chat),
                       std::move(a),     std::move(alpha), std::move(beta),
                       std::move(gamma), p,                std::move(a_tilde),
                       synthetic,        tol};
}

}  // namespace

GammaMatrices gamma_matrices(const GBMSystem& sys, std::optional<double> p_Gamma) {
  MatrixD c = commutator(sys.B, sys.A);
  MatrixD bhat = sys.B + sys.B.adjoint();
  MatrixD chat = c + c.adjoint();
  MatrixD alpha = 0.5 * (bhat * bhat);
  MatrixD beta = 0.5 * (bhat * chat);
  MatrixD gamma = (1.0 / 6.0) * (chat * chat);
  return assemble(std::move(c), std::move(bhat), std::move(chat), sys.A, std::move(alpha),
                  std::move(beta), std::move(gamma), p_Gamma, false, sys.tol);
}

GammaMatrices gamma_matrices(const SyntheticSystem& sys, std::optional<double> p_Gamma) {
  return assemble(std::nullopt, std::nullopt, std::nullopt, sys.A, sys.alpha, sys.beta,
                  sys.Gamma, p_Gamma, true, sys.tol);
}

bool CommutatorLedger::all_pass() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [&](const auto& kv) { return kv.second <= thresholds.at(kv.first); });
}

CommutatorLedger step3_residuals(const GammaMatrices& g, double tol) {
  CommutatorLedger out;
  auto record = [&](const std::string& name, const MatrixD& x, const MatrixD& y) {
    out.residuals[name] = commutator(x, y).norm();
    out.thresholds[name] = tol * (1.0 + x.norm()) * (1.0 + y.norm());
  };
  record("[alpha,beta]", g.alpha, g.beta);
  record("[alpha,Gamma]", g.alpha, g.Gamma);
  record("[beta,Gamma]", g.beta, g.Gamma);
  record("[A,Gamma]", g.A, g.Gamma);
  return out;
}

ModeDecomposition decompose_modes(GammaMatrices g, const Vec& x) {
  require_initial_state(x, g.A.dim());
  const CommutatorLedger ledger = step3_residuals(g, g.tol);
  if (ledger.residuals.at("[A,Gamma]") > ledger.thresholds.at("[A,Gamma]")) {
    fail("not_commuting", "A and Gamma do not commute");
  }
  // A symmetric drift commuting with the family joins it, so degenerate
  // (alpha, beta, Gamma) eigenspaces still split into eigenvectors of A.
  std::vector<MatrixD> family = {g.alpha, g.beta, g.Gamma};
  const double sa = 1.0 + g.A.norm();
  const bool a_joins =
      (g.A - g.A.adjoint()).norm() <= g.tol * sa &&
      commutator(g.A, g.alpha).norm() <= g.tol * sa * (1.0 + g.alpha.norm()) &&
      commutator(g.A, g.beta).norm() <= g.tol * sa * (1.0 + g.beta.norm());
  if (a_joins) family.push_back(g.A);
  const EigDecomposition joint = simultaneous_diagonalize(family, g.tol);
  if (!strictly_stable(g.A_tilde)) fail("not_stable", "A_tilde is not Hurwitz");

  ModeDecomposition out{std::move(g), joint.real_basis(), {}, {}, {}, {}, {}, {}};
  const Vec alpha_diag = congruence_diagonal(out.matrices.alpha, joint);
  const Vec beta_diag = congruence_diagonal(out.matrices.beta, joint);
  const Vec gamma_diag = congruence_diagonal(out.matrices.Gamma, joint);
  const Eigen::Index d = out.basis.cols();
  for (Eigen::Index j = 0; j < d; ++j) {
    out.a_coeffs.push_back(-alpha_diag(j));
    out.b_coeffs.push_back(beta_diag(j));
    out.g_coeffs.push_back(-gamma_diag(j));
    const SpectralAsymptotics s = extract_asymptotics(out.matrices.A_tilde, out.basis.col(j));
    out.lambda.push_back(s.q);
    out.ell.push_back(s.ell);
    out.overlaps.push_back(x.dot(out.basis.col(j)));
  }
  return out;
}

ModeDecomposition mode_decomposition(const GBMSystem& sys) {
  return decompose_modes(gamma_matrices(sys), sys.x);
}

ModeDecomposition mode_decomposition(const SyntheticSystem& sys) {
  return decompose_modes(gamma_matrices(sys), sys.x);
}

double mean_square_first_order(const ModeDecomposition& dec, const Vec& x, double t) {
  if (!(t >= 0.0)) fail("invalid_argument", "t must be non-negative");
  if (x.size() != dec.basis.rows()) fail("dim_mismatch", "initial state dimension mismatch");
  const double p = dec.matrices.p_Gamma;
  Vec inner = Vec::Zero(x.size());
  for (Eigen::Index j = 0; j < dec.basis.cols(); ++j) {
    const double exponent = -0.5 * dec.a_coeffs[j] * t - 0.5 * dec.b_coeffs[j] * t * t -
                            0.5 * dec.g_coeffs[j] * (t * t * t - p * t);
    inner += std::exp(exponent) * x.dot(dec.basis.col(j)) * dec.basis.col(j);
  }
  return (expm(t * dec.matrices.A_tilde.mat()) * inner).squaredNorm();
}

namespace {

// Keeps the indices whose key is extremal (within a relative tie tolerance).
std::vector<std::size_t> keep_extremal(const std::vector<std::size_t>& set,
                                       const std::vector<double>& key, bool minimize) {
  double best = key[set.front()];
  for (std::size_t j : set) best = minimize ? std::min(best, key[j]) : std::max(best, key[j]);
  std::vector<std::size_t> out;
  for (std::size_t j : set) {
    if (std::abs(key[j] - best) <= 1e-9 * (1.0 + std::abs(best))) out.push_back(j);
  }
  return out;
}

}  // namespace

CutoffSchedule cutoff_schedule_first_order(const ModeDecomposition& dec, const Vec& x,
                                           double eps) {
  require_cutoff_eps(eps);
  if (x.size() != dec.basis.rows()) fail("dim_mismatch", "initial state dimension mismatch");
  const std::size_t d = dec.a_coeffs.size();
  std::vector<std::size_t> excited;
  for (std::size_t j = 0; j < d; ++j) {
    if (std::abs(x.dot(dec.basis.col(static_cast<Eigen::Index>(j)))) > 1e-12 * x.norm()) {
      excited.push_back(j);
    }
  }
  if (excited.empty()) fail("x_orthogonal", "x has no component along any mode");

  const double p = dec.matrices.p_Gamma;
  std::vector<double> a_tilde(d);
  std::vector<double> ell(d);
  for (std::size_t j = 0; j < d; ++j) {
    a_tilde[j] = 0.5 * dec.a_coeffs[j] + dec.lambda[j] - 0.5 * p * dec.g_coeffs[j];
    ell[j] = dec.ell[j];
  }

  const auto set1 = keep_extremal(excited, dec.g_coeffs, true);
  const auto set2 = keep_extremal(set1, dec.b_coeffs, true);
  const auto set3 = keep_extremal(set2, a_tilde, true);
  const auto set4 = keep_extremal(set3, ell, false);

  CutoffSchedule out;
  out.eps = eps;
  out.gamma = 0.5 * dec.g_coeffs[set1.front()];
  out.b = 0.5 * dec.b_coeffs[set2.front()];
  out.a = a_tilde[set3.front()];
  out.ell_star = dec.ell[set4.front()] - 1;
  out.selected_mode = static_cast<int>(set4.front());

  if (!(*out.gamma > 1e-12)) {
    out.regime = Regime::no_decay;
    out.diagnostic = "selected mode has gamma <= 0: no cubic decay; when [A,B] = O use the "
                     "commutative schedule";
    return out;
  }
  out.regime = dec.matrices.synthetic ? Regime::synthetic : Regime::first_order;
  const CubicCoefficients cubic = cutoff_cubic(*out.gamma, *out.b, *out.a, eps);
  const double t = cardano_unique_real(cubic);
  out.t_eps = t;
  out.w_eps = 1.0 / (t * t);
  out.T_eps = solve_log_cubic(cubic, *out.ell_star);
  if (*out.ell_star == 0 || t > 1.0) {
    out.r_eps = correction_root(t, cubic, *out.ell_star);
    out.tau_eps = t + *out.r_eps;
  }
  return out;
}

Eigen::MatrixXd gaussian_exponential_mean(const MatrixD& bhat, const MatrixD& chat, double t) {
  require_same_dim(bhat, chat);
  const Eigen::MatrixXd& b = bhat.mat();
  const Eigen::MatrixXd& c = chat.mat();
  return expm(0.5 * (t * b * b - t * t * b * c + (t * t * t / 3.0) * c * c));
}

Example35Point example35_check(double t) {
  if (!(t >= 0.2)) fail("invalid_argument", "example requires t >= 0.2");
  Example35Point out;
  out.x = std::exp(-t * t * t - t * t);
  const double lx = std::log(out.x);

  // Principal complex branches: for t < 1/3 the square-root argument is
  // negative, R lies on the unit circle and g stays real.
  const Complex radicand(27.0 * lx * lx + 4.0 * lx, 0.0);
  const Complex r = -13.5 * lx + 1.5 * std::sqrt(3.0) * std::sqrt(radicand) - 1.0;
  Complex cube_root;
  if (r.imag() == 0.0) {
    cube_root = Complex(std::cbrt(r.real()), 0.0);
  } else {
    cube_root = std::pow(r, 1.0 / 3.0);
  }
  const Complex g = cube_root / 3.0 + 1.0 / (3.0 * cube_root) - 1.0 / 3.0;
  if (std::abs(g.imag()) > 1e-9) fail("branch_violation", "g(x) is not real on this branch");
  out.g_of_x = g.real();
  out.f_of_x = -out.x * (3.0 * out.g_of_x * out.g_of_x + 2.0 * out.g_of_x);
  return out;
}

}  // namespace gbm
