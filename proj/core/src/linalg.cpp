#include "gbm_cutoff/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gbm_cutoff/error.hpp"

namespace gbm {

MatrixD::MatrixD(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() == 0) fail("empty_matrix", "matrix must have dimension >= 1");
  if (m_.rows() != m_.cols()) fail("not_square", "matrix must be square");
  if (!m_.allFinite()) fail("non_finite", "matrix entries must be finite");
}

MatrixD MatrixD::zero(Eigen::Index d) {
  return MatrixD(Eigen::MatrixXd::Zero(d, d));
}

MatrixD MatrixD::identity(Eigen::Index d) {
  return MatrixD(Eigen::MatrixXd::Identity(d, d));
}

MatrixD MatrixD::diagonal(const std::vector<double>& entries) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
      entries.data(), static_cast<Eigen::Index>(entries.size()));
  return MatrixD(v.asDiagonal().toDenseMatrix());
}

MatrixD MatrixD::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  if (d == 0) fail("empty_matrix", "matrix must have at least one row");
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d) {
      fail("not_square", "row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) +
                             " entries, expected " + std::to_string(d));
    }
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return MatrixD(std::move(m));
}

MatrixD MatrixD::unit(Eigen::Index d, Eigen::Index row, Eigen::Index col) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m(row, col) = 1.0;
  return MatrixD(std::move(m));
}

MatrixD MatrixD::adjoint() const { return MatrixD(m_.transpose()); }

double MatrixD::norm() const { return m_.norm(); }

std::vector<std::vector<double>> MatrixD::rows() const {
  std::vector<std::vector<double>> out(m_.rows(), std::vector<double>(m_.cols()));
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) out[i][j] = m_(i, j);
  return out;
}

void require_same_dim(const MatrixD& a, const MatrixD& b) {
  if (a.dim() != b.dim()) {
    fail("dim_mismatch", "dimensions " + std::to_string(a.dim()) + " and " +
                             std::to_string(b.dim()) + " differ");
  }
}

MatrixD operator+(const MatrixD& a, const MatrixD& b) {
  require_same_dim(a, b);
  return MatrixD(a.m_ + b.m_);
}

MatrixD operator-(const MatrixD& a, const MatrixD& b) {
  require_same_dim(a, b);
  return MatrixD(a.m_ - b.m_);
}

MatrixD operator*(const MatrixD& a, const MatrixD& b) {
  require_same_dim(a, b);
  return MatrixD(a.m_ * b.m_);
}

MatrixD operator*(double s, const MatrixD& a) { return MatrixD(s * a.m_); }

MatrixD operator-(const MatrixD& a) { return MatrixD(-a.m_); }

MatrixD commutator(const MatrixD& u, const MatrixD& v) {
  require_same_dim(u, v);
  return MatrixD(u.mat() * v.mat() - v.mat() * u.mat());
}

namespace {

// Higham (2005) Pade degrees and their 1-norm thresholds.
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

Eigen::MatrixXd pade_low(const Eigen::MatrixXd& a, int degree) {
  static const std::vector<std::vector<double>> kCoeffs = {
      {120., 60., 12., 1.},
      {30240., 15120., 3360., 420., 30., 1.},
      {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.},
      {17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160.,
       110880., 3960., 90., 1.}};
  const auto& b = kCoeffs[(degree - 3) / 2];
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd u = b[1] * power;
  Eigen::MatrixXd v = b[0] * power;
  for (int k = 2; k <= degree; k += 2) {
    power = power * a2;
    u += b[k + 1] * power;
    v += b[k] * power;
  }
  u = a * u;
  return (v - u).partialPivLu().solve(v + u);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000., 32382376266240000., 7771770303897600.,
      1187353796428800.,  129060195264000.,   10559470521600.,
      670442572800.,      33522128640.,       1323241920.,
      40840800.,          960960.,            16380.,
      182.,               1.};
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  Eigen::MatrixXd u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                      b[5] * a4 + b[3] * a2 + b[1] * id;
  u = a * u;
  const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& u) {
  const double norm1 = u.cwiseAbs().colwise().sum().maxCoeff();
  for (int i = 0; i < static_cast<int>(kTheta.size()); ++i) {
    if (norm1 <= kTheta[i]) return pade_low(u, 3 + 2 * i);
  }
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
  }
  Eigen::MatrixXd r = pade13(u / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

MatrixD matrix_exp(const MatrixD& u) { return MatrixD(expm(u.mat())); }

namespace {

Eigen::VectorXcd eigenvalues_of(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) fail("eig_failure", "eigenvalue iteration did not converge");
  return solver.eigenvalues();
}

// Greedy single-linkage clustering on eigenvalues sorted by (re, im).
std::vector<std::vector<Complex>> cluster_eigenvalues(const Eigen::VectorXcd& values,
                                                      double scale) {
  std::vector<Complex> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  std::vector<std::vector<Complex>> clusters;
  for (const auto& lambda : sorted) {
    bool placed = false;
    for (auto& c : clusters) {
      for (const auto& mu : c) {
        const double gap = kClusterGap * std::max({std::abs(lambda), std::abs(mu), scale});
        if (std::abs(lambda - mu) <= gap) {
          c.push_back(lambda);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) clusters.push_back({lambda});
  }
  return clusters;
}

}  // namespace

double spectral_abscissa(const MatrixD& u) {
  return eigenvalues_of(u.mat()).real().maxCoeff();
}

bool is_hurwitz(const MatrixD& u, double margin) {
  if (margin < 0.0) fail("invalid_argument", "margin must be non-negative");
  return spectral_abscissa(u) < -margin;
}

Eigen::MatrixXd EigDecomposition::real_basis() const {
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd out(basis.empty() ? 0 : basis.front().size(), d);
  for (Eigen::Index j = 0; j < d; ++j) out.col(j) = basis[j].real();
  return out;
}

EigDecomposition eig(const MatrixD& u) {
  const Eigen::Index d = u.dim();
  const double scale = std::max(u.norm(), 1e-300);
  const auto groups = cluster_eigenvalues(eigenvalues_of(u.mat()), scale);

  EigDecomposition out;
  const Eigen::MatrixXcd uc = u.mat().cast<Complex>();
  for (const auto& group : groups) {
    Complex mean = std::accumulate(group.begin(), group.end(), Complex(0.0, 0.0)) /
                   static_cast<double>(group.size());
    const bool real_cluster = std::abs(mean.imag()) <= kClusterGap * scale;
    if (real_cluster) mean = Complex(mean.real(), 0.0);
    const auto m = static_cast<Eigen::Index>(group.size());

    const Eigen::MatrixXcd shifted = uc - mean * Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(d, d);
    for (Eigen::Index k = 0; k < m; ++k) power = power * shifted;

    // Generalized eigenspace: the m right singular vectors of (U - lambda)^m
    // with the smallest singular values.
    Eigen::MatrixXcd space;
    if (real_cluster) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(power.real(), Eigen::ComputeFullV);
      space = svd.matrixV().rightCols(m).cast<Complex>();
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(power, Eigen::ComputeFullV);
      space = svd.matrixV().rightCols(m);
    }

    int height = static_cast<int>(m);
    Eigen::MatrixXcd chain = space;
    for (int k = 1; k <= m; ++k) {
      chain = shifted * chain;
      const double threshold = 1e-6 * std::pow(std::max(1.0, scale), k);
      if (chain.norm() <= threshold) {
        height = k;
        break;
      }
    }

    out.clusters.push_back({mean, static_cast<Eigen::Index>(out.basis.size()), m});
    out.jordan_heights.push_back(height);
    for (Eigen::Index k = 0; k < m; ++k) {
      out.basis.push_back(space.col(k));
      out.eigenvalues.push_back(mean);
    }
  }
  return out;
}

bool is_diagonalizable(const MatrixD& u) {
  const auto dec = eig(u);
  return std::all_of(dec.jordan_heights.begin(), dec.jordan_heights.end(),
                     [](int h) { return h == 1; });
}

namespace {

void require_symmetric(const MatrixD& u, double tol) {
  const double asym = (u.mat() - u.mat().transpose()).norm();
  if (asym > tol * (1.0 + u.norm())) {
    fail("not_symmetric", "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
}

}  // namespace

EigDecomposition sym_eig(const MatrixD& u, double tol) {
  require_symmetric(u, tol);
  const Eigen::MatrixXd sym = 0.5 * (u.mat() + u.mat().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) fail("eig_failure", "symmetric eigensolver failed");

  EigDecomposition out;
  out.orthonormal = true;
  const Eigen::Index d = u.dim();
  for (Eigen::Index j = 0; j < d; ++j) {
    out.eigenvalues.emplace_back(solver.eigenvalues()(j), 0.0);
    out.basis.push_back(solver.eigenvectors().col(j).cast<Complex>());
    out.clusters.push_back({out.eigenvalues.back(), j, 1});
    out.jordan_heights.push_back(1);
  }
  return out;
}

EigDecomposition simultaneous_diagonalize(std::span<const MatrixD> family, double tol) {
  if (family.empty()) fail("invalid_argument", "empty matrix family");
  const Eigen::Index d = family.front().dim();
  for (const auto& m : family) {
    require_same_dim(family.front(), m);
    require_symmetric(m, tol);
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const double r = commutator(family[i], family[j]).norm();
      if (r > tol * (1.0 + family[i].norm() * family[j].norm())) {
        fail("not_commuting", "family members " + std::to_string(i) + " and " +
                                  std::to_string(j) + " do not commute");
      }
    }
  }

  // Refine a partition of an orthonormal basis: diagonalize each member on
  // every current block, then split blocks along its eigenvalue clusters.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(d, d);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks = {{0, d}};
  for (const auto& member : family) {
    const Eigen::MatrixXd sym = 0.5 * (member.mat() + member.mat().transpose());
    const double scale = std::max(member.norm(), 1e-300);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> next;
    for (const auto& [start, size] : blocks) {
      const Eigen::MatrixXd q = basis.middleCols(start, size);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q.transpose() * sym * q);
      if (solver.info() != Eigen::Success) fail("eig_failure", "symmetric eigensolver failed");
      basis.middleCols(start, size) = q * solver.eigenvectors();
      const Eigen::VectorXd& values = solver.eigenvalues();
      Eigen::Index run_start = 0;
      for (Eigen::Index k = 1; k <= size; ++k) {
        if (k == size || values(k) - values(k - 1) > kClusterGap * scale) {
          next.emplace_back(start + run_start, k - run_start);
          run_start = k;
        }
      }
    }
    blocks = std::move(next);
  }

  EigDecomposition out;
  out.orthonormal = true;
  for (Eigen::Index j = 0; j < d; ++j) out.basis.push_back(basis.col(j).cast<Complex>());
  for (const auto& member : family) {
    if (offdiagonal_residual(member, out) > 1e-8 * (1.0 + member.norm())) {
      fail("joint_diag_failure", "off-diagonal residual exceeds 1e-8");
    }
  }
  const Vec first = congruence_diagonal(family.front(), out);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.eigenvalues.emplace_back(first(j), 0.0);
    out.clusters.push_back({out.eigenvalues.back(), j, 1});
    out.jordan_heights.push_back(1);
  }
  return out;
}

Vec congruence_diagonal(const MatrixD& u, const EigDecomposition& dec) {
  const Eigen::MatrixXd v = dec.real_basis();
  return (v.transpose() * u.mat() * v).diagonal();
}

double offdiagonal_residual(const MatrixD& u, const EigDecomposition& dec) {
  const Eigen::MatrixXd v = dec.real_basis();
  Eigen::MatrixXd m = v.transpose() * u.mat() * v;
  m.diagonal().setZero();
  return m.norm();
}

}  // namespace gbm
