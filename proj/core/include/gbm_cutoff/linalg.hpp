#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gbm {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Relative tolerance for every "bracket equals O" decision.
inline constexpr double kDefaultTol = 1e-10;
// Relative gap below which two eigenvalues are treated as one cluster.
inline constexpr double kClusterGap = 1e-7;

// Dense real square matrix with at least one row and finite entries.
class MatrixD {
 public:
  explicit MatrixD(Eigen::MatrixXd m);

  static MatrixD zero(Eigen::Index d);
  static MatrixD identity(Eigen::Index d);
  static MatrixD diagonal(const std::vector<double>& entries);
  static MatrixD from_rows(const std::vector<std::vector<double>>& rows);
  // Matrix unit with a single 1 at (row, col), zero-based.
  static MatrixD unit(Eigen::Index d, Eigen::Index row, Eigen::Index col);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXd& mat() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  MatrixD adjoint() const;
  double norm() const;  // Frobenius
  std::vector<std::vector<double>> rows() const;

  friend MatrixD operator+(const MatrixD& a, const MatrixD& b);
  friend MatrixD operator-(const MatrixD& a, const MatrixD& b);
  friend MatrixD operator*(const MatrixD& a, const MatrixD& b);
  friend MatrixD operator*(double s, const MatrixD& a);
  friend MatrixD operator-(const MatrixD& a);

 private:
  Eigen::MatrixXd m_;
};

void require_same_dim(const MatrixD& a, const MatrixD& b);

// [U, V] = UV - VU.
MatrixD commutator(const MatrixD& u, const MatrixD& v);

// exp(U) by Pade scaling and squaring.
MatrixD matrix_exp(const MatrixD& u);
// Same algorithm without the finiteness re-check, for inner simulation loops.
Eigen::MatrixXd expm(const Eigen::MatrixXd& u);

// max Re(lambda) over spec(U).
double spectral_abscissa(const MatrixD& u);
bool is_hurwitz(const MatrixD& u, double margin);

struct EigenCluster {
  Complex value;          // cluster mean
  Eigen::Index offset;    // first basis index belonging to the cluster
  Eigen::Index size;      // algebraic multiplicity
};

struct EigDecomposition {
  std::vector<Complex> eigenvalues;  // one per basis vector
  std::vector<CVec> basis;
  std::vector<int> jordan_heights;   // one per cluster
  std::vector<EigenCluster> clusters;
  bool orthonormal = false;

  // Basis vectors as columns of a real matrix; imaginary parts are dropped.
  Eigen::MatrixXd real_basis() const;
};

// Generalized eigenspaces of an arbitrary real matrix, clustered with
// kClusterGap. Each cluster's chain height is the smallest k with
// (U - lambda)^k vanishing on its generalized eigenspace.
EigDecomposition eig(const MatrixD& u);
bool is_diagonalizable(const MatrixD& u);

EigDecomposition sym_eig(const MatrixD& u, double tol = kDefaultTol);

// One orthonormal basis diagonalizing every member of a commuting family of
// symmetric matrices. `eigenvalues` holds the diagonal of the first member;
// use congruence_diagonal for the others.
EigDecomposition simultaneous_diagonalize(std::span<const MatrixD> family,
                                          double tol = kDefaultTol);

// Diagonal of V^T U V for the (real) basis V.
Vec congruence_diagonal(const MatrixD& u, const EigDecomposition& dec);

// Frobenius norm of the off-diagonal part of V^T U V.
double offdiagonal_residual(const MatrixD& u, const EigDecomposition& dec);

}  // namespace gbm
