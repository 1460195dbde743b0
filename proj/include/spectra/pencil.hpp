#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace spectra {

enum class Definiteness { positive_definite, positive_semidefinite, indefinite };

// A matrix pencil (A, B) for A v = lambda B v.
struct Pencil {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  bool a_symmetric = false;
  bool b_symmetric = false;
  Definiteness b_definiteness = Definiteness::indefinite;

  Eigen::Index size() const { return A.rows(); }
};

// Builds a pencil and checks the symmetry flags against the data
// (max |M - M^T| <= 1e-12 ||M||). Throws InputError on shape mismatch or when
// a symmetric flag is requested for a matrix that is not symmetric.
Pencil make_pencil(Eigen::MatrixXd A, Eigen::MatrixXd B, bool symmetric,
                   Definiteness b_definiteness);

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double rel_tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

struct Provenance {
  std::string method;
  std::string param;
  std::string domain;
};

// Ordered eigenvalues with multiplicity clustering.
//
// Symmetric solves are ascending. General solves are ordered by modulus, with
// `imag` holding the imaginary parts (zero for eigenvalues reported real).
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::VectorXd imag;
  Eigen::MatrixXd vectors;      // optional, one column per value
  std::vector<int> cluster;     // cluster id per value
  std::vector<int> cluster_size;
  double cluster_radius = 1e-6;
  double max_residual = 0.0;    // relative pencil residual, when computed
  int zero_modes = 0;           // leading values flagged as zero modes
  Provenance provenance;

  Eigen::Index size() const { return values.size(); }
  int multiplicity(Eigen::Index i) const { return cluster_size[cluster[i]]; }
  bool has_vectors() const { return vectors.cols() == values.size() && values.size() > 0; }
};

// Groups consecutive values whose distance to the first member of their
// cluster is at most rel_radius * max(1, |value|).
void assign_clusters(Spectrum& s, double rel_radius = 1e-6);

// Symmetric-definite solve: Cholesky reduction of B, tridiagonalization and
// implicit-shift QR. Throws NumericalError naming the failing pivot when B is
// not positive definite.
Spectrum solve_symdef(const Pencil& pencil, bool want_vectors = false);

// General pencil through B^{-1} A with Hessenberg/shifted-QR. Eigenvalues with
// |imag| <= 1e-8 |lambda| are reported real. Throws NumericalError when B is
// too ill-conditioned (estimate above 1e12) or the iteration does not converge.
Spectrum solve_general(const Pencil& pencil, bool want_vectors = false);

// Condition-number estimate of B from its LU factorization.
double condition_estimate(const Eigen::MatrixXd& B);

struct SubspaceOptions {
  int block = 0;          // 0 selects 2m
  double tol = 1e-10;
  int max_iter = 2000;
  double shift = 0.0;     // iterate with (A + shift B)^{-1} B
  unsigned seed = 12345;
};

// Lowest m eigenpairs of the sparse symmetric pencil (A, B) by subspace
// iteration with Rayleigh-Ritz; A + shift B must be positive definite and B
// positive semidefinite.
Spectrum lowest_eigenpairs(const Eigen::SparseMatrix<double>& A,
                           const Eigen::SparseMatrix<double>& B, int m,
                           const SubspaceOptions& opt = {});

// Gap between the column spans of U and V in the norm induced by the
// symmetric positive-definite Gram matrix G:
// max(delta(U,V), delta(V,U)), delta(U,V) = sup_{u in U, |u|=1} dist(u, V).
double subspace_gap(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                    const Eigen::MatrixXd& gram);
double subspace_gap(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);

}  // namespace spectra
