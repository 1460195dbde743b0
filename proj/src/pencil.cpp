#include "spectra/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "spectra/error.hpp"

namespace spectra {

namespace {

// Index of the first nonpositive pivot in an unpivoted Cholesky of B, or -1.
Eigen::Index failing_pivot(const Eigen::MatrixXd& B, double& pivot_value) {
  const Eigen::Index n = B.rows();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = B(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      pivot_value = d;
      return j;
    }
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i)
      L(i, j) = (B(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
  }
  return -1;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& X, const char* what) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-12);
  if (qr.rank() < X.cols())
    throw InputError(std::string("subspace_gap: ") + what + " block is rank deficient");
  return qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), X.cols());
}

double directed_gap(const Eigen::MatrixXd& Qu, const Eigen::MatrixXd& Qv) {
  if (Qu.cols() > Qv.cols()) return 1.0;
  const Eigen::MatrixXd residual = Qu - Qv * (Qv.transpose() * Qu);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return std::min(1.0, svd.singularValues()(0));
}

}  // namespace

Pencil make_pencil(Eigen::MatrixXd A, Eigen::MatrixXd B, bool symmetric,
                   Definiteness b_definiteness) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw InputError("pencil matrices must be square and of equal size");
  Pencil p;
  p.a_symmetric = is_symmetric(A);
  p.b_symmetric = is_symmetric(B);
  if (symmetric && !(p.a_symmetric && p.b_symmetric))
    throw InputError("pencil declared symmetric but max |M - M^T| exceeds 1e-12 ||M||");
  p.b_definiteness = b_definiteness;
  p.A = std::move(A);
  p.B = std::move(B);
  return p;
}

void assign_clusters(Spectrum& s, double rel_radius) {
  s.cluster_radius = rel_radius;
  s.cluster.assign(s.values.size(), 0);
  s.cluster_size.clear();
  Eigen::Index start = 0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const bool imag_differs = s.imag.size() == s.values.size() &&
                              std::abs(s.imag[i] - s.imag[start]) > rel_radius;
    const double scale = std::max({1.0, std::abs(s.values[i]), std::abs(s.values[start])});
    if (i == 0 || imag_differs || std::abs(s.values[i] - s.values[start]) > rel_radius * scale) {
      start = i;
      s.cluster_size.push_back(0);
    }
    s.cluster[i] = static_cast<int>(s.cluster_size.size()) - 1;
    ++s.cluster_size.back();
  }
}

Spectrum solve_symdef(const Pencil& pencil, bool want_vectors) {
  const Eigen::MatrixXd& A = pencil.A;
  const Eigen::MatrixXd& B = pencil.B;
  if (!pencil.a_symmetric || !pencil.b_symmetric)
    throw InputError("solve_symdef needs a symmetric pencil");

  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success) {
    double value = 0.0;
    const Eigen::Index j = failing_pivot(B, value);
    std::ostringstream msg;
    msg << "B is not positive definite: Cholesky pivot " << j << " = " << value;
    throw NumericalError(msg.str());
  }
  // C = L^{-1} A L^{-T}
  const auto L = llt.matrixL();
  Eigen::MatrixXd C = L.solve(A);
  C = L.solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      C, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("symmetric QR iteration did not converge");

  Spectrum s;
  s.values = eig.eigenvalues();
  s.imag = Eigen::VectorXd::Zero(s.values.size());
  if (want_vectors) {
    s.vectors = llt.matrixU().solve(eig.eigenvectors());
    const double a_norm = A.norm(), b_norm = B.norm();
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
      const Eigen::VectorXd v = s.vectors.col(i);
      const double r = (A * v - s.values[i] * (B * v)).norm() /
                       ((a_norm + std::abs(s.values[i]) * b_norm) * v.norm());
      s.max_residual = std::max(s.max_residual, r);
    }
  }
  assign_clusters(s);
  return s;
}

double condition_estimate(const Eigen::MatrixXd& B) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

Spectrum solve_general(const Pencil& pencil, bool want_vectors) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(pencil.B);
  const double rc = lu.rcond();
  if (!(rc > 1e-12)) {
    std::ostringstream msg;
    msg << "B is ill-conditioned (condition estimate " << (rc > 0 ? 1.0 / rc : INFINITY) << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::MatrixXd C = lu.solve(pencil.A);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(C, want_vectors);
  if (eig.info() != Eigen::Success)
    throw NumericalError("shifted QR iteration did not converge within the iteration cap");

  const Eigen::VectorXcd lambda = eig.eigenvalues();
  const Eigen::Index n = lambda.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto reported = [&](Eigen::Index i) {
    std::complex<double> z = lambda[i];
    if (std::abs(z.imag()) <= 1e-8 * std::abs(z)) z.imag(0.0);
    return z;
  };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto za = reported(a), zb = reported(b);
    if (std::abs(za) != std::abs(zb)) return std::abs(za) < std::abs(zb);
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });

  Spectrum s;
  s.values.resize(n);
  s.imag.resize(n);
  if (want_vectors) s.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto z = reported(order[k]);
    s.values[k] = z.real();
    s.imag[k] = z.imag();
    if (want_vectors) {
      Eigen::VectorXd v = eig.eigenvectors().col(order[k]).real();
      if (v.norm() > 0) v.normalize();
      s.vectors.col(k) = v;
    }
  }
  assign_clusters(s);
  return s;
}

Spectrum lowest_eigenpairs(const Eigen::SparseMatrix<double>& A,
                           const Eigen::SparseMatrix<double>& B, int m,
                           const SubspaceOptions& opt) {
  const Eigen::Index n = A.rows();
  if (m < 1 || m > n) throw InputError("requested eigenvalue count out of range");
  const int p = static_cast<int>(std::min<Eigen::Index>(n, opt.block > 0 ? opt.block : 2 * m));

  const Eigen::SparseMatrix<double> shifted = A + opt.shift * B;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw NumericalError("shifted operator A + shift*B is not positive definite");

  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = uni(rng);

  Eigen::VectorXd previous = Eigen::VectorXd::Constant(m, INFINITY);
  Eigen::VectorXd lambda;
  Eigen::MatrixXd ritz;
  int settled = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    Eigen::MatrixXd Y = ldlt.solve(B * X);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);

    // Ritz pairs from  Y'BY z = mu Y'(A + shift B)Y z, mu = 1/(lambda + shift)
    Eigen::MatrixXd Sp = Y.transpose() * (shifted * Y);
    Eigen::MatrixXd Bp = Y.transpose() * (B * Y);
    Sp = 0.5 * (Sp + Sp.transpose()).eval();
    Bp = 0.5 * (Bp + Bp.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(Bp, Sp);
    if (small.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz step failed");
    // mu ascending -> lambda descending; reverse
    const Eigen::VectorXd mu = small.eigenvalues().reverse();
    ritz = small.eigenvectors().rowwise().reverse();
    lambda = (1.0 / mu.array()).matrix() - Eigen::VectorXd::Constant(p, opt.shift);
    X = Y * ritz;

    const Eigen::VectorXd head = lambda.head(m);
    const double floor = std::max(1e-300, 1e-3 * head.cwiseAbs().maxCoeff());
    const double change =
        ((head - previous).array().abs() / head.array().abs().max(floor)).maxCoeff();
    previous = head;
    settled = change <= opt.tol ? settled + 1 : 0;
    if (settled >= 2) break;
    if (it + 1 == opt.max_iter)
      throw NumericalError("subspace iteration did not reach tolerance");
  }

  Spectrum s;
  s.values = lambda.head(m);
  s.imag = Eigen::VectorXd::Zero(m);
  s.vectors = X.leftCols(m);
  // B-normalize when B is definite on the Ritz vectors
  for (int j = 0; j < m; ++j) {
    const double nb = std::sqrt(std::max(0.0, s.vectors.col(j).dot(B * s.vectors.col(j))));
    if (nb > 0) s.vectors.col(j) /= nb;
  }
  assign_clusters(s);
  return s;
}

double subspace_gap(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                    const Eigen::MatrixXd& gram) {
  if (U.rows() != V.rows() || gram.rows() != U.rows() || gram.cols() != U.rows())
    throw InputError("subspace_gap: ambient dimensions differ");
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw InputError("subspace_gap: Gram matrix is not SPD");
  const Eigen::MatrixXd LtU = llt.matrixU() * U;
  const Eigen::MatrixXd LtV = llt.matrixU() * V;
  const Eigen::MatrixXd Qu = orthonormal_basis(LtU, "first");
  const Eigen::MatrixXd Qv = orthonormal_basis(LtV, "second");
  return std::max(directed_gap(Qu, Qv), directed_gap(Qv, Qu));
}

double subspace_gap(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
  return subspace_gap(U, V, Eigen::MatrixXd::Identity(U.rows(), U.rows()));
}

}  // namespace spectra
