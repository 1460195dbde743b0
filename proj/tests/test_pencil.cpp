#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "spectra/error.hpp"
#include "spectra/pencil.hpp"

using namespace spectra;

namespace {

Eigen::MatrixXd random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

Eigen::MatrixXd random_spd(int n, std::mt19937& rng) {
  Eigen::MatrixXd l = random_matrix(n, rng).triangularView<Eigen::Lower>();
  l.diagonal() = l.diagonal().cwiseAbs().array() + 1.0;
  return l * l.transpose();
}

// Number of eigenvalues of (A, B) below t: inertia of A - t B via LDL^T,
// which is the sign structure of det(A - t B) over its leading minors.
int count_below(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t) {
  Eigen::MatrixXd m = A - t * B;
  const int n = static_cast<int>(m.rows());
  int neg = 0;
  for (int k = 0; k < n; ++k) {
    const double d = m(k, k);
    if (d < 0) ++neg;
    for (int i = k + 1; i < n; ++i) {
      const double f = m(i, k) / d;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return neg;
}

double bisection_eigenvalue(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k) {
  double lo = -1e4, hi = 1e4;
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (count_below(A, B, mid) > k ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Coefficients of det(A - t B) by interpolation at Chebyshev points, roots
// from the companion matrix.
std::vector<std::complex<double>> characteristic_roots(const Eigen::MatrixXd& A,
                                                       const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd V(n + 1, n + 1);
  Eigen::VectorXd f(n + 1);
  const double r = 4.0;
  for (int i = 0; i <= n; ++i) {
    const double t = r * std::cos(std::numbers::pi * (i + 0.5) / (n + 1));
    for (int j = 0; j <= n; ++j) V(i, j) = std::pow(t, j);
    f[i] = (A - t * B).partialPivLu().determinant();
  }
  const Eigen::VectorXd c = V.fullPivLu().solve(f);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  comp.bottomLeftCorner(n - 1, n - 1).setIdentity();
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  std::vector<std::complex<double>> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return roots;
}

}  // namespace

TEST_SUITE("pencil") {

TEST_CASE("symdef trivial cases") {
  Eigen::MatrixXd A = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const Spectrum s = solve_symdef(make_pencil(A, Eigen::MatrixXd::Identity(3, 3), true,
                                              Definiteness::positive_definite));
  CHECK(s.values[0] == doctest::Approx(1));
  CHECK(s.values[1] == doctest::Approx(2));
  CHECK(s.values[2] == doctest::Approx(3));
  const Spectrum t = solve_symdef(make_pencil(Eigen::MatrixXd::Identity(1, 1),
                                              Eigen::MatrixXd::Constant(1, 1, 2.0), true,
                                              Definiteness::positive_definite));
  CHECK(t.values[0] == doctest::Approx(0.5));
}

TEST_CASE("symdef against the bisection oracle") {
  std::mt19937 rng(3);
  const int n = 20;
  Eigen::MatrixXd A = random_matrix(n, rng);
  A = (A + A.transpose()).eval() / 2;
  const Eigen::MatrixXd B = random_spd(n, rng);
  const Spectrum s = solve_symdef(make_pencil(A, B, true, Definiteness::positive_definite), true);
  for (int k = 0; k < n; ++k)
    CHECK(std::abs(s.values[k] - bisection_eigenvalue(A, B, k)) <= 1e-8 * std::max(1.0, std::abs(s.values[k])));
  // B-orthonormal vectors
  const Eigen::MatrixXd G = s.vectors.transpose() * B * s.vectors;
  CHECK((G - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("symdef is congruence invariant") {
  std::mt19937 rng(5);
  const int n = 15;
  Eigen::MatrixXd A = random_matrix(n, rng);
  A = (A + A.transpose()).eval() / 2;
  const Eigen::MatrixXd B = random_spd(n, rng);
  Eigen::MatrixXd P = random_matrix(n, rng) * 0.1 + Eigen::MatrixXd::Identity(n, n);
  const Spectrum s1 = solve_symdef(make_pencil(A, B, true, Definiteness::positive_definite));
  const Spectrum s2 = solve_symdef(make_pencil(P.transpose() * A * P, P.transpose() * B * P, true,
                                               Definiteness::positive_definite));
  for (int k = 0; k < n; ++k)
    CHECK(std::abs(s1.values[k] - s2.values[k]) <= 1e-10 * std::max(1.0, std::abs(s1.values[k])) * 10);
}

TEST_CASE("symdef rejects indefinite B and names the pivot") {
  Eigen::Matrix2d B;
  B << 1, 0, 0, -1;
  try {
    solve_symdef(make_pencil(Eigen::MatrixXd::Identity(2, 2), B, true, Definiteness::positive_definite));
    FAIL("expected rejection");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("pivot") != std::string::npos);
  }
}

TEST_CASE("make_pencil validation") {
  Eigen::Matrix2d ns;
  ns << 1, 2, 3, 4;
  CHECK_THROWS_AS(make_pencil(ns, Eigen::MatrixXd::Identity(2, 2), true, Definiteness::positive_definite),
                  InputError);
  CHECK_THROWS_AS(make_pencil(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3), false,
                              Definiteness::indefinite),
                  InputError);
}

TEST_CASE("general solver trivial cases") {
  Eigen::Matrix2d R;
  R << 0, 1, -1, 0;
  const Spectrum s = solve_general(make_pencil(R, Eigen::MatrixXd::Identity(2, 2), false,
                                               Definiteness::indefinite));
  CHECK(std::abs(s.values[0]) <= 1e-14);
  CHECK(std::abs(s.imag[0]) == doctest::Approx(1.0));
  CHECK(s.imag[0] == doctest::Approx(-s.imag[1]));
  const Spectrum d = solve_general(make_pencil(Eigen::Vector2d(3, 7).asDiagonal().toDenseMatrix(),
                                               Eigen::Vector2d(1, 2).asDiagonal().toDenseMatrix(), false,
                                               Definiteness::indefinite));
  std::vector<double> v(d.values.data(), d.values.data() + 2);
  std::sort(v.begin(), v.end());
  CHECK(v[0] == doctest::Approx(3.0));
  CHECK(v[1] == doctest::Approx(3.5));
}

TEST_CASE("general solver against the companion-matrix oracle") {
  std::mt19937 rng(9);
  const int n = 12;
  const Eigen::MatrixXd A = random_matrix(n, rng) * 0.5;
  const Eigen::MatrixXd B = random_matrix(n, rng) * 0.1 + Eigen::MatrixXd::Identity(n, n);
  const Spectrum s = solve_general(make_pencil(A, B, false, Definiteness::indefinite));
  const auto roots = characteristic_roots(A, B);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const std::complex<double> z(s.values[i], s.imag[i]);
    double best = INFINITY;
    for (const auto& r : roots) best = std::min(best, std::abs(r - z));
    CHECK(best <= 1e-7 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("general solver rejects singular B") {
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(3, 3);
  B(2, 2) = 1e-15;
  CHECK_THROWS_AS(solve_general(make_pencil(Eigen::MatrixXd::Identity(3, 3), B, false,
                                            Definiteness::indefinite)),
                  NumericalError);
}

TEST_CASE("sparse subspace iteration matches the dense solve") {
  std::mt19937 rng(13);
  const int n = 80;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 2.0;
    B(i, i) = 4.0 / 6.0;
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -1.0, B(i, i + 1) = B(i + 1, i) = 1.0 / 6.0;
  }
  const Spectrum dense = solve_symdef(make_pencil(A, B, true, Definiteness::positive_definite));
  const Spectrum sparse = lowest_eigenpairs(A.sparseView(), B.sparseView(), 5);
  for (int k = 0; k < 5; ++k) CHECK(sparse.values[k] == doctest::Approx(dense.values[k]).epsilon(1e-9));
}

TEST_CASE("clustering") {
  Spectrum s;
  s.values = Eigen::Vector4d(1.0, 2.0, 2.0 + 1e-9, 3.0);
  assign_clusters(s);
  CHECK(s.multiplicity(0) == 1);
  CHECK(s.multiplicity(1) == 2);
  CHECK(s.multiplicity(2) == 2);
  CHECK(s.multiplicity(3) == 1);
  assign_clusters(s, 1e-12);
  CHECK(s.multiplicity(1) == 1);
}

TEST_CASE("subspace gap") {
  const Eigen::Vector2d e1(1, 0), e2(0, 1);
  CHECK(subspace_gap(e1, e1 * 3.0) <= 1e-14);
  CHECK(subspace_gap(e1, e2) == doctest::Approx(1.0));
  const double th = 0.3;
  const Eigen::Vector2d v(std::cos(th), std::sin(th));
  CHECK(subspace_gap(e1, v) == doctest::Approx(std::abs(std::sin(th))).epsilon(1e-14));

  std::mt19937 rng(17);
  const Eigen::MatrixXd U = random_matrix(8, rng).leftCols(3);
  const Eigen::MatrixXd V = random_matrix(8, rng).leftCols(3);
  const Eigen::MatrixXd R = random_matrix(3, rng) + 3 * Eigen::MatrixXd::Identity(3, 3);
  CHECK(subspace_gap(U, V) == doctest::Approx(subspace_gap(V, U)).epsilon(1e-12));
  CHECK(std::abs(subspace_gap(U * R, V) - subspace_gap(U, V)) <= 1e-12);
  CHECK(subspace_gap(U, U * R) <= 1e-12);
  Eigen::MatrixXd deficient = U;
  deficient.col(2) = deficient.col(0);
  CHECK_THROWS_AS(subspace_gap(deficient, V), InputError);
}

}  // TEST_SUITE
