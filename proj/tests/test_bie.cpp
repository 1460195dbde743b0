#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spectra/bie.hpp"
#include "spectra/error.hpp"
#include "spectra/reference.hpp"

using namespace spectra;

TEST_SUITE("bie") {

TEST_CASE("single-layer symbol on the unit circle") {
  const int N = 64;
  const KernelMatrices k = assemble_kernels(boundary_quadrature(make_disk(1.0), N));
  const Eigen::VectorXd t = k.quad.curves[0].parameter;
  for (int n = 1; n <= 10; ++n) {
    const Eigen::VectorXd f = (n * t.array()).cos();
    CHECK((k.single_layer * f - f / (2.0 * n)).cwiseAbs().maxCoeff() <= 1e-13);
  }
  // log|x - y| has zero mean over the unit circle
  CHECK((k.single_layer * Eigen::VectorXd::Ones(N)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("Gauss identity for the adjoint double layer") {
  const KernelMatrices k = assemble_kernels(boundary_quadrature(make_disk(1.0), 48));
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(48);
  CHECK((0.5 * one + k.kprime * one).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("interior evaluation of the disk mode") {
  const BoundaryQuadrature q = boundary_quadrature(make_disk(1.0), 128);
  const Eigen::VectorXd density = q.curves[0].parameter.array().cos();
  Eigen::Matrix2Xd pts(2, 8);
  for (int i = 0; i < 8; ++i) pts.col(i) = 0.5 * Eigen::Vector2d(std::cos(0.7 * i), std::sin(0.7 * i));
  const Eigen::VectorXd u = evaluate_interior(q, density, pts);
  for (int i = 0; i < 8; ++i) CHECK(u[i] == doctest::Approx(0.25 * std::cos(0.7 * i)).epsilon(1e-12));
  Eigen::Matrix2Xd close(2, 1);
  close << 0.999, 0.0;
  CHECK_THROWS_AS(evaluate_interior(q, density, close), InputError);
}

TEST_CASE("disk Steklov spectrum") {
  const Spectrum s = solve_steklov_bie(make_disk(1.0), 64);
  const double ref[] = {0, 1, 1, 2, 2, 3, 3};
  for (int i = 0; i < 7; ++i) CHECK(std::abs(s.values[i] - ref[i]) <= 1e-12);
  CHECK(s.zero_modes == 1);
  CHECK(s.multiplicity(0) == 1);
  CHECK(s.multiplicity(1) == 2);
  CHECK(s.provenance.method == "bie");
  const Spectrum r = solve_steklov_bie(make_disk(0.1), 64);
  CHECK(r.values[1] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("concentric annulus against the closed form") {
  const Spectrum s = solve_steklov_bie(make_annulus(0.0, 0.1), 128);
  const AnalyticSpectrum ref = concentric_annulus_steklov(0.1, 1.0, 20);
  for (int i = 0; i < 20; ++i) CHECK(std::abs(s.values[i] - ref.values[i]) <= 1e-9);
  CHECK(s.values[9] == doctest::Approx(4.777239300935770).epsilon(1e-12));
  CHECK(s.multiplicity(9) == 1);
  CHECK(s.multiplicity(10) == 2);
}

TEST_CASE("eccentric annulus: reflection and phase invariance") {
  const auto nodes = std::vector<int>{200, 40};
  BieOptions opt;
  opt.count = 10;
  const Spectrum a = solve_steklov_bie(make_annulus(0.5, 0.1), nodes, opt);
  const Spectrum b = solve_steklov_bie(make_annulus(-0.5, 0.1), nodes, opt);
  for (int i = 0; i < 10; ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-10));
  const Domain d = make_annulus(0.5, 0.1);
  const KernelMatrices k0 = assemble_kernels(boundary_quadrature(d, nodes, 0.0));
  const KernelMatrices k1 = assemble_kernels(boundary_quadrature(d, nodes, 0.37));
  const Spectrum s0 = solve_general(steklov_pencil(k0));
  const Spectrum s1 = solve_general(steklov_pencil(k1));
  std::vector<double> v0(s0.values.data(), s0.values.data() + s0.size());
  std::vector<double> v1(s1.values.data(), s1.values.data() + s1.size());
  std::sort(v0.begin(), v0.end());
  std::sort(v1.begin(), v1.end());
  for (int i = 0; i < 10; ++i) CHECK(v0[i] == doctest::Approx(v1[i]).epsilon(1e-8));
}

TEST_CASE("all computed values are real and non-negative") {
  BieOptions opt;
  opt.count = 30;
  const Spectrum s = solve_steklov_bie(make_annulus(0.88, 0.1), std::vector<int>{300, 60}, opt);
  for (int i = 0; i < 30; ++i) {
    CHECK(s.values[i] >= -1e-10);
    CHECK(s.imag[i] == 0.0);
  }
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(solve_steklov_bie(load_domain("unit-square"), 64), InputError);
  CHECK_THROWS_AS(solve_steklov_bie(make_disk(1.0), 63), InputError);
  BieOptions opt;
  opt.count = 20;
  CHECK_THROWS_AS(solve_steklov_bie(make_annulus(0.88, 0.1), std::vector<int>{36, 4}, opt), NumericalError);
}

TEST_CASE("sweep") {
  SweepOptions opt;
  opt.n_total = 220;
  const auto rows = sweep_annulus({0.3, 0.0}, {1, 2}, opt);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].eps == 0.0);
  CHECK(rows[0].k == 1);
  CHECK(rows[0].ratio_to_concentric == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rows[2].sigma < rows[0].sigma);
  opt.threads = 2;
  const auto par = sweep_annulus({0.3, 0.0}, {1, 2}, opt);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(par[i].sigma == rows[i].sigma);
  CHECK_THROWS_AS(sweep_annulus({0.95}, {1}, opt), InputError);
  CHECK_THROWS_AS(sweep_annulus({0.1}, {}, opt), InputError);
}

TEST_CASE("node split conventions") {
  const Domain d = make_annulus(0.2, 0.1);
  CHECK(annulus_nodes(d, 100, true) == std::vector<int>{100, 100});
  const auto n = annulus_nodes(d, 660, false);
  CHECK(n[0] + n[1] == 660);
}

}  // TEST_SUITE
