#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spectra/error.hpp"
#include "spectra/reference.hpp"
#include "spectra/specfun.hpp"

using namespace spectra;

namespace {

constexpr double kPi = std::numbers::pi;

void check_sorted(const AnalyticSpectrum& s) {
  for (std::size_t i = 1; i < s.values.size(); ++i) CHECK(s.values[i] >= s.values[i - 1]);
}

}  // namespace

TEST_SUITE("reference") {

TEST_CASE("disk Steklov") {
  const auto s = disk_spectra(BoundaryCondition::steklov, 1.0, 7);
  const double ref[] = {0, 1, 1, 2, 2, 3, 3};
  REQUIRE(s.values.size() >= 7);
  for (int i = 0; i < 7; ++i) CHECK(s.values[i] == ref[i]);
  const auto t = disk_spectra(BoundaryCondition::steklov, 0.1, 5);
  const double ref2[] = {0, 10, 10, 20, 20};
  for (int i = 0; i < 5; ++i) CHECK(t.values[i] == doctest::Approx(ref2[i]));
}

TEST_CASE("disk Dirichlet and Neumann") {
  const auto d = disk_spectra(BoundaryCondition::dirichlet, 1.0, 6);
  const double j01 = bessel_j_zero(0, 1), j11 = bessel_j_zero(1, 1);
  CHECK(d.values[0] == doctest::Approx(j01 * j01));
  CHECK(d.values[1] == doctest::Approx(j11 * j11));
  CHECK(d.values[2] == doctest::Approx(j11 * j11));
  check_sorted(d);
  const auto n = disk_spectra(BoundaryCondition::neumann, 2.0, 6);
  CHECK(n.values[0] == 0.0);
  const double jp = bessel_j_derivative_zero(1, 1) / 2;
  CHECK(n.values[1] == doctest::Approx(jp * jp));
  check_sorted(n);
}

TEST_CASE("rectangles") {
  CHECK(rectangle_spectra(BoundaryCondition::dirichlet, 1, 1, {}, 3).values[0] ==
        doctest::Approx(2 * kPi * kPi));
  CHECK(rectangle_spectra(BoundaryCondition::neumann, 1, 1, {}, 3).values[0] == 0.0);
  RectangleSides top;
  top.top = Marker::neumann;
  CHECK(rectangle_spectra(BoundaryCondition::mixed, 1, 1, top, 3).values[0] ==
        doctest::Approx(1.25 * kPi * kPi));
  RectangleSides corner;
  corner.top = Marker::neumann;
  corner.left = Marker::neumann;
  CHECK(rectangle_spectra(BoundaryCondition::mixed, 1, 1, corner, 3).values[0] ==
        doctest::Approx(0.5 * kPi * kPi));
  RectangleSides bad;
  bad.top = Marker::steklov;
  CHECK_THROWS_AS(rectangle_spectra(BoundaryCondition::mixed, 1, 1, bad, 3), InputError);
  const auto r = rectangle_spectra(BoundaryCondition::dirichlet, 2, 1, {}, 20);
  check_sorted(r);
  CHECK(r.values[0] == doctest::Approx(kPi * kPi * (0.25 + 1)));
}

TEST_CASE("concentric annulus") {
  const auto s = concentric_annulus_steklov(0.1, 1.0, 20);
  CHECK(s.values[0] == 0.0);
  CHECK(annulus_radial_eigenvalue(0.1, 1.0) == doctest::Approx(4.777239300935770).epsilon(1e-15));
  const auto lv = s.levels();
  CHECK(lv[0].multiplicity == 1);
  int simple = 0;
  for (const auto& l : lv) {
    if (l.multiplicity == 1) ++simple;
    else CHECK(l.multiplicity == 2);
  }
  CHECK(simple == 2);
  check_sorted(s);
}

TEST_CASE("angular pair against a direct 2x2 eigen-solve") {
  // u = a r^n + b r^-n; the Dirichlet-to-Neumann map on both circles as a 2x2
  // generalized problem in the boundary traces.
  const double r = 0.1, R = 1.0;
  for (int n = 1; n <= 6; ++n) {
    Eigen::Matrix2d T, D;  // traces and normal derivatives in terms of (a, b)
    T << std::pow(R, n), std::pow(R, -n), std::pow(r, n), std::pow(r, -n);
    D << n * std::pow(R, n - 1), -n * std::pow(R, -n - 1),
        -n * std::pow(r, n - 1), n * std::pow(r, -n - 1);
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(Eigen::MatrixXd{D}, Eigen::MatrixXd{T});
    Eigen::Vector2d ev = ges.eigenvalues().real();
    std::sort(ev.data(), ev.data() + 2);
    const auto p = annulus_mode_pair(n, r, R);
    CHECK(p[0] == doctest::Approx(ev[0]).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(ev[1]).epsilon(1e-12));
  }
}

TEST_CASE("regeneration with a larger window keeps the prefix") {
  const auto a = concentric_annulus_steklov(0.1, 1.0, 40);
  const auto b = concentric_annulus_steklov(0.1, 1.0, 400);
  for (int i = 0; i < 40; ++i) CHECK(a.values[i] == b.values[i]);
  const auto c = disk_spectra(BoundaryCondition::dirichlet, 1.0, 30);
  const auto e = disk_spectra(BoundaryCondition::dirichlet, 1.0, 200);
  for (int i = 0; i < 30; ++i) CHECK(c.values[i] == e.values[i]);
}

TEST_CASE("small inner radius approaches the disk") {
  const auto s = concentric_annulus_steklov(1e-4, 1.0, 5);
  CHECK(s.values[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.values[3] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("union spectrum") {
  const auto a = disk_spectra(BoundaryCondition::steklov, 1.0, 40);
  const auto b = disk_spectra(BoundaryCondition::steklov, 0.1, 40);
  const auto u = union_spectrum(a, b, 26);
  const double head[] = {0, 0, 1, 1, 2, 2};
  for (int i = 0; i < 6; ++i) CHECK(u.values[i] == head[i]);
  // 10 appears twice from each disk
  int tens = 0;
  for (double v : u.values) tens += v == doctest::Approx(10.0);
  CHECK(tens == 4);
  AnalyticSpectrum empty;
  const auto same = union_spectrum(a, empty, 10);
  for (int i = 0; i < 10; ++i) CHECK(same.values[i] == a.values[i]);
}

}  // TEST_SUITE
