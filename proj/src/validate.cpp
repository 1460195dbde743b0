#include "spectra/validate.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <numbers>

#include "spectra/bie.hpp"
#include "spectra/bounds.hpp"
#include "spectra/fem.hpp"
#include "spectra/mps.hpp"
#include "spectra/reference.hpp"
#include "spectra/specfun.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;

Check run(const std::string& name, double tol, const std::function<double()>& measure) {
  Check c{name, 0.0, tol, false};
  try {
    c.measured = measure();
    c.pass = c.measured <= tol;
  } catch (const std::exception& e) {
    c.name += std::string(" (threw: ") + e.what() + ")";
    c.measured = INFINITY;
  }
  return c;
}

double relerr(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

std::vector<Check> run_validation() {
  std::vector<Check> out;

  out.push_back(run("bessel J_{1/2} closed form", 1e-12, [] {
    double worst = 0.0;
    for (double x = 0.1; x < 40.0; x += 0.37)
      worst = std::max(worst, std::abs(bessel_j(0.5, x) - std::sqrt(2.0 / (kPi * x)) * std::sin(x)));
    return worst;
  }));
  out.push_back(run("bessel zeros are roots (j_{0,1}, j_{1,1}, j_{2/3,5})", 1e-12, [] {
    double worst = 0.0;
    for (auto [nu, k] : {std::pair{0.0, 1}, {1.0, 1}, {2.0 / 3.0, 5}})
      worst = std::max(worst, std::abs(bessel_j(nu, bessel_j_zero(nu, k))));
    return worst;
  }));
  out.push_back(run("symdef 2x2 pencil closed form", 1e-13, [] {
    Eigen::Matrix2d A, B;
    A << 2, 1, 1, 3;
    B << 2, 0, 0, 1;
    const Spectrum s = solve_symdef(make_pencil(A, B, true, Definiteness::positive_definite));
    // det(A - l B) = 2 l^2 - 8 l + 5
    const double r = std::sqrt(64.0 - 40.0);
    return std::max(std::abs(s.values[0] - (8.0 - r) / 4.0), std::abs(s.values[1] - (8.0 + r) / 4.0));
  }));
  out.push_back(run("disk Steklov by BIE, N=128", 1e-10, [] {
    const Spectrum s = solve_steklov_bie(make_disk(1.0), 128);
    const AnalyticSpectrum ref = disk_spectra(BoundaryCondition::steklov, 1.0, 7);
    double worst = 0.0;
    for (int i = 0; i < 7; ++i) worst = std::max(worst, std::abs(s.values[i] - ref.values[i]));
    return worst;
  }));
  out.push_back(run("concentric annulus Steklov by BIE, N=256/curve, first 20", 1e-9, [] {
    const Spectrum s = solve_steklov_bie(make_annulus(0.0, 0.1), 256);
    const AnalyticSpectrum ref = concentric_annulus_steklov(0.1, 1.0, 20);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, std::abs(s.values[i] - ref.values[i]));
    return worst;
  }));
  out.push_back(run("unit square Dirichlet lambda_1, P2 extrapolated", 1e-6, [] {
    const Domain sq = load_domain("unit-square");
    std::vector<double> v, h;
    const auto meshes = mesh_hierarchy(sq, 5);
    for (int l = 3; l <= 5; ++l) {
      EigenProblemSpec spec;
      spec.space = SpaceKind::p2;
      spec.count = 1;
      v.push_back(solve_fem_on_mesh(meshes[l], spec, sq.name).spectrum.values[0]);
      h.push_back(meshes[l]->h);
    }
    return relerr(richardson_extrapolate(v, h).limit, 2.0 * kPi * kPi);
  }));
  out.push_back(run("unit square Neumann first 6, P2 extrapolated", 1e-6, [] {
    const Domain sq = with_uniform_marker(load_domain("unit-square"), Marker::neumann);
    const auto meshes = mesh_hierarchy(sq, 5);
    std::vector<Spectrum> runs;
    std::vector<double> h;
    for (int l = 3; l <= 5; ++l) {
      EigenProblemSpec spec;
      spec.bc = BoundaryCondition::neumann;
      spec.space = SpaceKind::p2;
      spec.count = 6;
      runs.push_back(solve_fem_on_mesh(meshes[l], spec, sq.name).spectrum);
      h.push_back(meshes[l]->h);
    }
    const AnalyticSpectrum ref = rectangle_spectra(BoundaryCondition::neumann, 1, 1, {}, 6);
    double worst = std::abs(runs.back().values[0]);
    for (int i = 1; i < 6; ++i) {
      std::vector<double> col;
      for (const auto& r : runs) col.push_back(r.values[i]);
      worst = std::max(worst, relerr(richardson_extrapolate(col, h).limit, ref.values[i]));
    }
    return worst;
  }));
  out.push_back(run("dn-square mixed lambda_1 = 5 pi^2/4, P2 level 4", 1e-5, [] {
    EigenProblemSpec spec;
    spec.bc = BoundaryCondition::mixed;
    spec.space = SpaceKind::p2;
    spec.level = 4;
    spec.count = 1;
    return relerr(solve_fem(load_domain("dn-square"), spec).values[0], 1.25 * kPi * kPi);
  }));
  out.push_back(run("CR lower bound <= 2 pi^2 <= P1 on the square, levels 1-4", 0.0, [] {
    const BracketReport r = bracket_report(load_domain("unit-square"), BoundaryCondition::dirichlet, 1, 4);
    double violation = 0.0;
    for (const auto& row : r.rows)
      violation = std::max({violation, row.cr_lower - 2.0 * kPi * kPi, 2.0 * kPi * kPi - row.p1});
    return std::max(0.0, violation);
  }));
  out.push_back(run("MPS on the unit square, lambda_1 = 2 pi^2", 1e-6, [] {
    const Domain sq = load_domain("unit-square");
    const auto basis = default_basis(sq, 10, true);
    return std::abs(refine_minimum(sq, basis, 19.0, 21.0).lambda - 2.0 * kPi * kPi);
  }));
  out.push_back(run("FHM radius formula at lambda=10, eps=0.1", 1e-14, [] {
    const Enclosure e = fhm_enclosure(10.0, 0.1);
    return std::abs(e.radius() - 10.0 * (0.1 * std::sqrt(2.0) + 0.01) / 0.99);
  }));
  out.push_back(run("Faber-Krahn on the unit square (slack must be positive)", 0.0, [] {
    EigenProblemSpec spec;
    spec.space = SpaceKind::p2;
    spec.count = 1;
    const double j = bessel_j_zero(0.0, 1);
    const double lam = solve_fem(load_domain("unit-square"), spec).values[0];
    return std::max(0.0, kPi * j * j - lam);
  }));
  return out;
}

}  // namespace spectra
