#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spectra/error.hpp"
#include "spectra/fem.hpp"

using namespace spectra;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const Mesh> unit_triangle() {
  auto m = std::make_shared<Mesh>();
  m->vertices.resize(2, 3);
  m->vertices << 0, 1, 0, 0, 0, 1;
  m->triangles = {{0, 1, 2}};
  m->boundary_edges = {{0, 1, Marker::steklov}, {1, 2, Marker::steklov}, {2, 0, Marker::steklov}};
  m->h = std::sqrt(2.0);
  return m;
}

std::shared_ptr<const Mesh> mesh_of(const Domain& d, int level) {
  return std::make_shared<const Mesh>(triangulate(d, level));
}

Spectrum solve(const std::string& name, BoundaryCondition bc, SpaceKind k, int level, int count,
               bool cr_midpoint = false) {
  EigenProblemSpec spec;
  spec.bc = bc;
  spec.space = k;
  spec.level = level;
  spec.count = count;
  spec.cr_midpoint = cr_midpoint;
  return solve_fem(load_domain(name), spec);
}

// Gauss-Legendre tensor rule on [0,1]^2 as an independent integral oracle.
template <typename F>
double integrate_square(F f) {
  const int n = 40;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const Eigen::VectorXd x = (es.eigenvalues().array() + 1) / 2;
  const Eigen::VectorXd w = es.eigenvectors().row(0).transpose().array().square();
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += w[i] * w[j] * f(x[i], x[j]);
  return s;
}

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("dof counts") {
  const auto m = mesh_of(load_domain("gww-a"), 2);
  const EdgeTable e = build_edge_table(*m);
  const int nv = m->num_vertices(), ne = static_cast<int>(e.edges.size());
  CHECK(make_space(m, SpaceKind::p1).num_dofs == nv);
  CHECK(make_space(m, SpaceKind::p2).num_dofs == nv + ne);
  CHECK(make_space(m, SpaceKind::cr).num_dofs == ne);
}

TEST_CASE("constrained dofs lie on Dirichlet edges only") {
  const auto m = mesh_of(load_domain("dn-square"), 2);
  const FemSpace s = make_space(m, SpaceKind::p2);
  const int nv = m->num_vertices();
  for (int d = 0; d < s.num_dofs; ++d) {
    if (!s.constrained[d]) continue;
    CHECK(s.on_boundary[d]);
    Eigen::Vector2d x = d < nv ? m->vertex(d)
                               : Eigen::Vector2d(0.5 * (m->vertex(s.edges.edges[d - nv][0]) +
                                                        m->vertex(s.edges.edges[d - nv][1])));
    // the top edge is Neumann; only its end points are constrained
    if (x.y() == 1.0) CHECK((x.x() == 0.0 || x.x() == 1.0));
  }
}

TEST_CASE("P1 element stiffness on the reference triangle") {
  const Eigen::MatrixXd K(assemble_stiffness(make_space(unit_triangle(), SpaceKind::p1)));
  Eigen::Matrix3d ref;
  ref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  CHECK((K - 0.5 * ref).norm() <= 1e-15);
}

TEST_CASE("stiffness kernel is the constants") {
  const auto m = mesh_of(load_domain("gww-b"), 2);
  for (SpaceKind k : {SpaceKind::p1, SpaceKind::p2, SpaceKind::cr}) {
    const SparseMatrix K = assemble_stiffness(make_space(m, k));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(K.rows());
    CHECK((K * one).norm() <= 1e-12 * K.norm());
    CHECK((Eigen::MatrixXd(K) - Eigen::MatrixXd(K).transpose()).norm() <= 1e-14 * K.norm());
  }
}

TEST_CASE("mass matrix") {
  const Domain d = load_domain("gww-a");
  const auto m = mesh_of(d, 1);
  for (SpaceKind k : {SpaceKind::p1, SpaceKind::p2, SpaceKind::cr}) {
    const Eigen::MatrixXd M(assemble_mass(make_space(m, k), Weight::unit));
    CHECK(M.sum() == doctest::Approx(d.area()).epsilon(1e-13));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("genus2 weighted mass against a tensor Gauss oracle") {
  const double exact = integrate_square([](double x, double y) {
    const double r2 = x * x + y * y;
    return 4.0 / ((1 + r2) * (1 + r2));
  });
  const auto m = mesh_of(load_domain("unit-square"), 3);
  for (SpaceKind k : {SpaceKind::p1, SpaceKind::p2}) {
    const SparseMatrix M = assemble_mass(make_space(m, k), Weight::genus2);
    CHECK(Eigen::MatrixXd(M).sum() == doctest::Approx(exact).epsilon(1e-8));
  }
  const MeshQuadrature q = mesh_quadrature(*m);
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("boundary mass") {
  const auto sq = mesh_of(with_uniform_marker(load_domain("unit-square"), Marker::steklov), 2);
  for (SpaceKind k : {SpaceKind::p1, SpaceKind::p2}) {
    const FemSpace s = make_space(sq, k);
    const Eigen::MatrixXd B(assemble_boundary_mass(s));
    CHECK(B.sum() == doctest::Approx(4.0).epsilon(1e-14));
    int rank_rows = 0;
    for (int d = 0; d < s.num_dofs; ++d) {
      if (!s.on_boundary[d]) CHECK(B.row(d).norm() == 0.0);
      else ++rank_rows;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    CHECK(lu.rank() == rank_rows);
  }
  const Eigen::MatrixXd B(assemble_boundary_mass(make_space(unit_triangle(), SpaceKind::p1)));
  // edge 0-1 has length 1, the shared diagonal entry collects two edges
  CHECK(B(0, 1) == doctest::Approx(1.0 / 6));
  CHECK(B(1, 2) == doctest::Approx(std::sqrt(2.0) / 6));
  CHECK(B(0, 0) == doctest::Approx(2.0 / 6 + 2.0 / 6));
  CHECK_THROWS_AS(assemble_boundary_mass(make_space(unit_triangle(), SpaceKind::cr)), InputError);
  const Eigen::MatrixXd Bc(assemble_boundary_mass_cr_midpoint(make_space(sq, SpaceKind::cr)));
  CHECK(Bc.sum() == doctest::Approx(4.0));
}

TEST_CASE("square Dirichlet converges to 2 pi^2 from above, monotonically") {
  double prev = INFINITY;
  for (int l = 2; l <= 5; ++l) {
    const double v = solve("unit-square", BoundaryCondition::dirichlet, SpaceKind::p1, l, 3).values[0];
    CHECK(v >= 2 * kPi * kPi);
    CHECK(v <= prev + 1e-10);
    prev = v;
  }
  CHECK(prev == doctest::Approx(2 * kPi * kPi).epsilon(3e-3));
  CHECK(solve("unit-square", BoundaryCondition::dirichlet, SpaceKind::p2, 4, 1).values[0] ==
        doctest::Approx(2 * kPi * kPi).epsilon(3e-5));
}

TEST_CASE("conforming monotonicity on GWW for the first 4") {
  for (SpaceKind k : {SpaceKind::p1, SpaceKind::p2}) {
    Eigen::VectorXd prev = Eigen::VectorXd::Constant(4, INFINITY);
    for (int l = 1; l <= 3; ++l) {
      const Spectrum s = solve("gww-a", BoundaryCondition::dirichlet, k, l, 4);
      for (int i = 0; i < 4; ++i) CHECK(s.values[i] <= prev[i] + 1e-10);
      prev = s.values.head(4);
    }
  }
}

TEST_CASE("mixed square approaches 5 pi^2 / 4") {
  CHECK(solve("dn-square", BoundaryCondition::mixed, SpaceKind::p2, 4, 1).values[0] ==
        doctest::Approx(1.25 * kPi * kPi).epsilon(1e-5));
}

TEST_CASE("Neumann reports and flags the zero eigenvalue") {
  const Spectrum s = solve("unit-square", BoundaryCondition::neumann, SpaceKind::p2, 3, 3);
  CHECK(std::abs(s.values[0]) <= 1e-8);
  CHECK(s.zero_modes == 1);
  CHECK(s.values[1] == doctest::Approx(kPi * kPi).epsilon(1e-4));
}

TEST_CASE("Steklov: sigma_0 = 0 with a constant vector") {
  EigenProblemSpec spec;
  spec.bc = BoundaryCondition::steklov;
  spec.space = SpaceKind::p1;
  spec.count = 4;
  spec.want_vectors = true;
  const auto m = mesh_of(with_uniform_marker(load_domain("unit-square"), Marker::steklov), 3);
  const FemSolution sol = solve_fem_on_mesh(m, spec, "unit-square");
  CHECK(std::abs(sol.spectrum.values[0]) <= 1e-10);
  const Eigen::VectorXd v = sol.vertex_values.col(0);
  CHECK((v.array() - v.mean()).abs().maxCoeff() <= 1e-8 * v.cwiseAbs().maxCoeff());
}

TEST_CASE("Steklov on gww-a, P1 near the published values") {
  const Spectrum s = solve("gww-a", BoundaryCondition::steklov, SpaceKind::p1, 4, 5);
  const double ref[] = {0.2845, 0.8014, 1.0980, 1.7331};
  for (int i = 0; i < 4; ++i) CHECK(s.values[i + 1] == doctest::Approx(ref[i]).epsilon(1e-2));
}

TEST_CASE("Steklov count and CR rejections") {
  CHECK_THROWS_AS(solve("unit-square", BoundaryCondition::steklov, SpaceKind::p1, 0, 100), InputError);
  CHECK_THROWS_AS(solve("unit-square", BoundaryCondition::steklov, SpaceKind::cr, 2, 3), InputError);
  CHECK_NOTHROW(solve("unit-square", BoundaryCondition::steklov, SpaceKind::cr, 2, 3, true));
  CHECK_THROWS_AS(solve("unit-square", BoundaryCondition::dirichlet, SpaceKind::p1, 2, 0), InputError);
}

TEST_CASE("bracketing CR <= P2 <= P1 level by level") {
  for (const char* name : {"unit-square", "gww-a", "gww-b"})
    for (int l = 2; l <= 3; ++l) {
      const Spectrum cr = solve(name, BoundaryCondition::dirichlet, SpaceKind::cr, l, 4);
      const Spectrum p2 = solve(name, BoundaryCondition::dirichlet, SpaceKind::p2, l, 4);
      const Spectrum p1 = solve(name, BoundaryCondition::dirichlet, SpaceKind::p1, l, 4);
      for (int i = 0; i < 4; ++i) {
        CHECK(cr.values[i] <= p2.values[i]);
        CHECK(p2.values[i] <= p1.values[i]);
      }
    }
}

TEST_CASE("scaling covariance") {
  const Domain sq = load_domain("unit-square");
  for (BoundaryCondition bc : {BoundaryCondition::dirichlet, BoundaryCondition::steklov}) {
    EigenProblemSpec spec;
    spec.bc = bc;
    spec.space = SpaceKind::p2;
    spec.level = 3;
    spec.count = 4;
    const Spectrum a = solve_fem(sq, spec);
    const Spectrum b = solve_fem(scaled(sq, 2.0), spec);
    const double f = bc == BoundaryCondition::dirichlet ? 0.25 : 0.5;
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(b.values[i] - f * a.values[i]) <= 1e-9 * std::max(1.0, std::abs(a.values[i])));
  }
}

TEST_CASE("sparse and dense paths agree; seed does not change the result") {
  EigenProblemSpec spec;
  spec.space = SpaceKind::p1;
  spec.level = 4;
  spec.count = 4;
  const Domain d = load_domain("gww-b");
  spec.dense_limit = 100000;
  const Spectrum dense = solve_fem(d, spec);
  spec.dense_limit = 10;
  const Spectrum sparse = solve_fem(d, spec);
  spec.seed = 99;
  const Spectrum other = solve_fem(d, spec);
  for (int i = 0; i < 4; ++i) {
    CHECK(sparse.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-9));
    CHECK(other.values[i] == doctest::Approx(sparse.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("provenance") {
  const Spectrum s = solve("unit-square", BoundaryCondition::steklov, SpaceKind::cr, 1, 2, true);
  CHECK(s.provenance.method.find("cr-midpoint") != std::string::npos);
  CHECK(s.provenance.domain == "unit-square");
}

}  // TEST_SUITE
