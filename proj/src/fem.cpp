#include "spectra/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "spectra/error.hpp"

namespace spectra {

namespace {

using Vec2 = Eigen::Vector2d;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct QuadPoint {
  std::array<double, 3> bary;
  double weight;  // fraction of the triangle area
};

// Edge midpoints; exact for quadratics.
const std::vector<QuadPoint>& midpoint_rule() {
  static const std::vector<QuadPoint> rule = {
      {{0.5, 0.5, 0.0}, 1.0 / 3.0}, {{0.0, 0.5, 0.5}, 1.0 / 3.0}, {{0.5, 0.0, 0.5}, 1.0 / 3.0}};
  return rule;
}

// 7-point rule, exact for polynomials of degree 5.
const std::vector<QuadPoint>& degree5_rule() {
  static const std::vector<QuadPoint> rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, b1 = (9.0 + 2.0 * s) / 21.0, w1 = (155.0 - s) / 1200.0;
    const double a2 = (6.0 + s) / 21.0, b2 = (9.0 - 2.0 * s) / 21.0, w2 = (155.0 + s) / 1200.0;
    return std::vector<QuadPoint>{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
        {{a1, a1, b1}, w1}, {{a1, b1, a1}, w1}, {{b1, a1, a1}, w1},
        {{a2, a2, b2}, w2}, {{a2, b2, a2}, w2}, {{b2, a2, a2}, w2}};
  }();
  return rule;
}

struct Element {
  std::array<Vec2, 3> p;
  std::array<Vec2, 3> grad;  // gradients of the barycentric coordinates
  double area = 0.0;

  Element(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) p[i] = mesh.vertex(tri[i]);
    area = mesh.signed_area(t);
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = p[(i + 1) % 3];
      const Vec2& pk = p[(i + 2) % 3];
      grad[i] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / (2.0 * area);
    }
  }

  Vec2 point(const std::array<double, 3>& l) const { return l[0] * p[0] + l[1] * p[1] + l[2] * p[2]; }
};

// Values and gradients of the local basis at barycentric point l.
void eval_basis(SpaceKind kind, const Element& el, const std::array<double, 3>& l,
                std::array<double, 6>& phi, std::array<Vec2, 6>& dphi) {
  switch (kind) {
    case SpaceKind::p1:
      for (int i = 0; i < 3; ++i) {
        phi[i] = l[i];
        dphi[i] = el.grad[i];
      }
      break;
    case SpaceKind::cr:
      for (int k = 0; k < 3; ++k) {
        phi[k] = 1.0 - 2.0 * l[k];
        dphi[k] = -2.0 * el.grad[k];
      }
      break;
    case SpaceKind::p2:
      for (int i = 0; i < 3; ++i) {
        phi[i] = l[i] * (2.0 * l[i] - 1.0);
        dphi[i] = (4.0 * l[i] - 1.0) * el.grad[i];
      }
      for (int k = 0; k < 3; ++k) {
        const int j = (k + 1) % 3, m = (k + 2) % 3;
        phi[3 + k] = 4.0 * l[j] * l[m];
        dphi[3 + k] = 4.0 * (l[j] * el.grad[m] + l[m] * el.grad[j]);
      }
      break;
  }
}

double weight_value(Weight w, const Vec2& x) {
  if (w == Weight::unit) return 1.0;
  const double r2 = x.squaredNorm();
  return 4.0 / ((1.0 + r2) * (1.0 + r2));
}

SparseMatrix from_triplets(int n, const Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

std::map<std::pair<int, int>, int> edge_lookup(const EdgeTable& edges) {
  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t e = 0; e < edges.edges.size(); ++e)
    lookup[{edges.edges[e][0], edges.edges[e][1]}] = static_cast<int>(e);
  return lookup;
}

Eigen::MatrixXd to_dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

double sparse_norm(const SparseMatrix& m) { return m.norm(); }

}  // namespace

std::string_view to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::p1: return "p1";
    case SpaceKind::p2: return "p2";
    case SpaceKind::cr: return "cr";
  }
  return "?";
}

std::string method_tag(SpaceKind kind, BoundaryCondition bc, bool cr_midpoint) {
  std::string tag = "fem-" + std::string(to_string(kind));
  if (kind == SpaceKind::cr && bc == BoundaryCondition::steklov && cr_midpoint) tag += "-midpoint";
  return tag;
}

int FemSpace::num_free() const {
  return static_cast<int>(std::count(constrained.begin(), constrained.end(), false));
}

std::vector<int> FemSpace::free_index() const {
  std::vector<int> idx(num_dofs, -1);
  int next = 0;
  for (int i = 0; i < num_dofs; ++i)
    if (!constrained[i]) idx[i] = next++;
  return idx;
}

FemSpace make_space(std::shared_ptr<const Mesh> mesh, SpaceKind kind) {
  if (!mesh) throw InputError("make_space: null mesh");
  FemSpace s;
  s.kind = kind;
  s.mesh = mesh;
  s.edges = build_edge_table(*mesh);
  const int nv = mesh->num_vertices();
  const int ne = static_cast<int>(s.edges.edges.size());
  s.num_dofs = kind == SpaceKind::p1 ? nv : kind == SpaceKind::p2 ? nv + ne : ne;
  s.element_dofs.resize(mesh->triangles.size());
  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    auto& d = s.element_dofs[t];
    d.fill(-1);
    const auto& tri = mesh->triangles[t];
    const auto& te = s.edges.triangle_edges[t];
    if (kind == SpaceKind::cr) {
      for (int k = 0; k < 3; ++k) d[k] = te[k];
    } else {
      for (int k = 0; k < 3; ++k) d[k] = tri[k];
      if (kind == SpaceKind::p2)
        for (int k = 0; k < 3; ++k) d[3 + k] = nv + te[k];
    }
  }
  s.constrained.assign(s.num_dofs, false);
  s.on_boundary.assign(s.num_dofs, false);
  for (int e = 0; e < ne; ++e) {
    if (!s.edges.on_boundary[e]) continue;
    const bool dir = s.edges.marker[e] == Marker::dirichlet;
    std::vector<int> dofs;
    if (kind == SpaceKind::cr) {
      dofs = {e};
    } else {
      dofs = {s.edges.edges[e][0], s.edges.edges[e][1]};
      if (kind == SpaceKind::p2) dofs.push_back(nv + e);
    }
    for (int d : dofs) {
      s.on_boundary[d] = true;
      if (dir) s.constrained[d] = true;
    }
  }
  return s;
}

SparseMatrix assemble_stiffness(const FemSpace& space) {
  const Mesh& mesh = *space.mesh;
  const int nd = space.dofs_per_element();
  Triplets trip;
  trip.reserve(mesh.triangles.size() * nd * nd);
  std::array<double, 6> phi{};
  std::array<Vec2, 6> dphi{};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Element el(mesh, t);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    if (space.kind == SpaceKind::p2) {
      for (const auto& q : midpoint_rule()) {
        eval_basis(space.kind, el, q.bary, phi, dphi);
        for (int i = 0; i < nd; ++i)
          for (int j = 0; j < nd; ++j) local(i, j) += q.weight * el.area * dphi[i].dot(dphi[j]);
      }
    } else {
      // constant gradients
      eval_basis(space.kind, el, {1.0 / 3, 1.0 / 3, 1.0 / 3}, phi, dphi);
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) local(i, j) = el.area * dphi[i].dot(dphi[j]);
    }
    const auto& dofs = space.element_dofs[t];
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  return from_triplets(space.num_dofs, trip);
}

SparseMatrix assemble_mass(const FemSpace& space, Weight weight) {
  const Mesh& mesh = *space.mesh;
  const int nd = space.dofs_per_element();
  Triplets trip;
  trip.reserve(mesh.triangles.size() * nd * nd);
  std::array<double, 6> phi{};
  std::array<Vec2, 6> dphi{};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Element el(mesh, t);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& q : degree5_rule()) {
      eval_basis(space.kind, el, q.bary, phi, dphi);
      const double w = q.weight * el.area * weight_value(weight, el.point(q.bary));
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) local(i, j) += w * phi[i] * phi[j];
    }
    const auto& dofs = space.element_dofs[t];
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  return from_triplets(space.num_dofs, trip);
}

SparseMatrix assemble_boundary_mass(const FemSpace& space, bool all_edges) {
  if (space.kind == SpaceKind::cr)
    throw InputError("CR traces are discontinuous at boundary vertices; use the cr-midpoint variant");
  const Mesh& mesh = *space.mesh;
  if (mesh.boundary_edges.empty()) throw InputError("mesh has no boundary edges");
  const auto lookup = edge_lookup(space.edges);
  const int nv = mesh.num_vertices();
  Triplets trip;
  for (const auto& be : mesh.boundary_edges) {
    if (!all_edges && be.marker != Marker::steklov) continue;
    const double len = (mesh.vertex(be.a) - mesh.vertex(be.b)).norm();
    if (space.kind == SpaceKind::p1) {
      const int d[2] = {be.a, be.b};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) trip.emplace_back(d[i], d[j], len / 6.0 * (i == j ? 2.0 : 1.0));
    } else {
      const int e = lookup.at(std::minmax(be.a, be.b));
      const int d[3] = {be.a, be.b, nv + e};
      // exact 1D quadratic mass, order (end, end, midpoint)
      static constexpr double m[3][3] = {{4, -1, 2}, {-1, 4, 2}, {2, 2, 16}};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) trip.emplace_back(d[i], d[j], len / 30.0 * m[i][j]);
    }
  }
  return from_triplets(space.num_dofs, trip);
}

SparseMatrix assemble_boundary_mass_cr_midpoint(const FemSpace& space, bool all_edges) {
  if (space.kind != SpaceKind::cr) throw InputError("cr-midpoint boundary mass needs a CR space");
  const Mesh& mesh = *space.mesh;
  const auto lookup = edge_lookup(space.edges);
  Triplets trip;
  for (const auto& be : mesh.boundary_edges) {
    if (!all_edges && be.marker != Marker::steklov) continue;
    const double len = (mesh.vertex(be.a) - mesh.vertex(be.b)).norm();
    const int e = lookup.at(std::minmax(be.a, be.b));
    trip.emplace_back(e, e, len);
  }
  return from_triplets(space.num_dofs, trip);
}

SparseMatrix restrict_to_free(const FemSpace& space, const SparseMatrix& m) {
  const auto idx = space.free_index();
  const int nf = space.num_free();
  Triplets trip;
  trip.reserve(m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const int r = idx[it.row()], c = idx[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  return from_triplets(nf, trip);
}

Domain effective_domain(const Domain& domain, BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::dirichlet: return with_uniform_marker(domain, Marker::dirichlet);
    case BoundaryCondition::neumann: return with_uniform_marker(domain, Marker::neumann);
    case BoundaryCondition::steklov: return with_uniform_marker(domain, Marker::steklov);
    case BoundaryCondition::mixed: return domain;
  }
  return domain;
}

std::vector<std::shared_ptr<const Mesh>> mesh_hierarchy(const Domain& domain, int max_level) {
  std::vector<std::shared_ptr<const Mesh>> out;
  auto m = std::make_shared<const Mesh>(triangulate(domain));
  out.push_back(m);
  for (int l = 1; l <= max_level; ++l) {
    m = std::make_shared<const Mesh>(refine(*m));
    out.push_back(m);
  }
  return out;
}

FemSolution solve_fem_on_mesh(std::shared_ptr<const Mesh> mesh, const EigenProblemSpec& spec,
                              const std::string& domain_name) {
  if (spec.count < 1) throw InputError("eigenvalue count must be >= 1");
  FemSolution sol;
  sol.mesh = mesh;
  sol.space = make_space(mesh, spec.space);
  const FemSpace& space = sol.space;

  bool steklov = false;
  bool dirichlet = false;
  for (const auto& be : mesh->boundary_edges) {
    steklov = steklov || be.marker == Marker::steklov;
    dirichlet = dirichlet || be.marker == Marker::dirichlet;
  }
  if (steklov && spec.space == SpaceKind::cr && !spec.cr_midpoint)
    throw InputError("CR with Steklov needs the cr-midpoint variant flag");

  const SparseMatrix K = restrict_to_free(space, assemble_stiffness(space));
  const int nf = static_cast<int>(K.rows());
  const bool want = spec.want_vectors;
  Spectrum s;
  Eigen::MatrixXd free_vectors;

  if (!steklov) {
    const SparseMatrix M = restrict_to_free(space, assemble_mass(space, spec.weight));
    if (spec.count > nf) throw InputError("more eigenvalues requested than free dofs");
    if (nf <= spec.dense_limit) {
      s = solve_symdef(make_pencil(to_dense(K), to_dense(M), true, Definiteness::positive_definite),
                       true);
    } else {
      SubspaceOptions opt;
      opt.shift = dirichlet ? 0.0 : 1.0;
      opt.seed = spec.seed;
      s = lowest_eigenpairs(K, M, spec.count, opt);
    }
    s.values.conservativeResize(spec.count);
    s.imag = Eigen::VectorXd::Zero(spec.count);
    free_vectors = s.vectors.leftCols(spec.count);
    const double kn = sparse_norm(K), mn = sparse_norm(M);
    s.max_residual = 0.0;
    for (int i = 0; i < spec.count; ++i) {
      const Eigen::VectorXd v = free_vectors.col(i);
      const double r = (K * v - s.values[i] * (M * v)).norm() /
                       ((kn + std::abs(s.values[i]) * mn) * v.norm());
      s.max_residual = std::max(s.max_residual, r);
    }
    if (!dirichlet && std::abs(s.values[0]) <= 1e-8 * std::max(1.0, std::abs(s.values[std::min(1, spec.count - 1)])))
      s.zero_modes = 1;
  } else {
    const SparseMatrix Bfull = spec.space == SpaceKind::cr
                                   ? assemble_boundary_mass_cr_midpoint(space)
                                   : assemble_boundary_mass(space);
    const SparseMatrix B = restrict_to_free(space, Bfull);
    int boundary_dofs = 0;
    for (int k = 0; k < B.outerSize(); ++k) {
      double diag = 0.0;
      for (SparseMatrix::InnerIterator it(B, k); it; ++it)
        if (it.row() == it.col()) diag = it.value();
      if (diag > 0.0) ++boundary_dofs;
    }
    if (spec.count > boundary_dofs)
      throw InputError("requested " + std::to_string(spec.count) +
                       " finite Steklov eigenvalues but only " + std::to_string(boundary_dofs) +
                       " boundary dofs exist");
    const SparseMatrix G = K + B;
    if (nf <= spec.dense_limit) {
      // B v = mu G v, mu in [0, 1]; sigma = 1/mu - 1 for the largest mu
      const Spectrum mu = solve_symdef(
          make_pencil(to_dense(B), to_dense(G), true, Definiteness::positive_definite), true);
      s.values.resize(spec.count);
      free_vectors.resize(nf, spec.count);
      for (int i = 0; i < spec.count; ++i) {
        const Eigen::Index j = mu.values.size() - 1 - i;
        if (!(mu.values[j] > 1e-12)) throw NumericalError("Steklov pencil lost a finite eigenvalue");
        s.values[i] = 1.0 / mu.values[j] - 1.0;
        free_vectors.col(i) = mu.vectors.col(j);
      }
    } else {
      SubspaceOptions opt;
      opt.seed = spec.seed;
      const Spectrum lam = lowest_eigenpairs(G, B, spec.count, opt);
      s.values = lam.values.array() - 1.0;
      free_vectors = lam.vectors;
    }
    s.imag = Eigen::VectorXd::Zero(spec.count);
    const double gn = sparse_norm(G), bn = sparse_norm(B);
    for (int i = 0; i < spec.count; ++i) {
      const Eigen::VectorXd v = free_vectors.col(i);
      const double lam = s.values[i] + 1.0;
      const double r = (G * v - lam * (B * v)).norm() / ((gn + lam * bn) * v.norm());
      s.max_residual = std::max(s.max_residual, r);
    }
    if (!dirichlet && std::abs(s.values[0]) <= 1e-8) s.zero_modes = 1;
  }
  assign_clusters(s);

  std::ostringstream param;
  param << "h=" << mesh->h << ";level=" << mesh->level;
  s.provenance = {method_tag(spec.space, steklov ? BoundaryCondition::steklov : spec.bc,
                             spec.cr_midpoint),
                  param.str(), domain_name};

  // Full dof vectors and vertex values for plotting.
  const auto idx = space.free_index();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(space.num_dofs, spec.count);
  for (int d = 0; d < space.num_dofs; ++d)
    if (idx[d] >= 0) full.row(d) = free_vectors.row(idx[d]);
  const int nv = mesh->num_vertices();
  if (spec.space == SpaceKind::cr) {
    sol.vertex_values = Eigen::MatrixXd::Zero(nv, spec.count);
    Eigen::VectorXd touches = Eigen::VectorXd::Zero(nv);
    for (std::size_t e = 0; e < space.edges.edges.size(); ++e)
      for (int v : space.edges.edges[e]) {
        sol.vertex_values.row(v) += full.row(e);
        touches[v] += 1.0;
      }
    for (int v = 0; v < nv; ++v) sol.vertex_values.row(v) /= std::max(1.0, touches[v]);
  } else {
    sol.vertex_values = full.topRows(nv);
  }
  if (want) s.vectors = std::move(full);
  else s.vectors.resize(0, 0);
  sol.spectrum = std::move(s);
  return sol;
}

MeshQuadrature mesh_quadrature(const Mesh& mesh) {
  const auto& rule = degree5_rule();
  const int nt = mesh.num_triangles();
  MeshQuadrature q;
  q.points.resize(2, nt * static_cast<int>(rule.size()));
  q.weights.resize(q.points.cols());
  int k = 0;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = std::abs(mesh.signed_area(t));
    for (const auto& qp : rule) {
      q.points.col(k) = qp.bary[0] * mesh.vertices.col(tri[0]) + qp.bary[1] * mesh.vertices.col(tri[1]) +
                        qp.bary[2] * mesh.vertices.col(tri[2]);
      q.weights[k++] = qp.weight * area;
    }
  }
  return q;
}

Spectrum solve_fem(const Domain& domain, const EigenProblemSpec& spec) {
  if (!domain.is_polygon()) throw InputError("FEM needs a polygonal domain");
  const Domain eff = effective_domain(domain, spec.bc);
  EigenProblemSpec local = spec;
  auto mesh = std::make_shared<const Mesh>(triangulate(eff, spec.level));
  return solve_fem_on_mesh(mesh, local, domain.name).spectrum;
}

}  // namespace spectra
