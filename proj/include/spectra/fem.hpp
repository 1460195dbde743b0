#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "spectra/geometry.hpp"
#include "spectra/pencil.hpp"
#include "spectra/reference.hpp"

namespace spectra {

enum class SpaceKind { p1, p2, cr };

std::string_view to_string(SpaceKind k);

using SparseMatrix = Eigen::SparseMatrix<double>;

// Degrees of freedom of a finite element space on a mesh.
//   P1: one per vertex.  P2: vertices, then one per edge midpoint.
//   CR: one per edge midpoint.
struct FemSpace {
  SpaceKind kind = SpaceKind::p1;
  std::shared_ptr<const Mesh> mesh;
  EdgeTable edges;
  int num_dofs = 0;
  std::vector<std::array<int, 6>> element_dofs;  // first 3 (P1/CR) or 6 (P2) used
  std::vector<bool> constrained;                 // Dirichlet dofs
  std::vector<bool> on_boundary;

  int dofs_per_element() const { return kind == SpaceKind::p2 ? 6 : 3; }
  int num_free() const;
  // Map from dof to its index among the unconstrained dofs, or -1.
  std::vector<int> free_index() const;
};

// A vertex shared by a Dirichlet edge and a non-Dirichlet edge is constrained.
FemSpace make_space(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

SparseMatrix assemble_stiffness(const FemSpace& space);
SparseMatrix assemble_mass(const FemSpace& space, Weight weight);
// Boundary mass over edges marked `steklov` (all boundary edges if
// `all_edges`). Throws InputError for CR spaces.
SparseMatrix assemble_boundary_mass(const FemSpace& space, bool all_edges = false);
// Midpoint-lumped boundary mass on CR edge dofs ("cr-midpoint").
SparseMatrix assemble_boundary_mass_cr_midpoint(const FemSpace& space, bool all_edges = false);

// Restriction to the unconstrained dofs (row/column deletion).
SparseMatrix restrict_to_free(const FemSpace& space, const SparseMatrix& m);

struct EigenProblemSpec {
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  Weight weight = Weight::unit;
  int count = 6;
  SpaceKind space = SpaceKind::p1;
  int level = 3;
  bool cr_midpoint = false;   // required for CR with Steklov
  int dense_limit = 400;      // above this the sparse subspace iteration is used
  bool want_vectors = false;
  unsigned seed = 12345;      // start block of the subspace iteration
};

struct FemSolution {
  Spectrum spectrum;
  std::shared_ptr<const Mesh> mesh;
  FemSpace space;
  // Eigenvector values at mesh vertices (num_vertices x count), for plotting.
  Eigen::MatrixXd vertex_values;
};

// Domain with markers as used for a given boundary condition: dirichlet,
// neumann and steklov override every edge; mixed keeps the domain's markers.
Domain effective_domain(const Domain& domain, BoundaryCondition bc);

Spectrum solve_fem(const Domain& domain, const EigenProblemSpec& spec);
FemSolution solve_fem_on_mesh(std::shared_ptr<const Mesh> mesh, const EigenProblemSpec& spec,
                              const std::string& domain_name);

// Meshes at levels 0..max_level (coarse mesh refined repeatedly).
std::vector<std::shared_ptr<const Mesh>> mesh_hierarchy(const Domain& domain, int max_level);

std::string method_tag(SpaceKind kind, BoundaryCondition bc, bool cr_midpoint);

// Degree-5 quadrature nodes and weights over every triangle of a mesh.
struct MeshQuadrature {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;
};
MeshQuadrature mesh_quadrature(const Mesh& mesh);

}  // namespace spectra
