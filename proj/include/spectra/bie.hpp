#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spectra/geometry.hpp"
#include "spectra/pencil.hpp"

namespace spectra {

// Nystrom matrices of the Laplace layer potentials on a multi-circle boundary,
// with fundamental solution -(1/2pi) log|x - y|.
struct KernelMatrices {
  Eigen::MatrixXd single_layer;  // S, log singularity split per curve
  Eigen::MatrixXd kprime;        // K' (adjoint double layer), no jump term
  Eigen::MatrixXd S0;            // S (I - W)
  Eigen::MatrixXd Khalf;         // (I/2 + K') (I - W)
  Eigen::MatrixXd mean;          // W: rank-one arclength average
  BoundaryQuadrature quad;
  double normalization = 0.0;    // -1/(2 pi)

  Eigen::Index size() const { return S0.rows(); }
};

KernelMatrices assemble_kernels(const BoundaryQuadrature& quad);

// Steklov pencil Khalf phi = sigma (S0 + W) phi. The W term lifts the density
// mean to the additive constant of the harmonic extension.
Pencil steklov_pencil(const KernelMatrices& k);

struct BieOptions {
  int count = 0;            // leading eigenvalues that must be real (0: all)
  double imag_tol = 1e-6;   // relative imaginary-part gate on those
  double cond_gate = 1e12;  // S-side condition gate; N is halved above it
  bool want_vectors = false;
};

Spectrum solve_steklov_bie(const Domain& domain, const std::vector<int>& n_per_curve,
                           const BieOptions& opt = {});
Spectrum solve_steklov_bie(const Domain& domain, int n_per_curve, const BieOptions& opt = {});

// Single-layer potential of the mean-subtracted density at interior points.
// Points closer than three node spacings to the boundary are rejected.
Eigen::VectorXd evaluate_interior(const BoundaryQuadrature& quad, const Eigen::VectorXd& density,
                                  const Eigen::Matrix2Xd& points);

struct SweepRow {
  double eps = 0.0;
  int k = 0;
  double sigma = 0.0;
  double ratio_to_concentric = 0.0;
  int n = 0;
};

struct SweepOptions {
  int n_total = 660;         // nodes over both circles, split by circumference
  bool n_per_curve = false;  // interpret n_total as the count on each curve
  double inner_radius = 0.1;
  int threads = 1;
};

// Steklov eigenvalues sigma_k (k counted from sigma_0 = 0) of the eccentric
// annulus B_1(0,0) minus B_0.1(0,eps) for every eps, ordered by eps then k.
std::vector<SweepRow> sweep_annulus(const std::vector<double>& eps_grid,
                                    const std::vector<int>& k_list, const SweepOptions& opt = {});

// Node counts per curve for the annulus under a sweep's N convention.
std::vector<int> annulus_nodes(const Domain& annulus, int n, bool n_per_curve);

}  // namespace spectra
