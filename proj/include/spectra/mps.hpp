#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spectra/geometry.hpp"

namespace spectra {

// Fourier-Bessel functions J_{alpha k}(sqrt(lambda) r) sin(alpha k theta),
// k = 1..size, in the polar frame of one polygon corner. theta is measured
// counterclockwise from the outgoing edge, so every function vanishes on both
// edges meeting at the corner.
struct CornerBasis {
  int vertex = 0;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double angle = 0.0;       // interior angle pi/alpha
  double alpha = 1.0;
  int size = 0;
  double direction = 0.0;   // polar angle of the outgoing edge

  // (r, theta) of a point in the corner frame
  std::pair<double, double> polar(const Eigen::Vector2d& x) const;
};

CornerBasis make_corner_basis(const Domain& domain, int vertex, int size);
// The corner with the largest interior angle, or every corner with `all_corners`.
std::vector<CornerBasis> default_basis(const Domain& domain, int size, bool all_corners = false);

struct MpsOptions {
  double oversample = 2.0;  // boundary points per basis function
  int halton_skip = 17;     // fixed start of the interior Halton sequence
};

struct SminPoint {
  double lambda = 0.0;
  double smin = 0.0;
};

// Subspace-angle indicator s(lambda) in [0, 1].
double subspace_indicator(const Domain& domain, const std::vector<CornerBasis>& basis,
                          double lambda, const MpsOptions& opt = {});
std::vector<SminPoint> sigma_min_sweep(const Domain& domain, const std::vector<CornerBasis>& basis,
                                       const std::vector<double>& lambda_grid,
                                       const MpsOptions& opt = {});

struct MpsCandidate {
  double lambda = 0.0;
  double smin = 0.0;
  Eigen::VectorXd coefficients;  // stacked per corner, unit L2 norm over the domain
};

// Golden-section search on s(lambda) inside the bracket, then coefficients
// normalized by degree-5 quadrature on a level-3 mesh.
MpsCandidate refine_minimum(const Domain& domain, const std::vector<CornerBasis>& basis, double lo,
                            double hi, const MpsOptions& opt = {});

Eigen::VectorXd evaluate_mps(const std::vector<CornerBasis>& basis, double lambda,
                             const Eigen::VectorXd& coefficients, const Eigen::Matrix2Xd& points);

struct Enclosure {
  double center = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double epsilon = 0.0;
  bool caveat = true;  // sup estimated by sampling, norm by quadrature

  double radius() const { return upper - center; }
};

Enclosure fhm_enclosure(double lambda_h, double epsilon);
// epsilon is the largest |u_h| over samples_per_edge points on every edge.
Enclosure fhm_enclosure(const Domain& domain, double lambda_h, const Eigen::VectorXd& coefficients,
                        const std::vector<CornerBasis>& basis, int samples_per_edge = 1000);

}  // namespace spectra
