#include "spectra/mps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spectra/error.hpp"
#include "spectra/fem.hpp"
#include "spectra/specfun.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;

double radical_inverse(int i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

void require_polygon(const Domain& d) {
  if (!d.is_polygon()) throw InputError("MPS needs a polygon domain");
}

int total_size(const std::vector<CornerBasis>& basis) {
  int n = 0;
  for (const auto& b : basis) n += b.size;
  return n;
}

// Edges on which some basis function is not identically zero.
std::vector<int> collocation_edges(const Domain& d, const std::vector<CornerBasis>& basis) {
  const int nv = static_cast<int>(d.vertices.size());
  std::vector<int> edges;
  for (int e = 0; e < nv; ++e) {
    bool vanishes = true;
    for (const auto& b : basis)
      if (b.vertex != e && b.vertex != (e + 1) % nv) vanishes = false;
    if (!vanishes) edges.push_back(e);
  }
  return edges;
}

Eigen::Matrix2Xd boundary_points(const Domain& d, const std::vector<int>& edges, int count) {
  const int nv = static_cast<int>(d.vertices.size());
  double length = 0.0;
  for (int e : edges) length += (d.vertices[(e + 1) % nv] - d.vertices[e]).norm();
  std::vector<Eigen::Vector2d> pts;
  for (int e : edges) {
    const Eigen::Vector2d a = d.vertices[e], b = d.vertices[(e + 1) % nv];
    const int m = std::max(2, static_cast<int>(std::ceil(count * (b - a).norm() / length)));
    // Chebyshev spacing clusters points toward the corners
    for (int j = 0; j < m; ++j) {
      const double t = 0.5 * (1.0 - std::cos(kPi * (j + 0.5) / m));
      pts.push_back(a + t * (b - a));
    }
  }
  Eigen::Matrix2Xd out(2, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out.col(i) = pts[i];
  return out;
}

Eigen::Matrix2Xd interior_points(const Domain& d, int count, int skip) {
  Eigen::Vector2d lo = d.vertices[0], hi = d.vertices[0];
  for (const auto& v : d.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  Eigen::Matrix2Xd out(2, count);
  int found = 0;
  for (int i = skip; found < count; ++i) {
    const Eigen::Vector2d p(lo.x() + (hi.x() - lo.x()) * radical_inverse(i, 2),
                            lo.y() + (hi.y() - lo.y()) * radical_inverse(i, 3));
    if (d.contains(p) && d.distance_to_boundary(p) > 1e-9) out.col(found++) = p;
  }
  return out;
}

Eigen::MatrixXd basis_matrix(const std::vector<CornerBasis>& basis, double lambda,
                             const Eigen::Matrix2Xd& pts) {
  const double k = std::sqrt(lambda);
  Eigen::MatrixXd A(pts.cols(), total_size(basis));
  int col = 0;
  for (const auto& b : basis) {
    for (Eigen::Index p = 0; p < pts.cols(); ++p) {
      const auto [r, theta] = b.polar(pts.col(p));
      for (int j = 1; j <= b.size; ++j) {
        const double nu = b.alpha * j;
        A(p, col + j - 1) = r == 0.0 ? 0.0 : bessel_j(nu, k * r) * std::sin(nu * theta);
      }
    }
    col += b.size;
  }
  return A;
}

struct Indicator {
  double smin = 1.0;
  Eigen::VectorXd coefficients;
};

Indicator indicator(const Domain& d, const std::vector<CornerBasis>& basis, double lambda,
                    const MpsOptions& opt, bool want_coefficients) {
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  const int n = total_size(basis);
  const int nb = static_cast<int>(std::ceil(opt.oversample * n));
  const Eigen::Matrix2Xd bpts = boundary_points(d, collocation_edges(d, basis), nb);
  const Eigen::Matrix2Xd ipts = interior_points(d, static_cast<int>(bpts.cols()), opt.halton_skip);
  const Eigen::Index mb = bpts.cols();

  Eigen::MatrixXd A(mb + ipts.cols(), n);
  A.topRows(mb) = basis_matrix(basis, lambda, bpts);
  A.bottomRows(ipts.cols()) = basis_matrix(basis, lambda, ipts);
  const Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int j = 0; j < n; ++j)
    if (scale[j] > 0.0) A.col(j) /= scale[j];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-14);
  const Eigen::Index rank = qr.rank();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_int(A.bottomRows(ipts.cols()));
  qr_int.setThreshold(1e-14);
  if (rank == 0 || qr_int.rank() < std::max<Eigen::Index>(1, rank / 2)) {
    std::ostringstream msg;
    msg << "interior block has rank " << qr_int.rank() << " of " << rank << " (ill-posed basis)";
    throw NumericalError(msg.str());
  }
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), rank);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q.topRows(mb), Eigen::ComputeThinV);
  Indicator out;
  out.smin = std::clamp(svd.singularValues()[rank - 1], 0.0, 1.0);
  if (want_coefficients) {
    const Eigen::VectorXd v = svd.matrixV().col(rank - 1);
    const Eigen::VectorXd y =
        qr.matrixR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>().solve(v);
    out.coefficients = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < rank; ++j) {
      const Eigen::Index c = qr.colsPermutation().indices()[j];
      out.coefficients[c] = y[j] / scale[c];
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> CornerBasis::polar(const Eigen::Vector2d& x) const {
  const Eigen::Vector2d d = x - origin;
  const double r = d.norm();
  double theta = std::atan2(d.y(), d.x()) - direction;
  // branch cut along the bisector of the exterior wedge
  const double hi = 0.5 * angle + kPi;
  while (theta > hi) theta -= 2.0 * kPi;
  while (theta <= hi - 2.0 * kPi) theta += 2.0 * kPi;
  return {r, theta};
}

CornerBasis make_corner_basis(const Domain& domain, int vertex, int size) {
  require_polygon(domain);
  const int nv = static_cast<int>(domain.vertices.size());
  if (vertex < 0 || vertex >= nv) throw InputError("corner index out of range");
  if (size < 1) throw InputError("basis size must be >= 1");
  const Eigen::Vector2d c = domain.vertices[vertex];
  const Eigen::Vector2d out = domain.vertices[(vertex + 1) % nv] - c;
  const Eigen::Vector2d in = domain.vertices[(vertex + nv - 1) % nv] - c;
  CornerBasis b;
  b.vertex = vertex;
  b.origin = c;
  b.direction = std::atan2(out.y(), out.x());
  double angle = std::atan2(in.y(), in.x()) - b.direction;
  while (angle <= 0.0) angle += 2.0 * kPi;
  while (angle > 2.0 * kPi) angle -= 2.0 * kPi;
  b.angle = angle;
  b.alpha = kPi / angle;
  b.size = size;
  if (b.alpha * size > kBesselMaxOrder) {
    std::ostringstream msg;
    msg << "basis order " << b.alpha * size << " exceeds the Bessel order limit " << kBesselMaxOrder;
    throw InputError(msg.str());
  }
  return b;
}

std::vector<CornerBasis> default_basis(const Domain& domain, int size, bool all_corners) {
  require_polygon(domain);
  const int nv = static_cast<int>(domain.vertices.size());
  std::vector<CornerBasis> out;
  for (int v = 0; v < nv; ++v) out.push_back(make_corner_basis(domain, v, size));
  if (all_corners) return out;
  const auto widest = std::max_element(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.angle < b.angle - 1e-12;
  });
  return {*widest};
}

double subspace_indicator(const Domain& domain, const std::vector<CornerBasis>& basis,
                          double lambda, const MpsOptions& opt) {
  require_polygon(domain);
  return indicator(domain, basis, lambda, opt, false).smin;
}

std::vector<SminPoint> sigma_min_sweep(const Domain& domain, const std::vector<CornerBasis>& basis,
                                       const std::vector<double>& lambda_grid,
                                       const MpsOptions& opt) {
  require_polygon(domain);
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) throw InputError("lambda grid must be positive");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) throw InputError("lambda grid must be ascending");
  }
  std::vector<SminPoint> out;
  for (double l : lambda_grid) out.push_back({l, indicator(domain, basis, l, opt, false).smin});
  return out;
}

MpsCandidate refine_minimum(const Domain& domain, const std::vector<CornerBasis>& basis, double lo,
                            double hi, const MpsOptions& opt) {
  require_polygon(domain);
  if (!(lo > 0.0 && hi > lo)) throw InputError("bracket must satisfy 0 < lo < hi");
  auto s = [&](double l) { return indicator(domain, basis, l, opt, false).smin; };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = s(x1), f2 = s(x2);
  const double tol = 1e-9 * hi;
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = s(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = s(x2);
    }
  }
  const double lambda = 0.5 * (a + b);
  const double edge = 1e-6 * (hi - lo);
  const double fmin = s(lambda);
  if (lambda - lo < edge || hi - lambda < edge || !(fmin < s(lo) && fmin < s(hi))) {
    std::ostringstream msg;
    msg << "no interior minimum of s(lambda) in [" << lo << ", " << hi << "]";
    throw NumericalError(msg.str());
  }
  Indicator ind = indicator(domain, basis, lambda, opt, true);
  const MeshQuadrature q = mesh_quadrature(triangulate(domain, 3));
  const Eigen::VectorXd u = evaluate_mps(basis, lambda, ind.coefficients, q.points);
  const double norm = std::sqrt((u.array().square() * q.weights.array()).sum());
  if (!(norm > 0.0)) throw NumericalError("candidate eigenfunction vanishes on the mesh");
  return {lambda, ind.smin, ind.coefficients / norm};
}

Eigen::VectorXd evaluate_mps(const std::vector<CornerBasis>& basis, double lambda,
                             const Eigen::VectorXd& coefficients, const Eigen::Matrix2Xd& points) {
  if (coefficients.size() != total_size(basis)) throw InputError("coefficient count does not match the basis");
  return basis_matrix(basis, lambda, points) * coefficients;
}

Enclosure fhm_enclosure(double lambda_h, double epsilon) {
  if (!(lambda_h > 0.0)) throw InputError("lambda_h must be positive");
  if (!(epsilon >= 0.0)) throw InputError("epsilon must be nonnegative");
  if (epsilon >= 1.0) {
    std::ostringstream msg;
    msg << "boundary sup " << epsilon << " >= 1: candidate not eigenfunction-like";
    throw NumericalError(msg.str());
  }
  const double r = lambda_h * (std::sqrt(2.0) * epsilon + epsilon * epsilon) / (1.0 - epsilon * epsilon);
  return {lambda_h, lambda_h - r, lambda_h + r, epsilon, true};
}

Enclosure fhm_enclosure(const Domain& domain, double lambda_h, const Eigen::VectorXd& coefficients,
                        const std::vector<CornerBasis>& basis, int samples_per_edge) {
  require_polygon(domain);
  const int nv = static_cast<int>(domain.vertices.size());
  Eigen::Matrix2Xd pts(2, nv * samples_per_edge);
  for (int e = 0; e < nv; ++e) {
    const Eigen::Vector2d a = domain.vertices[e], b = domain.vertices[(e + 1) % nv];
    for (int j = 0; j < samples_per_edge; ++j)
      pts.col(e * samples_per_edge + j) = a + (static_cast<double>(j) / samples_per_edge) * (b - a);
  }
  const Eigen::VectorXd u = evaluate_mps(basis, lambda_h, coefficients, pts);
  return fhm_enclosure(lambda_h, u.cwiseAbs().maxCoeff());
}

}  // namespace spectra
