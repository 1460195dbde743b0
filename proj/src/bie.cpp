#include "spectra/bie.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "spectra/error.hpp"
#include "spectra/reference.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic log-quadrature weights: sum_j r[(i-j) mod N] f(t_j) approximates
// int_0^{2pi} log(4 sin^2((t_i - s)/2)) f(s) ds for N = 2n equispaced nodes.
Eigen::VectorXd log_weights(int N) {
  const int n = N / 2;
  Eigen::VectorXd r(N);
  for (int d = 0; d < N; ++d) {
    const double t = 2.0 * kPi * d / N;
    double s = 0.0;
    for (int m = 1; m < n; ++m) s += std::cos(m * t) / m;
    r[d] = -2.0 * kPi / n * s - kPi / (static_cast<double>(n) * n) * std::cos(n * t);
  }
  return r;
}

}  // namespace

KernelMatrices assemble_kernels(const BoundaryQuadrature& quad) {
  const int N = quad.size();
  const double c = -1.0 / (2.0 * kPi);
  KernelMatrices k;
  k.quad = quad;
  k.normalization = c;
  k.single_layer.resize(N, N);
  k.kprime.resize(N, N);

  for (std::size_t a = 0; a < quad.curves.size(); ++a) {
    const CurveNodes& ca = quad.curves[a];
    const int oa = quad.offset(static_cast<int>(a));
    for (std::size_t b = 0; b < quad.curves.size(); ++b) {
      const CurveNodes& cb = quad.curves[b];
      const int ob = quad.offset(static_cast<int>(b));
      if (a == b) {
        const int n = ca.size();
        const Eigen::VectorXd r = log_weights(n);
        const double signed_curv = ca.orientation == Orientation::outer_ccw ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
          const Eigen::Vector2d xi = ca.points.col(i);
          const Eigen::Vector2d ni = ca.normals.col(i);
          for (int j = 0; j < n; ++j) {
            const int d = ((i - j) % n + n) % n;
            double smooth;
            double kp;
            if (i == j) {
              smooth = std::log(ca.speed);
              kp = 0.5 * signed_curv * ca.curvature[i];
            } else {
              const Eigen::Vector2d diff = xi - ca.points.col(j);
              const double dt = ca.parameter[i] - ca.parameter[j];
              const double s = std::sin(0.5 * dt);
              smooth = std::log(diff.norm()) - 0.5 * std::log(4.0 * s * s);
              kp = diff.dot(ni) / diff.squaredNorm();
            }
            k.single_layer(oa + i, ob + j) =
                c * (0.5 * r[d] + 2.0 * kPi / n * smooth) * ca.speed;
            k.kprime(oa + i, ob + j) = c * kp * ca.weights[j];
          }
        }
      } else {
        for (int i = 0; i < ca.size(); ++i) {
          const Eigen::Vector2d xi = ca.points.col(i);
          const Eigen::Vector2d ni = ca.normals.col(i);
          for (int j = 0; j < cb.size(); ++j) {
            const Eigen::Vector2d diff = xi - cb.points.col(j);
            const double w = cb.weights[j];
            k.single_layer(oa + i, ob + j) = c * std::log(diff.norm()) * w;
            k.kprime(oa + i, ob + j) = c * diff.dot(ni) / diff.squaredNorm() * w;
          }
        }
      }
    }
  }

  const Eigen::VectorXd w = quad.all_weights();
  k.mean = Eigen::VectorXd::Ones(N) * (w.transpose() / w.sum());
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(N, N) - k.mean;
  k.S0 = k.single_layer * P;
  k.Khalf = (0.5 * Eigen::MatrixXd::Identity(N, N) + k.kprime) * P;
  return k;
}

Pencil steklov_pencil(const KernelMatrices& k) {
  return make_pencil(k.Khalf, k.S0 + k.mean, false, Definiteness::indefinite);
}

std::vector<int> annulus_nodes(const Domain& annulus, int n, bool n_per_curve) {
  if (n_per_curve) return std::vector<int>(annulus.circles.size(), n);
  return split_by_circumference(annulus, n);
}

Spectrum solve_steklov_bie(const Domain& domain, int n_per_curve, const BieOptions& opt) {
  return solve_steklov_bie(domain, std::vector<int>(domain.circles.size(), n_per_curve), opt);
}

Spectrum solve_steklov_bie(const Domain& domain, const std::vector<int>& n_per_curve,
                           const BieOptions& opt) {
  if (domain.is_polygon()) throw InputError("BIE Steklov needs a curve domain");
  std::vector<int> nodes = n_per_curve;
  KernelMatrices k;
  while (true) {
    k = assemble_kernels(boundary_quadrature(domain, nodes));
    const double cond = condition_estimate(k.S0 + k.mean);
    if (cond <= opt.cond_gate) break;
    std::vector<int> halved = nodes;
    for (int& n : halved) n = std::max(4, (n / 4) * 2);
    if (halved == nodes) throw NumericalError("single-layer matrix is ill-conditioned at minimal N");
    std::cerr << "warning: single-layer condition estimate " << cond << " above gate; halving N\n";
    nodes = halved;
  }

  Spectrum s = solve_general(steklov_pencil(k), opt.want_vectors);
  // ascending by real part
  const Eigen::Index n = s.values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return s.values[a] < s.values[b]; });
  Spectrum out;
  out.values.resize(n);
  out.imag.resize(n);
  if (opt.want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = s.values[order[i]];
    out.imag[i] = s.imag[order[i]];
    if (opt.want_vectors) out.vectors.col(i) = s.vectors.col(order[i]);
  }
  const Eigen::Index check = opt.count > 0 ? std::min<Eigen::Index>(opt.count, n) : n;
  for (Eigen::Index i = 0; i < check; ++i) {
    if (std::abs(out.imag[i]) > opt.imag_tol * std::abs(std::complex<double>(out.values[i], out.imag[i]))) {
      std::ostringstream msg;
      msg << "eigenvalue " << i << " = " << out.values[i] << " + " << out.imag[i]
          << "i is not real (under-resolved boundary; increase N)";
      throw NumericalError(msg.str());
    }
  }
  if (check > 0 && out.values[0] < -1e-10) {
    std::ostringstream msg;
    msg << "negative Steklov eigenvalue " << out.values[0]
        << " (under-resolved boundary; increase N)";
    throw NumericalError(msg.str());
  }
  if (n > 0 && std::abs(out.values[0]) <= 1e-8) out.zero_modes = 1;
  assign_clusters(out);
  std::ostringstream param;
  param << "N=";
  for (std::size_t i = 0; i < nodes.size(); ++i) param << (i ? "+" : "") << nodes[i];
  out.provenance = {"bie", param.str(), domain.name};
  return out;
}

Eigen::VectorXd evaluate_interior(const BoundaryQuadrature& quad, const Eigen::VectorXd& density,
                                  const Eigen::Matrix2Xd& points) {
  if (density.size() != quad.size()) throw InputError("density size does not match the quadrature");
  const Eigen::Matrix2Xd y = quad.all_points();
  const Eigen::VectorXd w = quad.all_weights();
  const double spacing = w.maxCoeff();
  const Eigen::VectorXd centered = density.array() - density.dot(w) / w.sum();
  Eigen::VectorXd u(points.cols());
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    const Eigen::Vector2d x = points.col(p);
    double dist = INFINITY;
    for (const auto& c : quad.curves) dist = std::min(dist, std::abs((x - c.center).norm() - c.radius));
    if (dist < 3.0 * spacing)
      throw InputError("evaluation point closer than three node spacings to the boundary");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < y.cols(); ++j)
      sum += std::log((x - y.col(j)).norm()) * centered[j] * w[j];
    u[p] = -sum / (2.0 * kPi);
  }
  return u;
}

std::vector<SweepRow> sweep_annulus(const std::vector<double>& eps_grid,
                                    const std::vector<int>& k_list, const SweepOptions& opt) {
  if (k_list.empty()) throw InputError("sweep needs at least one eigenvalue index");
  const int kmax = *std::max_element(k_list.begin(), k_list.end());
  for (double eps : eps_grid)
    if (!(eps >= 0.0) || eps + opt.inner_radius >= 1.0)
      throw InputError("eccentricity " + std::to_string(eps) + " lets the inner circle touch the outer one");
  const AnalyticSpectrum concentric = concentric_annulus_steklov(opt.inner_radius, 1.0, kmax + 1);

  auto run = [&](double eps) {
    Domain d = make_annulus(eps, opt.inner_radius);
    const auto nodes = annulus_nodes(d, opt.n_total, opt.n_per_curve);
    BieOptions bo;
    bo.count = kmax + 1;
    const Spectrum s = solve_steklov_bie(d, nodes, bo);
    if (s.size() <= kmax) throw InputError("sweep index exceeds the number of computed eigenvalues");
    std::vector<SweepRow> rows;
    const int total = std::accumulate(nodes.begin(), nodes.end(), 0);
    for (int k : k_list) {
      const double ref = concentric.values[k];
      rows.push_back({eps, k, s.values[k], ref != 0.0 ? s.values[k] / ref : 1.0, total});
    }
    return rows;
  };

  std::vector<std::vector<SweepRow>> per_eps(eps_grid.size());
  if (opt.threads <= 1) {
    for (std::size_t i = 0; i < eps_grid.size(); ++i) per_eps[i] = run(eps_grid[i]);
  } else {
    std::size_t next = 0;
    while (next < eps_grid.size()) {
      std::vector<std::future<std::vector<SweepRow>>> jobs;
      const std::size_t start = next;
      for (int t = 0; t < opt.threads && next < eps_grid.size(); ++t, ++next)
        jobs.push_back(std::async(std::launch::async, run, eps_grid[next]));
      for (std::size_t j = 0; j < jobs.size(); ++j) per_eps[start + j] = jobs[j].get();
    }
  }
  std::vector<std::size_t> order(eps_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eps_grid[a] < eps_grid[b]; });
  std::vector<SweepRow> rows;
  for (std::size_t i : order)
    for (const auto& r : per_eps[i]) rows.push_back(r);
  return rows;
}

}  // namespace spectra
