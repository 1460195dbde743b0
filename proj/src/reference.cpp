#include "spectra/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spectra/error.hpp"
#include "spectra/specfun.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;

bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Index sets along one rectangle axis: Dirichlet/Dirichlet -> 1,2,..;
// Neumann/Neumann -> 0,1,..; mixed -> 1/2, 3/2, ...
double axis_index(Marker lo, Marker hi, int k) {
  const bool n_lo = lo == Marker::neumann, n_hi = hi == Marker::neumann;
  if (n_lo && n_hi) return k;
  if (!n_lo && !n_hi) return k + 1;
  return k + 0.5;
}

std::string format(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::dirichlet: return "dirichlet";
    case BoundaryCondition::neumann: return "neumann";
    case BoundaryCondition::mixed: return "mixed";
    case BoundaryCondition::steklov: return "steklov";
  }
  return "?";
}

BoundaryCondition parse_bc(std::string_view s) {
  if (s == "dirichlet") return BoundaryCondition::dirichlet;
  if (s == "neumann") return BoundaryCondition::neumann;
  if (s == "mixed") return BoundaryCondition::mixed;
  if (s == "steklov") return BoundaryCondition::steklov;
  throw InputError("unknown boundary condition '" + std::string(s) + "'");
}

std::vector<AnalyticSpectrum::Level> AnalyticSpectrum::levels() const {
  std::vector<Level> out;
  for (double v : values) {
    if (!out.empty() && same_value(out.back().value, v)) ++out.back().multiplicity;
    else out.push_back({v, 1});
  }
  return out;
}

AnalyticSpectrum disk_spectra(BoundaryCondition kind, double radius, int count) {
  if (!(radius > 0.0)) throw InputError("disk radius must be positive");
  if (count < 1) throw InputError("count must be >= 1");
  AnalyticSpectrum s;
  s.problem = "disk-" + std::string(to_string(kind));
  s.parameters = "R=" + format(radius);

  if (kind == BoundaryCondition::steklov) {
    s.generator = "sigma = n/R, multiplicity 2 for n >= 1";
    s.values.push_back(0.0);
    for (int n = 1; static_cast<int>(s.values.size()) < count; ++n) {
      s.values.push_back(n / radius);
      s.values.push_back(n / radius);
    }
    s.values.resize(count);
    return s;
  }
  if (kind == BoundaryCondition::mixed) throw InputError("disk spectra: mixed is not defined");

  const bool dirichlet = kind == BoundaryCondition::dirichlet;
  s.generator = dirichlet ? "lambda = (j_{n,k}/R)^2" : "lambda = (j'_{n,k}/R)^2 and 0";
  // Enumerate all (n, k) with zero below `bound`; zeros satisfy j_{n,k} > n.
  double bound = 4.0 * std::sqrt(static_cast<double>(count)) + 4.0;
  while (true) {
    std::vector<std::pair<double, int>> found;  // (zero, multiplicity)
    if (!dirichlet) found.push_back({0.0, 1});
    for (int n = 0; n < bound && n <= kBesselMaxOrder; ++n) {
      for (int k = 1; k <= kBesselMaxZeroIndex; ++k) {
        const double z = dirichlet ? bessel_j_zero(n, k) : bessel_j_derivative_zero(n, k);
        if (z > bound) break;
        found.push_back({z, n == 0 ? 1 : 2});
      }
    }
    int total = 0;
    for (const auto& f : found) total += f.second;
    if (total >= count) {
      std::sort(found.begin(), found.end());
      for (const auto& [z, m] : found)
        for (int i = 0; i < m; ++i) s.values.push_back((z / radius) * (z / radius));
      s.values.resize(count);
      return s;
    }
    bound *= 1.5;
  }
}

AnalyticSpectrum rectangle_spectra(BoundaryCondition kind, double a, double b,
                                   const RectangleSides& sides, int count) {
  if (!(a > 0.0 && b > 0.0)) throw InputError("rectangle sides must be positive");
  if (count < 1) throw InputError("count must be >= 1");
  RectangleSides s = sides;
  if (kind == BoundaryCondition::dirichlet) s = {};
  if (kind == BoundaryCondition::neumann)
    s = {Marker::neumann, Marker::neumann, Marker::neumann, Marker::neumann};
  if (kind == BoundaryCondition::steklov) throw InputError("rectangle Steklov has no closed form here");
  for (Marker m : {s.left, s.right, s.bottom, s.top})
    if (m == Marker::steklov) throw InputError("rectangle sides must be dirichlet or neumann");

  AnalyticSpectrum out;
  out.problem = "rectangle-" + std::string(to_string(kind));
  out.parameters = "a=" + format(a) + ",b=" + format(b);
  out.generator = "pi^2 (m^2/a^2 + n^2/b^2) over the separable index sets";
  // Enough indices per axis to contain the first `count` values.
  const int span = count + 2;
  std::vector<double> all;
  for (int i = 0; i < span; ++i) {
    const double m = axis_index(s.left, s.right, i);
    for (int j = 0; j < span; ++j) {
      const double n = axis_index(s.bottom, s.top, j);
      all.push_back(kPi * kPi * (m * m / (a * a) + n * n / (b * b)));
    }
  }
  std::sort(all.begin(), all.end());
  all.resize(count);
  out.values = std::move(all);
  return out;
}

double annulus_radial_eigenvalue(double r_inner, double r_outer) {
  return -(1.0 / r_outer + 1.0 / r_inner) / std::log(r_inner / r_outer);
}

std::array<double, 2> annulus_mode_pair(int n, double r_inner, double r_outer) {
  // (1-q^2) s^2 - (1+q^2) n (1/R + 1/r) s + (1-q^2) n^2/(R r) = 0, q = (r/R)^n
  const double q2 = std::pow(r_inner / r_outer, 2.0 * n);
  const double a = 1.0 - q2;
  const double b = (1.0 + q2) * n * (1.0 / r_outer + 1.0 / r_inner);
  const double c = a * n * n / (r_outer * r_inner);
  const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
  const double big = (b + disc) / (2.0 * a);
  const double small = c / (a * big);
  return {small, big};
}

AnalyticSpectrum concentric_annulus_steklov(double r_inner, double r_outer, int count) {
  if (!(r_inner > 0.0 && r_inner < r_outer)) throw InputError("need 0 < r_inner < r_outer");
  if (count < 1) throw InputError("count must be >= 1");
  AnalyticSpectrum s;
  s.problem = "annulus-steklov";
  s.parameters = "r=" + format(r_inner) + ",R=" + format(r_outer);
  s.generator = "radial: 0 and -(1/R+1/r)/log(r/R); mode n: roots of a quadratic, doubled";
  std::vector<double> all = {0.0, annulus_radial_eigenvalue(r_inner, r_outer)};
  // the smaller root of mode n exceeds n/R, so modes up to count suffice
  for (int n = 1; n <= count; ++n) {
    const auto pair = annulus_mode_pair(n, r_inner, r_outer);
    for (double v : pair) {
      all.push_back(v);
      all.push_back(v);
    }
  }
  std::sort(all.begin(), all.end());
  all.resize(count);
  s.values = std::move(all);
  return s;
}

AnalyticSpectrum union_spectrum(const AnalyticSpectrum& a, const AnalyticSpectrum& b, int count) {
  AnalyticSpectrum s;
  s.problem = "union(" + a.problem + "," + b.problem + ")";
  s.parameters = a.parameters + ";" + b.parameters;
  s.generator = "merge";
  std::merge(a.values.begin(), a.values.end(), b.values.begin(), b.values.end(),
             std::back_inserter(s.values));
  // snap exact ties so that multiplicities add
  for (std::size_t i = 1; i < s.values.size(); ++i)
    if (same_value(s.values[i - 1], s.values[i])) s.values[i] = s.values[i - 1];
  if (static_cast<int>(s.values.size()) > count) s.values.resize(count);
  return s;
}

}  // namespace spectra
