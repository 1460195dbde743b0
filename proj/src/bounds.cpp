#include "spectra/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/error.hpp"
#include "spectra/fem.hpp"
#include "spectra/specfun.hpp"

namespace spectra {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// rate from one window of three values, NaN when differences are not monotone
double window_rate(double a, double b, double c, double q) {
  const double d1 = a - b, d2 = b - c;
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0) != (d2 > 0) || std::abs(d2) >= std::abs(d1)) return kNaN;
  return std::log(d1 / d2) / std::log(q);
}

std::string cell(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

double cr_kappa_squared() {
  const double j = bessel_j_zero(1.0, 1);
  return 0.125 + 1.0 / (j * j);
}

double cr_lower_bound(double lambda_cr, double h) {
  if (!(lambda_cr > 0.0)) throw InputError("CR eigenvalue must be positive");
  if (!(h > 0.0)) throw InputError("mesh size must be positive");
  return lambda_cr / (1.0 + cr_kappa_squared() * h * h * lambda_cr);
}

Extrapolation richardson_extrapolate(const std::vector<double>& values,
                                     const std::vector<double>& hs) {
  const std::size_t n = values.size();
  if (n < 3) throw InputError("extrapolation needs at least three levels");
  if (hs.size() != n) throw InputError("one mesh size per value is required");
  const double q = hs[0] / hs[1];
  if (!(q > 1.0)) throw InputError("mesh sizes must decrease");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(hs[i - 1] / hs[i] - q) > 1e-2 * q) throw InputError("mesh sizes must shrink by a constant factor");

  Extrapolation out;
  out.limit = values.back();
  out.rate = window_rate(values[n - 3], values[n - 2], values[n - 1], q);
  if (std::isnan(out.rate)) return out;
  out.limit = values[n - 1] - (values[n - 2] - values[n - 1]) / (std::pow(q, out.rate) - 1.0);
  if (n >= 4) {
    const double prev = window_rate(values[n - 4], values[n - 3], values[n - 2], q);
    out.asymptotic = !std::isnan(prev) && std::abs(prev - out.rate) <= 0.1 * std::abs(out.rate);
  }
  return out;
}

BracketReport bracket_report(const Domain& domain, BoundaryCondition bc, int index, int levels,
                             int first_level) {
  if (index < 1) throw InputError("eigenvalue index is 1-based");
  if (levels < 1) throw InputError("need at least one level");
  if (bc == BoundaryCondition::steklov) throw InputError("bracket reports cover Laplace eigenvalues only");
  BracketReport rep;
  rep.index = index;
  rep.bc = bc;
  rep.domain = domain.name;
  const Domain eff = effective_domain(domain, bc);
  rep.certified = eff.is_polygon() &&
                  std::all_of(eff.edge_markers.begin(), eff.edge_markers.end(),
                              [](Marker m) { return m == Marker::dirichlet; });

  const auto meshes = mesh_hierarchy(eff, first_level + levels - 1);
  std::vector<double> hs, cr, p1, p2;
  rep.lower = rep.certified ? -std::numeric_limits<double>::infinity() : kNaN;
  rep.upper = std::numeric_limits<double>::infinity();
  for (int l = first_level; l < first_level + levels; ++l) {
    EigenProblemSpec spec;
    spec.bc = bc;
    spec.count = index;
    spec.level = l;
    BracketRow row;
    row.level = l;
    row.h = meshes[l]->h;
    spec.space = SpaceKind::cr;
    const Spectrum scr = solve_fem_on_mesh(meshes[l], spec, domain.name).spectrum;
    spec.space = SpaceKind::p1;
    const Spectrum sp1 = solve_fem_on_mesh(meshes[l], spec, domain.name).spectrum;
    spec.space = SpaceKind::p2;
    const Spectrum sp2 = solve_fem_on_mesh(meshes[l], spec, domain.name).spectrum;
    if (scr.size() < index || sp1.size() < index || sp2.size() < index)
      throw InputError("mesh at level " + std::to_string(l) + " has too few dofs for this index");
    row.cr = scr.values[index - 1];
    row.cr_residual = scr.max_residual;
    row.p1 = sp1.values[index - 1];
    row.p2 = sp2.values[index - 1];
    row.cr_lower = rep.certified ? cr_lower_bound(row.cr, row.h) : kNaN;
    if (rep.certified) rep.lower = std::max(rep.lower, row.cr_lower);
    rep.upper = std::min({rep.upper, row.p1, row.p2});
    hs.push_back(row.h);
    cr.push_back(row.cr);
    p1.push_back(row.p1);
    p2.push_back(row.p2);
    rep.rows.push_back(row);
  }
  if (levels >= 3) {
    rep.cr = richardson_extrapolate(cr, hs);
    rep.p1 = richardson_extrapolate(p1, hs);
    rep.p2 = richardson_extrapolate(p2, hs);
  } else {
    rep.cr = {cr.back(), kNaN, false};
    rep.p1 = {p1.back(), kNaN, false};
    rep.p2 = {p2.back(), kNaN, false};
  }
  rep.cr_below_limit = cr.back() < rep.p2.limit;
  return rep;
}

std::string BracketReport::to_csv() const {
  std::ostringstream os;
  os << "level,h,cr,cr_lower,p1,p2\n";
  for (const auto& r : rows)
    os << r.level << ',' << cell(r.h) << ',' << cell(r.cr) << ',' << cell(r.cr_lower) << ','
       << cell(r.p1) << ',' << cell(r.p2) << '\n';
  const std::pair<const char*, const Extrapolation*> cols[] = {{"cr", &cr}, {"p1", &p1}, {"p2", &p2}};
  for (const auto& [name, e] : cols)
    os << "extrapolated," << name << ',' << cell(e->limit) << ',' << cell(e->rate) << '\n';
  return os.str();
}

}  // namespace spectra
