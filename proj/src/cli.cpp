#include "spectra/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "spectra/bie.hpp"
#include "spectra/bounds.hpp"
#include "spectra/fem.hpp"
#include "spectra/mps.hpp"
#include "spectra/svg.hpp"
#include "spectra/validate.hpp"

namespace spectra::cli {

namespace {

constexpr const char* kVersion = SPECTRA_VERSION;

std::string num(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

bool is_fem(Method m) { return m == Method::fem_p1 || m == Method::fem_p2 || m == Method::fem_cr; }

SpaceKind space_of(Method m) {
  switch (m) {
    case Method::fem_p1: return SpaceKind::p1;
    case Method::fem_p2: return SpaceKind::p2;
    default: return SpaceKind::cr;
  }
}

// Laplace spectra are numbered from 1, Steklov spectra from sigma_0 = 0.
int first_index(BoundaryCondition bc) { return bc == BoundaryCondition::steklov ? 0 : 1; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
  const std::filesystem::path dir = output_dir(cfg);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string versioned(const std::string& method) { return method + "@" + kVersion; }

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::fem_p1: return "fem-p1";
    case Method::fem_p2: return "fem-p2";
    case Method::fem_cr: return "fem-cr";
    case Method::bie: return "bie";
    case Method::mps: return "mps";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::fem_p1, Method::fem_p2, Method::fem_cr, Method::bie, Method::mps})
    if (s == to_string(m)) return m;
  throw UsageError("unknown method '" + std::string(s) + "'");
}

std::string compatibility_matrix() {
  return "method   dirichlet  neumann  mixed  steklov   domain\n"
         "fem-p1   yes        yes      yes    yes       polygon\n"
         "fem-p2   yes        yes      yes    yes       polygon\n"
         "fem-cr   yes        yes      yes    --cr-midpoint  polygon\n"
         "bie      no         no       no     yes       circles\n"
         "mps      yes        no       no     no        polygon (needs --bracket)\n";
}

void check_compatibility(const RunConfig& cfg, const Domain& domain) {
  std::string why;
  if (is_fem(cfg.method) && !domain.is_polygon()) why = "FEM needs a polygon domain";
  if (cfg.method == Method::fem_cr && cfg.bc == BoundaryCondition::steklov && !cfg.cr_midpoint)
    why = "fem-cr with steklov needs --cr-midpoint";
  if (cfg.method == Method::bie && (cfg.bc != BoundaryCondition::steklov || domain.is_polygon()))
    why = "bie solves steklov problems on circle domains";
  if (cfg.method == Method::mps && (cfg.bc != BoundaryCondition::dirichlet || !domain.is_polygon()))
    why = "mps solves dirichlet problems on polygons";
  if (!why.empty()) throw UsageError(why + "\n" + compatibility_matrix());
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("range must be lo:hi:count, got '" + spec + "'");
  double lo, hi;
  int n;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw UsageError("range must be lo:hi:count, got '" + spec + "'");
  }
  if (n < 1 || (n > 1 && !(hi > lo))) throw UsageError("range needs count >= 1 and hi > lo");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

std::string output_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("SPECTRA_OUT"); env && *env) return env;
  return ".";
}

Domain config_domain(const std::string& name, double scale) {
  Domain d = load_domain(name);
  if (scale != 1.0) {
    d = scaled(d, scale);
    std::ostringstream os;
    os << name << "*" << scale;
    d.name = os.str();
  }
  return d;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream os;
  os << "index,eigenvalue,multiplicity,method,param,domain\n";
  for (const auto& r : rows)
    os << (r.index >= 0 ? std::to_string(r.index) : "") << ',' << num(r.value) << ','
       << r.multiplicity << ',' << r.method << ',' << r.param << ',' << r.domain << '\n';
  return os.str();
}

std::vector<SpectrumRow> spectrum_rows(const Spectrum& s, int first) {
  std::vector<SpectrumRow> rows;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    rows.push_back({first + static_cast<int>(i), s.values[i], s.multiplicity(i),
                    versioned(s.provenance.method), s.provenance.param, s.provenance.domain});
  return rows;
}

Estimate estimate_spectrum(const Domain& domain, const RunConfig& cfg) {
  Estimate est;
  const int first = first_index(cfg.bc);
  std::vector<Spectrum> runs;
  std::vector<double> hs;
  if (is_fem(cfg.method)) {
    if (cfg.first_level < 0 || cfg.levels < cfg.first_level) throw UsageError("need 0 <= --first-level <= --levels");
    const Domain eff = effective_domain(domain, cfg.bc);
    const auto meshes = mesh_hierarchy(eff, cfg.levels);
    for (int l = cfg.first_level; l <= cfg.levels; ++l) {
      EigenProblemSpec spec;
      spec.bc = cfg.bc;
      spec.weight = domain.weight;
      spec.count = cfg.count;
      spec.space = space_of(cfg.method);
      spec.level = l;
      spec.cr_midpoint = cfg.cr_midpoint;
      spec.seed = cfg.seed;
      Spectrum s = solve_fem_on_mesh(meshes[l], spec, domain.name).spectrum;
      assign_clusters(s, cfg.cluster_radius);
      runs.push_back(std::move(s));
      hs.push_back(meshes[l]->h);
    }
  } else if (cfg.method == Method::bie) {
    if (cfg.n_schedule.empty()) throw UsageError("bie needs --n");
    for (int n : cfg.n_schedule) {
      const auto nodes = domain.circles.size() == 1 || cfg.n_per_curve
                             ? std::vector<int>(domain.circles.size(), n)
                             : split_by_circumference(domain, n);
      BieOptions opt;
      opt.count = cfg.count;
      Spectrum s = solve_steklov_bie(domain, nodes, opt);
      if (s.size() < cfg.count) throw UsageError("more eigenvalues requested than boundary nodes");
      s.values.conservativeResize(cfg.count);
      s.imag.conservativeResize(cfg.count);
      s.cluster.resize(cfg.count);
      assign_clusters(s, cfg.cluster_radius);
      runs.push_back(std::move(s));
    }
  } else {
    throw UsageError("mps has no spectrum estimate; use solve --bracket");
  }
  for (const auto& s : runs) {
    auto rows = spectrum_rows(s, first);
    est.rows.insert(est.rows.end(), rows.begin(), rows.end());
  }

  const Spectrum& last = runs.back();
  for (int i = 0; i < cfg.count; ++i) {
    std::vector<double> col;
    for (const auto& s : runs) col.push_back(s.values[i]);
    double value = col.back(), width = 0.0;
    if (is_fem(cfg.method) && col.size() >= 3) {
      const Extrapolation e = richardson_extrapolate(col, hs);
      value = e.limit;
      width = std::abs(col.back() - e.limit);
      std::ostringstream param;
      param << "extrapolated;rate=" << num(e.rate) << ";levels=" << cfg.first_level << "-" << cfg.levels;
      est.rows.push_back({first + i, value, last.multiplicity(i), versioned(last.provenance.method),
                          param.str(), domain.name});
    } else if (col.size() >= 2) {
      width = std::abs(col.back() - col[col.size() - 2]);
    }
    est.values.push_back(value);
    est.widths.push_back(width);
    est.multiplicity.push_back(last.multiplicity(i));
  }
  return est;
}

std::string CompareResult::csv() const {
  std::ostringstream os;
  os << "index,value_a,value_b,width,verdict\n";
  for (const auto& e : entries)
    os << e.index << ',' << num(e.a) << ',' << num(e.b) << ',' << num(e.width) << ','
       << (e.consistent ? "consistent-with-equal" : "distinct") << '\n';
  os << "overall,,,," << (distinct ? "distinct" : "consistent-with-equal") << '\n';
  return os.str();
}

CompareResult compare_spectra(const RunConfig& cfg) {
  if (cfg.domain_b.empty()) throw UsageError("compare needs two domains");
  const Domain a = config_domain(cfg.domain, cfg.scale);
  const Domain b = config_domain(cfg.domain_b, cfg.scale);
  check_compatibility(cfg, a);
  check_compatibility(cfg, b);
  const Estimate ea = estimate_spectrum(a, cfg);
  const Estimate eb = estimate_spectrum(b, cfg);
  CompareResult r;
  for (int i = 0; i < cfg.count; ++i) {
    CompareEntry e;
    e.index = first_index(cfg.bc) + i;
    e.a = ea.values[i];
    e.b = eb.values[i];
    e.width = ea.widths[i] + eb.widths[i] + 1e-10 * std::max({1.0, std::abs(e.a), std::abs(e.b)});
    e.consistent = std::abs(e.a - e.b) <= e.width;
    r.distinct = r.distinct || !e.consistent;
    r.entries.push_back(e);
  }
  return r;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Domain domain = config_domain(cfg.domain, cfg.scale);
  check_compatibility(cfg, domain);
  const auto dir = prepare_out(cfg);

  if (cfg.method == Method::mps) {
    if (!(cfg.bracket_hi > cfg.bracket_lo)) throw UsageError("mps needs --bracket lo:hi");
    const auto basis = default_basis(domain, cfg.basis_size, cfg.all_corners);
    MpsOptions opt;
    opt.halton_skip = 1 + static_cast<int>(cfg.seed % 1000);
    if (!cfg.smin_grid.empty()) {
      std::ostringstream csv;
      csv << "lambda,smin\n";
      for (const auto& p : sigma_min_sweep(domain, basis, parse_range(cfg.smin_grid), opt))
        csv << num(p.lambda) << ',' << num(p.smin) << '\n';
      write_file(dir / "smin.csv", csv.str());
    }
    const MpsCandidate c = refine_minimum(domain, basis, cfg.bracket_lo, cfg.bracket_hi, opt);
    const Enclosure e = fhm_enclosure(domain, c.lambda, c.coefficients, basis);
    std::ostringstream param;
    param << "K=" << cfg.basis_size << ";corners=" << basis.size() << ";bracket=" << cfg.bracket_lo
          << ":" << cfg.bracket_hi << ";smin=" << num(c.smin);
    write_file(dir / "spectrum.csv",
               spectrum_csv({{-1, c.lambda, 1, versioned("mps"), param.str(), domain.name}}));
    std::ostringstream enc;
    enc << "lambda_h,lower,upper,epsilon,caveat\n"
        << num(e.center) << ',' << num(e.lower) << ',' << num(e.upper) << ',' << num(e.epsilon) << ','
        << (e.caveat ? "sampled-sup;quadrature-norm" : "") << '\n';
    write_file(dir / "enclosure.csv", enc.str());
    out << "lambda_h = " << num(c.lambda) << "  FHM [" << num(e.lower) << ", " << num(e.upper)
        << "]  eps = " << num(e.epsilon) << '\n';
    return kSuccess;
  }

  const Estimate est = estimate_spectrum(domain, cfg);
  write_file(dir / "spectrum.csv", spectrum_csv(est.rows));
  for (int i = 0; i < cfg.count; ++i)
    out << first_index(cfg.bc) + i << "  " << num(est.values[i]) << "  (x" << est.multiplicity[i]
        << ", width " << num(est.widths[i]) << ")\n";

  if (!cfg.modes.empty()) {
    if (!is_fem(cfg.method)) throw UsageError("--modes needs a FEM method");
    const Domain eff = effective_domain(domain, cfg.bc);
    auto mesh = std::make_shared<const Mesh>(triangulate(eff, cfg.levels));
    EigenProblemSpec spec;
    spec.bc = cfg.bc;
    spec.weight = domain.weight;
    spec.space = space_of(cfg.method);
    spec.level = cfg.levels;
    spec.cr_midpoint = cfg.cr_midpoint;
    spec.seed = cfg.seed;
    spec.count = 0;
    for (int m : cfg.modes) {
      if (m < 1) throw UsageError("--modes are 1-based");
      spec.count = std::max(spec.count, m);
    }
    const FemSolution sol = solve_fem_on_mesh(mesh, spec, domain.name);
    std::vector<int> cols;
    std::vector<std::string> titles;
    for (int m : cfg.modes) {
      cols.push_back(m - 1);
      titles.push_back("mode " + std::to_string(m) + ": " + num(sol.spectrum.values[m - 1]));
    }
    write_file(dir / "modes.svg", nodal_svg(*sol.mesh, sol.vertex_values, cols, titles));
  }
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_schedule.size() != 1) throw UsageError("sweep takes a single --n");
  SweepOptions opt;
  opt.n_total = cfg.n_schedule.front();
  opt.n_per_curve = cfg.n_per_curve;
  opt.threads = cfg.threads;
  const auto rows = sweep_annulus(parse_range(cfg.eps_grid), cfg.k_list, opt);
  std::ostringstream csv;
  csv << "eps,k,sigma,ratio_to_concentric,N\n";
  for (const auto& r : rows)
    csv << num(r.eps) << ',' << r.k << ',' << num(r.sigma) << ',' << num(r.ratio_to_concentric) << ','
        << r.n << '\n';
  write_file(prepare_out(cfg) / "sweep.csv", csv.str());
  for (int k : cfg.k_list) {
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (const auto& r : rows) {
      if (r.k != k) continue;
      decreasing = decreasing && r.sigma < prev;
      prev = r.sigma;
    }
    out << "sigma_" << k << ": " << (decreasing ? "strictly decreasing" : "not monotone decreasing")
        << " in eps\n";
  }
  return kSuccess;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const CompareResult r = compare_spectra(cfg);
  write_file(prepare_out(cfg) / "compare.csv", r.csv());
  for (const auto& e : r.entries)
    out << e.index << "  " << num(e.a) << "  " << num(e.b) << "  width " << num(e.width) << "  "
        << (e.consistent ? "consistent-with-equal" : "distinct") << '\n';
  out << "verdict: " << (r.distinct ? "distinct" : "consistent-with-equal") << '\n';
  return kSuccess;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const Domain domain = config_domain(cfg.domain, cfg.scale);
  const BracketReport r =
      bracket_report(domain, cfg.bc, cfg.index, cfg.levels - cfg.first_level + 1, cfg.first_level);
  write_file(prepare_out(cfg) / "bounds.csv", r.to_csv());
  out << r.to_csv();
  if (r.certified)
    out << "enclosure [" << num(r.lower) << ", " << num(r.upper) << "]  (CR residual "
        << num(r.rows.back().cr_residual) << ")\n";
  else
    out << "upper bound " << num(r.upper) << "  (no certified lower bound outside pure Dirichlet)\n";
  out << "observed: finest CR " << (r.cr_below_limit ? "below" : "not below") << " the P2 limit\n";
  return kSuccess;
}

int cmd_validate(const RunConfig&, std::ostream& out) {
  int failed = 0;
  for (const auto& c : run_validation()) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured " << num(c.measured) << "  tol "
        << num(c.tolerance) << '\n';
    failed += !c.pass;
  }
  if (failed) {
    out << failed << " check(s) failed\n";
    return kValidation;
  }
  out << "all checks passed\n";
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar Laplace and Steklov eigenvalue toolkit"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "config file (flag=value lines; flags win)");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string method = "fem-p2", bc = "dirichlet", bracket;
  std::string n_list;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--domain", cfg.domain, "built-in name or domain file");
    sub->add_option("--scale", cfg.scale, "uniform scale applied to the domain");
    sub->add_option("--method", method, "fem-p1 | fem-p2 | fem-cr | bie | mps");
    sub->add_option("--bc", bc, "dirichlet | neumann | mixed | steklov");
    sub->add_option("--count", cfg.count, "number of eigenvalues");
    sub->add_option("--levels", cfg.levels, "finest refinement level");
    sub->add_option("--first-level", cfg.first_level, "coarsest refinement level");
    sub->add_option("--n", n_list, "BIE node counts, comma separated");
    sub->add_flag("--n-per-curve", cfg.n_per_curve, "node count applies to each curve");
    sub->add_flag("--cr-midpoint", cfg.cr_midpoint, "midpoint boundary mass for CR Steklov");
    sub->add_option("--out", cfg.out_dir, "output directory (default $SPECTRA_OUT or .)");
    sub->add_option("--seed", cfg.seed, "seed for iterative solvers and sampling");
    sub->add_option("--threads", cfg.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--cluster-radius", cfg.cluster_radius, "relative radius for multiplicity clustering")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* solve = app.add_subcommand("solve", "compute a spectrum");
  common(solve);
  solve->add_option("--bracket", bracket, "mps search interval lo:hi");
  solve->add_option("--basis-size", cfg.basis_size, "mps functions per corner");
  solve->add_flag("--all-corners", cfg.all_corners, "mps basis at every corner");
  solve->add_option("--smin-grid", cfg.smin_grid, "mps sweep grid lo:hi:count");
  solve->add_option("--modes", cfg.modes, "1-based modes drawn to modes.svg")->delimiter(',');

  CLI::App* sweep = app.add_subcommand("sweep", "eccentric annulus Steklov sweep");
  common(sweep);
  sweep->add_option("--eps", cfg.eps_grid, "eccentricity grid lo:hi:count");
  sweep->add_option("--k", cfg.k_list, "eigenvalue indices (sigma_0 = 0)")->delimiter(',');

  CLI::App* compare = app.add_subcommand("compare", "compare the spectra of two domains");
  common(compare);
  compare->add_option("--domain-b", cfg.domain_b, "second domain")->required();

  CLI::App* bounds = app.add_subcommand("bounds", "bracketing report for one eigenvalue");
  common(bounds);
  bounds->add_option("--index", cfg.index, "1-based eigenvalue index");

  CLI::App* validate = app.add_subcommand("validate", "run the analytic-oracle suite");
  common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    cfg.method = parse_method(method);
    try {
      cfg.bc = parse_bc(bc);
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
    if (!n_list.empty()) {
      cfg.n_schedule.clear();
      std::stringstream ss(n_list);
      for (std::string p; std::getline(ss, p, ',');) cfg.n_schedule.push_back(std::stoi(p));
    }
    if (!bracket.empty()) {
      const auto colon = bracket.find(':');
      if (colon == std::string::npos) throw UsageError("--bracket must be lo:hi");
      cfg.bracket_lo = std::stod(bracket.substr(0, colon));
      cfg.bracket_hi = std::stod(bracket.substr(colon + 1));
    }
    if (cfg.count < 1) throw UsageError("--count must be >= 1");
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "solve") return cmd_solve(cfg, out);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg, out);
    if (cfg.subcommand == "compare") return cmd_compare(cfg, out);
    if (cfg.subcommand == "bounds") return cmd_bounds(cfg, out);
    return cmd_validate(cfg, out);
  } catch (const NumericalError& e) {
    err << "numerical rejection: " << e.what() << '\n';
    return kNumerical;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "error: bad number (" << e.what() << ")\n";
    return kUsage;
  }
}

}  // namespace spectra::cli
