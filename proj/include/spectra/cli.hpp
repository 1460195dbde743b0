#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spectra/error.hpp"
#include "spectra/geometry.hpp"
#include "spectra/pencil.hpp"
#include "spectra/reference.hpp"

namespace spectra::cli {

enum class Method { fem_p1, fem_p2, fem_cr, bie, mps };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct UsageError : InputError {
  using InputError::InputError;
};

enum ExitCode { kSuccess = 0, kUsage = 1, kNumerical = 2, kValidation = 3 };

struct RunConfig {
  std::string subcommand;
  std::string domain = "unit-square";
  std::string domain_b;  // compare only
  double scale = 1.0;
  Method method = Method::fem_p2;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  int count = 6;
  int levels = 4;        // finest FEM level
  int first_level = 1;
  std::vector<int> n_schedule = {128};
  bool n_per_curve = false;
  bool cr_midpoint = false;
  std::string out_dir;   // empty: $SPECTRA_OUT, then "."
  unsigned seed = 12345;
  int threads = 1;
  double cluster_radius = 1e-6;  // relative multiplicity radius

  double bracket_lo = 0.0, bracket_hi = 0.0;
  int basis_size = 12;
  bool all_corners = false;
  std::string smin_grid;  // lo:hi:count

  std::vector<int> modes;  // 1-based modes drawn to modes.svg

  std::string eps_grid = "0:0.88:45";
  std::vector<int> k_list = {1, 2, 3};

  int index = 1;
};

std::string compatibility_matrix();
// Throws UsageError listing the matrix when method, bc and domain do not fit.
void check_compatibility(const RunConfig& cfg, const Domain& domain);

// lo:hi:count -> count equispaced values including both ends
std::vector<double> parse_range(const std::string& spec);
std::string output_dir(const RunConfig& cfg);
Domain config_domain(const std::string& name, double scale);

struct SpectrumRow {
  int index = 0;
  double value = 0.0;
  int multiplicity = 1;
  std::string method;
  std::string param;
  std::string domain;
};

std::string spectrum_csv(const std::vector<SpectrumRow>& rows);
// Rows carry the toolkit version in the method column.
std::vector<SpectrumRow> spectrum_rows(const Spectrum& s, int first_index);

// Best estimate of the leading spectrum with an error width per entry:
// Richardson over FEM levels, or the last two BIE node counts.
struct Estimate {
  std::vector<double> values;
  std::vector<double> widths;
  std::vector<int> multiplicity;
  std::vector<SpectrumRow> rows;  // every level plus extrapolated rows
};
Estimate estimate_spectrum(const Domain& domain, const RunConfig& cfg);

struct CompareEntry {
  int index = 0;
  double a = 0.0, b = 0.0;
  double width = 0.0;
  bool consistent = true;
};
struct CompareResult {
  std::vector<CompareEntry> entries;
  bool distinct = false;
  std::string csv() const;
};
CompareResult compare_spectra(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& cfg, std::ostream& out);
int cmd_bounds(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectra::cli
