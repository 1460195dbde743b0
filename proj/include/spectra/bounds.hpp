#pragma once

#include <string>
#include <vector>

#include "spectra/geometry.hpp"
#include "spectra/reference.hpp"

namespace spectra {

// kappa^2 = 1/8 + 1/j_{1,1}^2
double cr_kappa_squared();
// Lower bound lambda_cr / (1 + kappa^2 h^2 lambda_cr) for pure Dirichlet problems.
double cr_lower_bound(double lambda_cr, double h);

struct Extrapolation {
  double limit = 0.0;
  double rate = 0.0;         // NaN when undefined
  bool asymptotic = false;   // successive rate estimates agree within 10%
};

// Fits v(h) = v* + C h^r on the last three levels. hs must shrink by a
// constant factor.
Extrapolation richardson_extrapolate(const std::vector<double>& values,
                                     const std::vector<double>& hs);

struct BracketRow {
  int level = 0;
  double h = 0.0;
  double cr = 0.0;
  double cr_lower = 0.0;     // NaN outside the certified scope
  double cr_residual = 0.0;  // pencil residual behind the lower bound
  double p1 = 0.0;
  double p2 = 0.0;
};

struct BracketReport {
  int index = 1;  // 1-based position in the computed spectrum
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::string domain;
  std::vector<BracketRow> rows;
  Extrapolation cr, p1, p2;
  bool certified = false;  // cr_lower column in scope (pure Dirichlet)
  double lower = 0.0;      // max certified lower bound (NaN if not certified)
  double upper = 0.0;      // min conforming value
  bool cr_below_limit = false;  // observational: finest CR below the P2 limit

  std::string to_csv() const;
};

BracketReport bracket_report(const Domain& domain, BoundaryCondition bc, int index, int levels,
                             int first_level = 1);

}  // namespace spectra
