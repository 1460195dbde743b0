#pragma once

#include <array>
#include <string>
#include <vector>

#include "spectra/geometry.hpp"

namespace spectra {

enum class BoundaryCondition { dirichlet, neumann, mixed, steklov };

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_bc(std::string_view s);

// Closed-form spectrum: ascending values repeated by multiplicity.
struct AnalyticSpectrum {
  std::string problem;
  std::string parameters;
  std::string generator;
  std::vector<double> values;

  struct Level {
    double value;
    int multiplicity;
  };
  // Distinct values with multiplicities (ties within 1e-12 relative).
  std::vector<Level> levels() const;
};

AnalyticSpectrum disk_spectra(BoundaryCondition kind, double radius, int count);

// Boundary marker per side of the rectangle [0,a] x [0,b].
struct RectangleSides {
  Marker left = Marker::dirichlet;
  Marker right = Marker::dirichlet;
  Marker bottom = Marker::dirichlet;
  Marker top = Marker::dirichlet;
};

// kind = dirichlet / neumann ignore `sides`; kind = mixed uses them.
AnalyticSpectrum rectangle_spectra(BoundaryCondition kind, double a, double b,
                                   const RectangleSides& sides, int count);

// Steklov spectrum of {r_inner < |x| < r_outer}; sigma_0 = 0 is included.
AnalyticSpectrum concentric_annulus_steklov(double r_inner, double r_outer, int count);
// The two nonzero Steklov eigenvalues of angular mode n >= 1 (ascending).
std::array<double, 2> annulus_mode_pair(int n, double r_inner, double r_outer);
double annulus_radial_eigenvalue(double r_inner, double r_outer);

AnalyticSpectrum union_spectrum(const AnalyticSpectrum& a, const AnalyticSpectrum& b, int count);

}  // namespace spectra
