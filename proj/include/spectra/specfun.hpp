#pragma once

namespace spectra {

// Accuracy domain of the Bessel routines. Arguments outside it are rejected.
inline constexpr double kBesselMaxOrder = 200.0;
inline constexpr double kBesselMaxArgument = 1.0e4;
inline constexpr int kBesselMaxZeroIndex = 100;

struct BesselEval {
  double order = 0.0;
  double x = 0.0;
  double value = 0.0;
  double derivative = 0.0;
};

// J_nu(x) for real nu >= 0 and x >= 0.
double bessel_j(double nu, double x);
// d/dx J_nu(x). Infinite at x = 0 for 0 < nu < 1.
double bessel_j_derivative(double nu, double x);
BesselEval bessel_j_eval(double nu, double x);

// k-th positive zero of J_nu (k >= 1).
double bessel_j_zero(double nu, int k);
// k-th positive zero of J'_nu (k >= 1); x = 0 is never counted.
double bessel_j_derivative_zero(double nu, int k);

namespace detail {
// Individual evaluation routes, exposed so that tests can cross-check them.
double bessel_j_series(double nu, double x);
double bessel_j_asymptotic(double nu, double x);
// Miller backward recurrence; returns J_nu and J_{nu+1}.
void bessel_j_miller(double nu, double x, double& j_nu, double& j_nu1);
bool use_series(double nu, double x);
bool use_asymptotic(double nu, double x);
}  // namespace detail

}  // namespace spectra
