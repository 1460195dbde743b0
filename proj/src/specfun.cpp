#include "spectra/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

void check_domain(double nu, double x) {
  if (!(nu >= 0.0) || nu > kBesselMaxOrder)
    throw InputError("Bessel order " + std::to_string(nu) + " outside [0, 200]");
  if (!(x >= 0.0) || x > kBesselMaxArgument)
    throw InputError("Bessel argument " + std::to_string(x) + " outside [0, 1e4]");
}

template <typename F>
double bisect(F&& f, double lo, double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Counts sign changes of f on [x0, inf) in steps of 1/4 until the k-th,
// then bisects. Consecutive zeros of J_nu and J'_nu are more than 1/4 apart.
template <typename F>
double kth_sign_change(F&& f, double x0, int k) {
  constexpr double step = 0.25;
  double a = x0;
  double fa = f(a);
  int found = 0;
  while (a < kBesselMaxArgument - step) {
    const double b = a + step;
    const double fb = f(b);
    if (fb == 0.0 || (fa > 0.0) != (fb > 0.0)) {
      if (++found == k) return fb == 0.0 ? b : bisect(f, a, b, fa);
      if (fb == 0.0) {
        // step past an exact hit so it is not counted twice
        a = b + 1e-9;
        fa = f(a);
        continue;
      }
    }
    a = b;
    fa = fb;
  }
  throw NumericalError("Bessel zero bracketing failed for index " + std::to_string(k));
}

}  // namespace

namespace detail {

bool use_asymptotic(double nu, double x) { return x >= 25.0 && x >= nu * nu; }

// Outside this region the alternating series loses more than ~1 digit.
bool use_series(double nu, double x) { return x <= 2.0 || x * x <= 2.0 * (nu + 1.0); }

double bessel_j_series(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
  double sum = term;
  const double q = half * half;
  for (int m = 1; m < 500; ++m) {
    term *= -q / (m * (m + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && m > q) break;
  }
  return sum;
}

double bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;  // a_k / x^k with the alternating sign folded in below
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(a) > last) break;  // asymptotic series started diverging
    last = std::abs(a);
    // k = 1,2,3,4,... contribute to Q,P,Q,P with signs +,-,-,+ ...
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) q += sign * a;
    else p += sign * a;
    if (std::abs(a) < 1e-17) break;
  }
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

void bessel_j_miller(double nu, double x, double& j_nu, double& j_nu1) {
  const double mu = nu - std::floor(nu);
  const int n0 = static_cast<int>(std::floor(nu));
  const double reach = std::max(nu + 1.0, x);
  int top = n0 + 2 + static_cast<int>(std::ceil(reach - nu + 30.0 + 8.0 * std::cbrt(reach)));
  if (top % 2 != 0) ++top;

  // c_k = (mu + 2k) Gamma(mu + k) / k!, c_0 = Gamma(mu + 1); weights J_{mu+2k}
  auto coeff = [mu](int k) {
    if (k == 0) return std::tgamma(mu + 1.0);
    return (mu + 2.0 * k) * std::exp(std::lgamma(mu + k) - std::lgamma(k + 1.0));
  };

  double f_next = 0.0;   // f_{k+1}
  double f = 1e-300;     // f_k at k = top
  double sum = (top % 2 == 0) ? coeff(top / 2) * f : 0.0;
  double at_n0 = (top == n0) ? f : 0.0;
  double at_n1 = (top == n0 + 1) ? f : 0.0;
  for (int k = top; k >= 1; --k) {
    const double f_prev = 2.0 * (mu + k) / x * f - f_next;
    f_next = f;
    f = f_prev;
    const int idx = k - 1;
    if (idx % 2 == 0) sum += coeff(idx / 2) * f;
    if (idx == n0) at_n0 = f;
    if (idx == n0 + 1) at_n1 = f;
    if (std::abs(f) > 1e250) {
      constexpr double s = 1e-250;
      f *= s;
      f_next *= s;
      sum *= s;
      at_n0 *= s;
      at_n1 *= s;
    }
  }
  const double norm = std::pow(0.5 * x, mu) / sum;
  j_nu = at_n0 * norm;
  j_nu1 = at_n1 * norm;
}

}  // namespace detail

double bessel_j(double nu, double x) {
  check_domain(nu, x);
  if (detail::use_series(nu, x)) return detail::bessel_j_series(nu, x);
  if (detail::use_asymptotic(nu, x)) return detail::bessel_j_asymptotic(nu, x);
  double j = 0.0, j1 = 0.0;
  detail::bessel_j_miller(nu, x, j, j1);
  return j;
}

double bessel_j_derivative(double nu, double x) {
  check_domain(nu, x);
  if (x == 0.0) {
    if (nu == 0.0 || nu > 1.0) return 0.0;
    if (nu == 1.0) return 0.5;
    return std::numeric_limits<double>::infinity();
  }
  double j = 0.0, j1 = 0.0;
  if (detail::use_series(nu, x)) {
    j = detail::bessel_j_series(nu, x);
    j1 = detail::bessel_j_series(nu + 1.0, x);
  } else if (detail::use_asymptotic(nu, x)) {
    j = detail::bessel_j_asymptotic(nu, x);
    j1 = detail::use_asymptotic(nu + 1.0, x) ? detail::bessel_j_asymptotic(nu + 1.0, x)
                                             : bessel_j(nu + 1.0, x);
  } else {
    detail::bessel_j_miller(nu, x, j, j1);
  }
  return nu / x * j - j1;
}

BesselEval bessel_j_eval(double nu, double x) {
  return {nu, x, bessel_j(nu, x), bessel_j_derivative(nu, x)};
}

double bessel_j_zero(double nu, int k) {
  if (k < 1 || k > kBesselMaxZeroIndex) throw InputError("zero index must lie in [1, 100]");
  check_domain(nu, 0.0);
  return kth_sign_change([nu](double x) { return bessel_j(nu, x); }, std::max(nu, 0.5), k);
}

double bessel_j_derivative_zero(double nu, int k) {
  if (k < 1 || k > kBesselMaxZeroIndex) throw InputError("zero index must lie in [1, 100]");
  check_domain(nu, 0.0);
  return kth_sign_change([nu](double x) { return bessel_j_derivative(nu, x); },
                         std::max(nu, 0.01), k);
}

}  // namespace spectra
