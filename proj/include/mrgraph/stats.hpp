#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mrgraph {

/// Upper tail of the standard normal: P(Z > x).
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace detail {

// Lower regularized incomplete gamma P(a,x) by power series; valid for x < a+1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by modified Lentz continued
// fraction; valid for x >= a+1.
inline double gamma_q_contfrac(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

/// Upper tail of the chi-square distribution with df degrees of freedom.
inline double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

/// zeta(a) for integer a >= 2. Exact at a = 2; direct sum with an
/// Euler-Maclaurin tail correction otherwise.
inline double riemann_zeta_int(int a) {
  if (a < 2) throw std::invalid_argument("riemann_zeta_int: argument must be >= 2");
  if (a == 2) return std::numbers::pi * std::numbers::pi / 6.0;
  constexpr int cutoff = 20000;
  double s = 0.0;
  for (int i = cutoff; i >= 1; --i) s += std::pow(static_cast<double>(i), -a);
  const double k = cutoff;
  const double da = a;
  s += std::pow(k, 1.0 - da) / (da - 1.0)       // integral tail
       - 0.5 * std::pow(k, -da)                 // trapezoid correction
       + da / 12.0 * std::pow(k, -da - 1.0)     // first Bernoulli term
       - da * (da + 1.0) * (da + 2.0) / 720.0 * std::pow(k, -da - 3.0);
  return s;
}

}  // namespace mrgraph
