#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "escat/errors.hpp"

namespace escat {

// First-kind Hankel functions H_n^{(1)}(x) = J_n(x) + i Y_n(x) for real x > 0,
// backed by the C++17 cylindrical Bessel functions. Negative orders via
// H_{-n} = (-1)^n H_n.
inline std::complex<double> hankel1(int n, double x) {
  if (!(x > 0) || !std::isfinite(x)) throw BesselFailure("argument " + std::to_string(x));
  int m = std::abs(n);
  double j = std::cyl_bessel_j(static_cast<double>(m), x);
  double y = std::cyl_neumann(static_cast<double>(m), x);
  if (!std::isfinite(j) || !std::isfinite(y))
    throw BesselFailure("order " + std::to_string(m) + " argument " + std::to_string(x));
  std::complex<double> h(j, y);
  return (n < 0 && (m & 1)) ? -h : h;
}

// Derivative via H_n' = H_{n-1} - (n/x) H_n.
inline std::complex<double> hankel1_deriv(int n, double x) {
  return hankel1(n - 1, x) - (static_cast<double>(n) / x) * hankel1(n, x);
}

// Table of H_n^{(1)}(x), n = 0..nmax, one J/Y evaluation per order.
inline std::vector<std::complex<double>> hankel1_table(int nmax, double x) {
  std::vector<std::complex<double>> h(nmax + 1);
  for (int n = 0; n <= nmax; ++n) h[n] = hankel1(n, x);
  return h;
}

} // namespace escat
