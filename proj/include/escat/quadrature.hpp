#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace escat {

using Complex = std::complex<double>;

// Nodes/weights of n-point Gauss-Legendre on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule &gauss_rule(int n);

// Fixed-order Gauss on [a, b].
Complex integrate_gauss(const std::function<Complex(double)> &f, double a, double b,
                        int order = 16);

// Composite Gauss with panel doubling until the relative change is below tol.
Complex integrate_adaptive(const std::function<Complex(double)> &f, double a, double b,
                           double tol, int order = 16, int max_doublings = 14);

// Geometrically graded panels accumulating toward `a` (boundary-layer scale
// `layer`), fixed-order Gauss per panel. Panels: [a, a+layer], doubling width
// up to b; `max_width` caps the doubling (oscillatory integrands).
Complex integrate_graded(const std::function<Complex(double)> &f, double a, double b,
                         double layer, int order = 16, double max_width = 1e300);

// 2D polar tensor quadrature over the sector r in [r0, r1], theta in [t0, t1]
// of f(r, theta) * r dr dtheta, radially graded toward r0 with scale `layer`,
// doubling theta panels until the relative change is below tol.
Complex integrate_sector_polar(const std::function<Complex(double, double)> &f,
                               double r0, double r1, double t0, double t1,
                               double layer, double tol, double max_width = 1e300);

} // namespace escat
