#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "escat/geometry.hpp"
#include "escat/materials.hpp"
#include "escat/quadrature.hpp"

namespace escat {

using ComplexVec2 = std::array<Complex, 2>;
using ComplexMat2 = std::array<std::array<Complex, 2>, 2>; // m[j][k] = d u_j / d x_k

inline ComplexVec2 operator+(const ComplexVec2 &a, const ComplexVec2 &b) {
  return {a[0] + b[0], a[1] + b[1]};
}
inline ComplexVec2 operator-(const ComplexVec2 &a, const ComplexVec2 &b) {
  return {a[0] - b[0], a[1] - b[1]};
}
inline ComplexVec2 operator*(Complex s, const ComplexVec2 &a) {
  return {s * a[0], s * a[1]};
}
// Bilinear pairing without conjugation, a . b = a1 b1 + a2 b2.
inline Complex cdot(const ComplexVec2 &a, const ComplexVec2 &b) {
  return a[0] * b[0] + a[1] * b[1];
}
inline double cnorm(const ComplexVec2 &a) {
  return std::sqrt(std::norm(a[0]) + std::norm(a[1]));
}

// Pointwise field data: value, gradient, divergence (= trace of gradient).
struct FieldSample {
  ComplexVec2 value{Complex(0), Complex(0)};
  ComplexMat2 gradient{{{Complex(0), Complex(0)}, {Complex(0), Complex(0)}}};
  Complex divergence{0};
};

using FieldFunction = std::function<FieldSample(Point2)>;

// Traction T_nu u = lambda (div u) nu + 2 mu sym(grad u) nu.
ComplexVec2 traction(const FieldSample &f, Point2 nu, const LameParameters &lame);

// ---------------------------------------------------------------------------
// Plane waves

struct PlaneWave {
  enum Kind { Compressional, Shear } kind = Compressional;
  Point2 direction{1.0, 0.0}; // unit
  Wavenumbers k;
  LameParameters lame;
};

FieldSample plane_wave_eval(const PlaneWave &w, Point2 x);

// ---------------------------------------------------------------------------
// CGO probe: u0 = (1, i)^T exp(rho . x), rho = s (d + i d_perp)

struct CGOProbe {
  double s = 1.0;
  double theta_d = M_PI;
  SectorGeometry sector; // apex assumed at the origin

  Point2 d() const { return {std::cos(theta_d), std::sin(theta_d)}; }
  Point2 d_perp() const { return {-std::sin(theta_d), std::cos(theta_d)}; }
  ComplexVec2 rho() const {
    Complex e = s * std::exp(Complex(0, -theta_d));
    return {e, Complex(0, 1) * e};
  }
  bool in_asymptotic_regime() const { return s * sector.h * sector.delta_W >= 5.0; }
};

// Probe with d along the reversed bisector of the sector (maximal delta_W).
CGOProbe make_probe(const SectorGeometry &sector, double s);

FieldSample cgo_eval(const CGOProbe &p, Point2 x);
// Scalar factor u1_hat(x) = exp(s r e^{i(theta - theta_d)}).
Complex cgo_u1(const CGOProbe &p, Point2 x);

// Closed form of the full-sector integral of u1_hat:
//   0.5 i e^{2 i theta_d} (e^{-2 i theta_M} - e^{-2 i theta_m}) / s^2.
Complex cgo_sector_integral_exact(const CGOProbe &p);

enum class SectorEdge { Plus, Minus }; // Plus: theta_M ray, Minus: theta_m ray

// Exact edge integral of u1_hat over Gamma_h^{+/-}: (e^{s h eps} - 1)/(s eps)
// with eps = e^{i (theta_edge - theta_d)}.
Complex cgo_boundary_integral_exact(const CGOProbe &p, SectorEdge edge);
// Leading term -e^{i(theta_d - theta_edge)} / s of the same integral.
Complex cgo_boundary_leading(const CGOProbe &p, SectorEdge edge);
// Remainder R(theta_edge) = leading - exact; |R| <= (2/delta_W) e^{-h delta_W s / 2}.
Complex cgo_boundary_remainder(const CGOProbe &p, SectorEdge edge);
double cgo_boundary_remainder_bound(const CGOProbe &p);

// Laplace moment: int_0^inf r^alpha e^{-gamma r} dr = Gamma(alpha+1)/gamma^{alpha+1}.
Complex laplace_moment(double alpha, Complex gamma);

// Upper bound for int_W |u_hat_j| |x|^alpha dx:
//   (theta_M - theta_m) Gamma(alpha+2) / delta_W^{alpha+2} * s^{-alpha-2}.
double cgo_moment_bound(const CGOProbe &p, double alpha);

// Upper bound for int_{W \ S_h} |u_hat_j| |x|^alpha dx (stated as s -> inf):
//   2 (theta_M - theta_m) / delta_W * s^{-1} e^{-delta_W s h / 2}.
double cgo_tail_bound(const CGOProbe &p);

struct CgoNormBounds {
  double h1_on_arc = 0.0;       // sqrt(2h(1+2s^2)) sqrt(opening) e^{-s h delta_W}
  double traction_on_arc = 0.0; // 2 mu s sqrt(3 opening) e^{-s h delta_W}
  bool asymptotic = false;      // s h delta_W >= 5
};

CgoNormBounds cgo_norm_bounds(const CGOProbe &p, const LameParameters &lame);

// ---------------------------------------------------------------------------
// Quadrature counterparts (independent of the closed forms above)

// int over W (truncated with a certified tail) of u1_hat, by polar quadrature.
Complex cgo_sector_integral_quad(const CGOProbe &p, double tol = 1e-10);
// int over S_h of u1_hat.
Complex cgo_sector_integral_quad_truncated(const CGOProbe &p, double r1, double tol = 1e-10);
// int over Gamma_h^{+/-} of u1_hat.
Complex cgo_boundary_integral_quad(const CGOProbe &p, SectorEdge edge, double tol = 1e-12);
// int over W of |u1_hat| |x|^alpha (truncated, certified).
double cgo_moment_quad(const CGOProbe &p, double alpha, double tol = 1e-10);
// int over W \ S_h of |u1_hat| |x|^alpha.
double cgo_tail_quad(const CGOProbe &p, double alpha, double tol = 1e-10);
// ||u0||_{H^1(Lambda_h)} and ||T_nu u0||_{L^2(Lambda_h)} by arc quadrature.
CgoNormBounds cgo_norms_quad(const CGOProbe &p, const LameParameters &lame,
                             double tol = 1e-11);

// ---------------------------------------------------------------------------
// Helmholtz decomposition on a sampled grid (4th-order stencils)

struct GridField {
  Point2 origin;
  double spacing = 0.0;
  int nx = 0, ny = 0;
  std::vector<ComplexVec2> values; // row-major, index = j * nx + i

  ComplexVec2 at(int i, int j) const { return values[j * nx + i]; }
  ComplexVec2 &at(int i, int j) { return values[j * nx + i]; }
};

struct HelmholtzSplit {
  GridField u_p;
  GridField u_s;
  int margin = 0; // stencil margin; outer ring of cells is not populated
};

HelmholtzSplit helmholtz_split(const GridField &u, const Wavenumbers &k);

GridField sample_on_grid(const FieldFunction &f, Point2 origin, double spacing, int nx,
                         int ny);

} // namespace escat
