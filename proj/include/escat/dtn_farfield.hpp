#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "escat/elastic_core.hpp"
#include "escat/materials.hpp"

namespace escat {

// Radiating exterior solution u = grad(phi) + curl(psi) with Hankel series
// potentials phi = sum a_n H_n^{(1)}(k_p r) e^{i n theta},
//            psi = sum b_n H_n^{(1)}(k_s r) e^{i n theta}.
// Coefficients are stored for n = -N..N at index n + N.
struct RadiatingSolution {
  int N = 0;
  std::vector<Complex> a; // compressional potential, size 2N+1
  std::vector<Complex> b; // shear potential, size 2N+1
  Wavenumbers k;
  LameParameters lame;

  Complex &a_at(int n) { return a[n + N]; }
  Complex &b_at(int n) { return b[n + N]; }
  Complex a_at(int n) const { return a[n + N]; }
  Complex b_at(int n) const { return b[n + N]; }
};

// Per-mode 2x2 maps on |x| = R in the (radial, tangential) frame.
struct DtnMode {
  // (u_r, u_t) = D (a_n, b_n);  (t_r, t_t) = T (a_n, b_n);  G = T D^{-1}.
  Complex D[2][2];
  Complex T[2][2];
  Complex G[2][2];
  double condition = 0.0; // of the scaled Dirichlet matrix
};

struct DtnOperator {
  double R = 0.0;
  int N = 0;
  LameParameters lame;
  Wavenumbers k;
  std::vector<DtnMode> modes; // n = -N..N at index n + N

  const DtnMode &mode(int n) const { return modes[n + N]; }
};

int default_dtn_truncation(double ks_R);

DtnOperator build_dtn(const LameParameters &lame, double omega, double R, int N);

// Apply the DtN map to Fourier trace coefficients (radial, tangential) per mode.
std::vector<std::array<Complex, 2>>
dtn_apply_modes(const DtnOperator &dtn, const std::vector<std::array<Complex, 2>> &trace);

// Field and gradient of the radiating solution at |x| >= R (analytic).
FieldSample radiating_eval(const RadiatingSolution &sol, Point2 x);

// Compressional / shear parts u_p = grad phi, u_s = curl psi and their
// radial derivatives at x (for Kupradze checks).
struct BetaParts {
  ComplexVec2 u_p, u_s;
  ComplexVec2 du_p_dr, du_s_dr;
};
BetaParts radiating_beta_parts(const RadiatingSolution &sol, Point2 x);

// Fourier coefficients (radial, tangential frame) of the trace on |x| = R.
std::vector<std::array<Complex, 2>> radiating_trace_modes(const RadiatingSolution &sol,
                                                          double R);
// Analytic traction mode coefficients on |x| = R.
std::vector<std::array<Complex, 2>> radiating_traction_modes(const RadiatingSolution &sol,
                                                             double R);

// Far-field pattern with the 2D normalization u^sc ~ e^{i k_p r}/sqrt(r) up x_hat
// + e^{i k_s r}/sqrt(r) Us t_hat.
struct FarFieldPattern {
  int M = 360;                 // uniform angles theta_j = 2 pi j / M
  std::string convention = "2d-sqrt-r";
  double omega = 0.0, lambda = 0.0, mu = 0.0, R = 0.0;
  std::vector<Complex> up;  // u_p^inf
  std::vector<Complex> us;  // tangential scalar of U_s^inf

  double l2_norm() const;
};

FarFieldPattern far_field_from_solution(const RadiatingSolution &sol, int M = 360);

// Project a vector pattern onto (x_hat, x_hat_perp) per angle.
void farfield_project(const std::vector<ComplexVec2> &u_t,
                      const std::vector<double> &angles, std::vector<Complex> &up,
                      std::vector<Complex> &us);

double farfield_distance(const FarFieldPattern &A, const FarFieldPattern &B);

// Quadrature of Im int_{|x|=R} T_nu(conj(u)) . u dsigma for a radiating solution.
double rellich_boundary_imag(const RadiatingSolution &sol, double R, int n_quad = 720);

void write_farfield(std::ostream &os, const FarFieldPattern &p);
FarFieldPattern read_farfield(std::istream &is);

} // namespace escat
