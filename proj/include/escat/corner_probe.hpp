#pragma once

#include <optional>
#include <vector>

#include "escat/elastic_core.hpp"

namespace escat {

// Fields of the two transmission problems near a corner, in the corner's
// local frame (apex at the origin, edges on arg = theta_m / theta_M).
//
// u1_minus/u2_minus return value and gradient on S_h. pde_defect, when
// present, returns L v + omega^2 q1 v - omega^2 (q2 - q1) u2 pointwise for
// v = u1 - u2; it closes the integral identity exactly for manufactured
// fields that do not solve the coupled system (solver-produced data leaves
// it empty, i.e. zero).
struct CornerData {
  SectorGeometry sector;
  FieldFunction u1_minus;
  FieldFunction u2_minus;
  FieldFunction pde_defect; // optional
  ComplexVec2 u2_at_apex{Complex(0), Complex(0)};
  double q1 = 1.0;
  // planted/known parameters, used by the forward term assembly when set
  std::optional<double> q2, eta1, eta2;
  double omega = 1.0;
  LameParameters lame;
  double holder_alpha = 1.0; // exponent for the regression correction term
  double trace_tol = 1e-6;   // v on Gamma_h^± must vanish within this (relative)
};

struct IdentityTerms {
  double s = 0.0;
  Complex lhs;      // omega^2 (q2-q1) u2(0).(1,i) int_W u1_hat (closed form)
  Complex I1;       // arc term on Lambda_h
  Complex I2;       // int_{S_h} (v - v(0)) . u0
  Complex I3_plus;  // (eta1-eta2) int_{Gamma_h^+} u2 . u0
  Complex I3_minus;
  Complex I4;       // u2(0).(1,i) int_{W \ S_h} u1_hat
  Complex I5;       // int_{S_h} (u2 - u2(0)) . u0
  Complex I6;       // int_{S_h} pde_defect . u0 (zero without a defect field)
  // quadrature building blocks reused by the recovery
  Complex J_S;      // int_{S_h} u2 . u0
  Complex J_Gamma;  // int_{Gamma_h^±} u2 . u0
  Complex K;        // I1 + omega^2 q1 I2 - I6

  Complex rhs_sum(double omega, double q1, double q2_minus_q1) const;
  double balance_residual(double omega, double q1, double q2_minus_q1) const;
  double max_term() const;
};

IdentityTerms identity_terms(const CornerData &data, const CGOProbe &probe,
                             double quad_tol = 1e-10);

struct RegressionFit {
  double value = 0.0;      // real part of the extrapolated intercept
  double imag_value = 0.0; // imaginary part (diagnostic, should be ~0)
  double stderr_value = 0.0;
  std::vector<double> s_used;
  std::vector<Complex> samples;   // per-s estimates before extrapolation
  std::vector<double> residuals;  // per-s fit residuals
};

struct ProbeResult {
  double eta_diff_hat = 0.0; // eta2 - eta1
  double q_diff_hat = 0.0;   // q2 - q1
  RegressionFit eta_fit;
  RegressionFit q_fit;
  std::vector<IdentityTerms> terms; // one per s
};

std::vector<double> default_s_list(const SectorGeometry &sector);

std::vector<IdentityTerms> compute_identity_terms(const CornerData &data,
                                                  const std::vector<double> &s_list);

double recover_eta_difference(const CornerData &data, const std::vector<double> &s_list,
                              RegressionFit *fit = nullptr,
                              std::vector<IdentityTerms> *terms = nullptr);

double recover_q_difference(const CornerData &data, double eta_diff,
                            const std::vector<double> &s_list,
                            RegressionFit *fit = nullptr,
                            std::vector<IdentityTerms> *terms = nullptr);

ProbeResult run_probe(const CornerData &data, const std::vector<double> &s_list);

// Manufactured corner fixture: u2 = const c, v = r f(theta) + kappa sigma r^2 c
// with exact Cauchy data (v = 0, T_nu v = -(eta2-eta1) c on the edges) and a
// closed-form volume defect carrying the planted q2 - q1.
CornerData make_manufactured_corner(const SectorGeometry &sector, ComplexVec2 c,
                                    double q1, double delta_q, double delta_eta,
                                    double omega, const LameParameters &lame);

// Admissibility (total field non-vanishing at corners).
struct AdmissibilityRow {
  int corner = 0;
  Point2 vertex;
  double magnitude = 0.0;
  bool pass = false;
};
struct AdmissibilityReport {
  std::vector<AdmissibilityRow> rows;
  double threshold = 0.0; // tol * sup|u^i|
  double floor_ratio = 0.0; // min |u(x_c)| / sup|u^i|
  bool admissible = false;
};

AdmissibilityReport admissibility_check(const FieldFunction &total_field,
                                        const std::vector<Point2> &corner_vertices,
                                        double tol, double incident_sup);

// Decay of |v| approaching the apex along the bisector (log-log fit).
struct VanishingReport {
  std::vector<double> radii;
  std::vector<double> v_mag;
  std::vector<double> w_mag;
  double fitted_exponent = 0.0;
  bool decays = false;
};

VanishingReport corner_vanishing_probe(const FieldFunction &v_field,
                                       const FieldFunction &w_field,
                                       const SectorGeometry &sector, double eta);

} // namespace escat
