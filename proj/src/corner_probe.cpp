#include "escat/corner_probe.hpp"

#include <cmath>

namespace escat {

namespace {

constexpr Complex kOneI[2] = {Complex(1, 0), Complex(0, 1)};

Complex dot_one_i(const ComplexVec2 &v) { return v[0] + Complex(0, 1) * v[1]; }

void check_sector(const CornerData &data, const CGOProbe &probe) {
  const SectorGeometry &a = data.sector, &b = probe.sector;
  if (std::fabs(a.theta_m - b.theta_m) > 1e-12 ||
      std::fabs(a.theta_M - b.theta_M) > 1e-12 || std::fabs(a.h - b.h) > 1e-12)
    throw SectorMismatch("probe sector differs from corner sector");
}

void check_trace(const CornerData &data) {
  double h = data.sector.h;
  double scale = 0;
  double worst = 0;
  for (int edge = 0; edge < 2; ++edge) {
    double theta = edge == 0 ? data.sector.theta_M : data.sector.theta_m;
    Point2 t{std::cos(theta), std::sin(theta)};
    for (int k = 1; k <= 8; ++k) {
      Point2 x = (h * k / 8.0) * t;
      FieldSample f1 = data.u1_minus(x), f2 = data.u2_minus(x);
      worst = std::max(worst, cnorm(f1.value - f2.value));
      scale = std::max(scale, cnorm(f2.value));
    }
  }
  if (worst > data.trace_tol * std::max(scale, 1e-30))
    throw TraceMismatch("max |u1 - u2| on edges = " + std::to_string(worst) +
                        " (scale " + std::to_string(scale) + ")");
}

} // namespace

Complex IdentityTerms::rhs_sum(double omega, double q1, double dq) const {
  double w2 = omega * omega;
  return I1 + w2 * q1 * I2 + I3_plus + I3_minus + w2 * dq * I4 - w2 * dq * I5 - I6;
}

double IdentityTerms::balance_residual(double omega, double q1, double dq) const {
  return std::abs(lhs - rhs_sum(omega, q1, dq));
}

double IdentityTerms::max_term() const {
  double m = 0;
  for (Complex t : {lhs, I1, I2, I3_plus, I3_minus, I4, I5, I6})
    m = std::max(m, std::abs(t));
  return m;
}

IdentityTerms identity_terms(const CornerData &data, const CGOProbe &probe,
                             double quad_tol) {
  check_sector(data, probe);
  check_trace(data);

  const SectorGeometry &sec = data.sector;
  double h = sec.h, s = probe.s;
  double layer = 0.5 / (s * std::max(sec.delta_W, 0.05));
  double w2 = data.omega * data.omega;

  ComplexVec2 u2_0 = data.u2_at_apex;
  Complex A = dot_one_i(u2_0);
  FieldSample v0s = data.u1_minus({0, 0});
  FieldSample u20s = data.u2_minus({0, 0});
  ComplexVec2 v0 = v0s.value - u20s.value;

  auto u0_at = [&](Point2 x) {
    Complex u1 = cgo_u1(probe, x);
    return ComplexVec2{u1, Complex(0, 1) * u1};
  };
  auto point_at = [&](double r, double theta) {
    return Point2{r * std::cos(theta), r * std::sin(theta)};
  };

  IdentityTerms T;
  T.s = s;

  // volume integrals over S_h
  T.J_S = integrate_sector_polar(
      [&](double r, double theta) {
        Point2 x = point_at(r, theta);
        return cdot(data.u2_minus(x).value, u0_at(x));
      },
      0.0, h, sec.theta_m, sec.theta_M, layer, quad_tol, 1.5 / s);
  T.I5 = integrate_sector_polar(
      [&](double r, double theta) {
        Point2 x = point_at(r, theta);
        return cdot(data.u2_minus(x).value - u2_0, u0_at(x));
      },
      0.0, h, sec.theta_m, sec.theta_M, layer, quad_tol, 1.5 / s);
  T.I2 = integrate_sector_polar(
      [&](double r, double theta) {
        Point2 x = point_at(r, theta);
        ComplexVec2 v = data.u1_minus(x).value - data.u2_minus(x).value;
        return cdot(v - v0, u0_at(x));
      },
      0.0, h, sec.theta_m, sec.theta_M, layer, quad_tol, 1.5 / s);
  if (data.pde_defect) {
    T.I6 = integrate_sector_polar(
        [&](double r, double theta) {
          Point2 x = point_at(r, theta);
          return cdot(data.pde_defect(x).value, u0_at(x));
        },
        0.0, h, sec.theta_m, sec.theta_M, layer, quad_tol, 1.5 / s);
  }

  // arc term on Lambda_h
  T.I1 = integrate_adaptive(
      [&](double theta) {
        Point2 nu{std::cos(theta), std::sin(theta)};
        Point2 x{h * nu.x1, h * nu.x2};
        FieldSample f1 = data.u1_minus(x), f2 = data.u2_minus(x);
        FieldSample vf;
        vf.value = f1.value - f2.value;
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            vf.gradient[j][k] = f1.gradient[j][k] - f2.gradient[j][k];
        vf.divergence = f1.divergence - f2.divergence;
        ComplexVec2 tv = traction(vf, nu, data.lame);
        FieldSample u0f = cgo_eval(probe, x);
        ComplexVec2 tu0 = traction(u0f, nu, data.lame);
        return h * (cdot(tv, u0f.value) - cdot(tu0, vf.value));
      },
      sec.theta_m, sec.theta_M, quad_tol);

  // edge integrals
  auto edge_integral = [&](double theta, bool delta_only) {
    Point2 t{std::cos(theta), std::sin(theta)};
    return integrate_graded(
        [&](double r) {
          Point2 x = r * t;
          ComplexVec2 u2v = data.u2_minus(x).value;
          if (delta_only) u2v = u2v - u2_0;
          return cdot(u2v, u0_at(x));
        },
        0.0, h, layer, 20, 1.5 / s);
  };
  Complex JGp = edge_integral(sec.theta_M, false);
  Complex JGm = edge_integral(sec.theta_m, false);
  T.J_Gamma = JGp + JGm;

  double eta_diff_known =
      (data.eta1 && data.eta2) ? (*data.eta1 - *data.eta2) : 0.0;
  T.I3_plus = eta_diff_known * JGp;
  T.I3_minus = eta_diff_known * JGm;

  // closed forms: lhs over the full sector W, I4 over W \ S_h
  Complex full_W = cgo_sector_integral_exact(probe);
  double cutoff = std::max((50.0) / (s * sec.delta_W), 2.0 * h);
  Complex tail = integrate_sector_polar(
      [&](double r, double theta) {
        return std::exp(s * r * std::exp(Complex(0, theta - probe.theta_d)));
      },
      h, cutoff, sec.theta_m, sec.theta_M, layer, quad_tol, 1.5 / s);
  T.I4 = A * tail;

  double dq_known = data.q2 ? (*data.q2 - data.q1) : 0.0;
  T.lhs = w2 * dq_known * A * full_W;

  T.K = T.I1 + w2 * data.q1 * T.I2 - T.I6;
  return T;
}

std::vector<double> default_s_list(const SectorGeometry &sector) {
  double base = 1.0 / (sector.h * sector.delta_W);
  return {5.0 * base, 10.0 * base, 20.0 * base, 40.0 * base};
}

namespace {

// Least-squares fit of y(s) ~ b0 + b1 s^{-alpha} + b2 s^{-1} (complex
// coefficients); returns b0 with a crude standard error from the residuals.
RegressionFit richardson_fit(const std::vector<double> &s_list,
                             const std::vector<Complex> &y, double alpha) {
  int n = static_cast<int>(s_list.size());
  int p = n >= 3 ? 3 : (n == 2 ? 2 : 1);
  // alpha near 1 would duplicate the s^{-1} column; shift the second
  // correction to s^{-2} in that case
  double beta_exp = std::fabs(alpha - 1.0) < 0.05 ? 2.0 : 1.0;
  std::vector<std::array<Complex, 3>> X(n);
  for (int i = 0; i < n; ++i)
    X[i] = {Complex(1, 0), std::pow(s_list[i], -alpha),
            std::pow(s_list[i], -beta_exp)};
  // normal equations (X^H X) beta = X^H y
  Complex M[3][3] = {}, rhs[3] = {};
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) M[a][b] += std::conj(X[i][a]) * X[i][b];
      rhs[a] += std::conj(X[i][a]) * y[i];
    }
  // Gaussian elimination
  Complex beta[3] = {};
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    std::swap(M[col], M[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = col + 1; r < p; ++r) {
      Complex f = M[r][col] / M[col][col];
      for (int cc = col; cc < p; ++cc) M[r][cc] -= f * M[col][cc];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = p - 1; r >= 0; --r) {
    Complex acc = rhs[r];
    for (int cc = r + 1; cc < p; ++cc) acc -= M[r][cc] * beta[cc];
    beta[r] = acc / M[r][r];
  }

  RegressionFit fit;
  fit.s_used = s_list;
  fit.samples = y;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    Complex pred = 0;
    for (int a = 0; a < p; ++a) pred += beta[a] * X[i][a];
    double r = std::abs(y[i] - pred);
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.value = beta[0].real();
  fit.imag_value = beta[0].imag();
  int dof = std::max(1, n - p);
  fit.stderr_value = std::sqrt(ss / dof);
  return fit;
}

void recovery_preconditions(const CornerData &data, const std::vector<double> &s_list) {
  double opening = data.sector.opening();
  if (std::fabs(opening - M_PI) < 1e-9)
    throw DegenerateAngle("opening = pi");
  Complex A = data.u2_at_apex[0] + Complex(0, 1) * data.u2_at_apex[1];
  if (std::abs(A) < 1e-12)
    throw ApexDegenerate("u2(0).(1,i) = " + std::to_string(std::abs(A)));
  if (s_list.size() < 2) throw ConfigError("s_list needs at least 2 entries");
  for (double s : s_list)
    if (s * data.sector.h * data.sector.delta_W < 5.0 - 1e-9)
      throw NotAsymptotic("s h delta_W = " +
                          std::to_string(s * data.sector.h * data.sector.delta_W));
}

} // namespace

std::vector<IdentityTerms> compute_identity_terms(const CornerData &data,
                                                  const std::vector<double> &s_list) {
  std::vector<IdentityTerms> terms;
  for (double s : s_list)
    terms.push_back(identity_terms(data, make_probe(data.sector, s)));
  return terms;
}

namespace {

RegressionFit eta_fit_from_terms(const CornerData &data,
                                 const std::vector<double> &s_list,
                                 const std::vector<IdentityTerms> &terms) {
  const SectorGeometry &sec = data.sector;
  Complex A = dot_one_i(data.u2_at_apex);
  Complex C_eta =
      std::exp(Complex(0, sec.theta_d())) *
      (std::exp(Complex(0, -sec.theta_m)) + std::exp(Complex(0, -sec.theta_M)));
  std::vector<Complex> y;
  for (size_t i = 0; i < s_list.size(); ++i)
    // s * [Delta_eta J_Gamma + w^2 Delta_q J_S] -> -Delta_eta C_eta A
    y.push_back(s_list[i] * terms[i].K / (-C_eta * A));
  return richardson_fit(s_list, y, data.holder_alpha);
}

RegressionFit q_fit_from_terms(const CornerData &data, double eta_diff,
                               const std::vector<double> &s_list,
                               const std::vector<IdentityTerms> &terms) {
  const SectorGeometry &sec = data.sector;
  Complex A = dot_one_i(data.u2_at_apex);
  Complex i(0, 1);
  Complex sigma_W =
      0.5 * i * std::exp(2.0 * i * sec.theta_d()) *
      (std::exp(-2.0 * i * sec.theta_M) - std::exp(-2.0 * i * sec.theta_m));
  if (std::abs(sigma_W) < 1e-14) throw DegenerateAngle("vanishing sector prefactor");
  double w2 = data.omega * data.omega;
  std::vector<Complex> y;
  for (size_t i2 = 0; i2 < s_list.size(); ++i2) {
    Complex K_tilde = terms[i2].K - eta_diff * terms[i2].J_Gamma;
    y.push_back(s_list[i2] * s_list[i2] * K_tilde / (w2 * sigma_W * A));
  }
  return richardson_fit(s_list, y, data.holder_alpha);
}

} // namespace

double recover_eta_difference(const CornerData &data, const std::vector<double> &s_list,
                              RegressionFit *fit_out,
                              std::vector<IdentityTerms> *terms_out) {
  recovery_preconditions(data, s_list);
  std::vector<IdentityTerms> terms = compute_identity_terms(data, s_list);
  RegressionFit fit = eta_fit_from_terms(data, s_list, terms);
  if (terms_out) *terms_out = terms;
  if (fit_out) *fit_out = fit;
  return fit.value;
}

double recover_q_difference(const CornerData &data, double eta_diff,
                            const std::vector<double> &s_list, RegressionFit *fit_out,
                            std::vector<IdentityTerms> *terms_out) {
  recovery_preconditions(data, s_list);
  std::vector<IdentityTerms> terms = compute_identity_terms(data, s_list);
  RegressionFit fit = q_fit_from_terms(data, eta_diff, s_list, terms);
  if (terms_out) *terms_out = terms;
  if (fit_out) *fit_out = fit;
  return fit.value;
}

ProbeResult run_probe(const CornerData &data, const std::vector<double> &s_list) {
  recovery_preconditions(data, s_list);
  ProbeResult result;
  result.terms = compute_identity_terms(data, s_list);
  result.eta_fit = eta_fit_from_terms(data, s_list, result.terms);
  result.eta_diff_hat = result.eta_fit.value;
  result.q_fit = q_fit_from_terms(data, result.eta_diff_hat, s_list, result.terms);
  result.q_diff_hat = result.q_fit.value;

  // refine with the joint least-squares solve of
  //   eta_diff J_Gamma(s) + w^2 q_diff J_S(s) = K(s)
  // which is exact in the computed quantities (no asymptotic dropping); the
  // s-weights balance the decaying magnitudes. Keeps the sweep estimates as
  // diagnostics, protects the q stage from amplified eta error at the low
  // end of the sweep.
  double w2 = data.omega * data.omega;
  double M00 = 0, M01 = 0, M11 = 0, r0 = 0, r1 = 0;
  for (size_t i = 0; i < s_list.size(); ++i) {
    double w = s_list[i] * s_list[i];
    Complex a = result.terms[i].J_Gamma, b = w2 * result.terms[i].J_S;
    Complex k = result.terms[i].K;
    M00 += w * std::norm(a);
    M01 += w * (std::conj(a) * b).real();
    M11 += w * std::norm(b);
    r0 += w * (std::conj(a) * k).real();
    r1 += w * (std::conj(b) * k).real();
  }
  double det = M00 * M11 - M01 * M01;
  if (std::fabs(det) > 1e-14 * (M00 * M11 + M01 * M01 + 1e-300)) {
    result.eta_diff_hat = (M11 * r0 - M01 * r1) / det;
    result.q_diff_hat = (-M01 * r0 + M00 * r1) / det;
  }
  return result;
}

// ---------------------------------------------------------------------------
// manufactured fixture

namespace {

struct Cubic {
  // f(theta) = (t^3 - 2 t^2 + t) D gm + (t^3 - t^2) D gp, t = (theta-tm)/D
  double tm, D;
  ComplexVec2 gm, gp;

  void eval(double theta, ComplexVec2 &f, ComplexVec2 &f1, ComplexVec2 &f2) const {
    double t = (theta - tm) / D;
    double c_m = (t * t * t - 2 * t * t + t) * D;
    double c_p = (t * t * t - t * t) * D;
    double d_m = 3 * t * t - 4 * t + 1;
    double d_p = 3 * t * t - 2 * t;
    double e_m = (6 * t - 4) / D;
    double e_p = (6 * t - 2) / D;
    for (int j = 0; j < 2; ++j) {
      f[j] = c_m * gm[j] + c_p * gp[j];
      f1[j] = d_m * gm[j] + d_p * gp[j];
      f2[j] = e_m * gm[j] + e_p * gp[j];
    }
  }
};

struct Bump {
  // sigma(theta) = sin^2(pi t), t = (theta - tm)/D
  double tm, D;
  void eval(double theta, double &s0, double &s1, double &s2) const {
    double t = (theta - tm) / D;
    s0 = std::sin(M_PI * t) * std::sin(M_PI * t);
    s1 = M_PI / D * std::sin(2 * M_PI * t);
    s2 = 2 * M_PI * M_PI / (D * D) * std::cos(2 * M_PI * t);
  }
};

// L(r^k g(theta)) = r^{k-2} { mu (k^2 g + g'') + (lam+mu) [ ((k-1) D c - D' s),
// ((k-1) D s + D' c) ] } with D = k(g1 c + g2 s) - g1' s + g2' c.
ComplexVec2 lame_of_homogeneous(int k, double theta, const ComplexVec2 &g,
                                const ComplexVec2 &g1, const ComplexVec2 &g2,
                                const LameParameters &lame) {
  double c = std::cos(theta), s = std::sin(theta);
  Complex D = static_cast<double>(k) * (g[0] * c + g[1] * s) - g1[0] * s + g1[1] * c;
  Complex Dp = static_cast<double>(k) * (g1[0] * c - g[0] * s + g1[1] * s + g[1] * c) -
               (g2[0] * s + g1[0] * c) + (g2[1] * c - g1[1] * s);
  double k2 = static_cast<double>(k) * k;
  ComplexVec2 out;
  for (int j = 0; j < 2; ++j) out[j] = lame.mu * (k2 * g[j] + g2[j]);
  double km1 = k - 1;
  out[0] += (lame.lambda + lame.mu) * (km1 * D * c - Dp * s);
  out[1] += (lame.lambda + lame.mu) * (km1 * D * s + Dp * c);
  return out;
}

} // namespace

CornerData make_manufactured_corner(const SectorGeometry &sector, ComplexVec2 c,
                                    double q1, double delta_q, double delta_eta,
                                    double omega, const LameParameters &lame) {
  double tm = sector.theta_m, tM = sector.theta_M, D = tM - tm;
  if (!(D > 0) || !(D < M_PI)) throw InvalidSector("manufactured corner opening");

  // edge traction targets: T_nu v = -delta_eta * c on both edges
  auto solve_g = [&](double theta, double sign) {
    Point2 xh{std::cos(theta), std::sin(theta)};
    Point2 th{-std::sin(theta), std::cos(theta)};
    Complex ce = c[0] * xh.x1 + c[1] * xh.x2;
    Complex cn = c[0] * th.x1 + c[1] * th.x2;
    Complex ae = sign * delta_eta * ce / lame.mu;
    Complex an = sign * delta_eta * cn / (lame.lambda + 2.0 * lame.mu);
    return ComplexVec2{ae * xh.x1 + an * th.x1, ae * xh.x2 + an * th.x2};
  };
  Cubic f{tm, D, solve_g(tm, +1.0), solve_g(tM, -1.0)};
  Bump sigma{tm, D};
  double kappa = omega * omega * delta_q / (6.0 * lame.mu + 2.0 * lame.lambda);
  double w2 = omega * omega;

  auto v_field = [f, sigma, kappa, c](Point2 x) {
    FieldSample out;
    double r = norm(x);
    if (r == 0) return out;
    double theta = std::atan2(x.x2, x.x1);
    Point2 xh{x.x1 / r, x.x2 / r}, th{-xh.x2, xh.x1};
    ComplexVec2 fv, f1, f2;
    f.eval(theta, fv, f1, f2);
    double s0, s1, s2;
    sigma.eval(theta, s0, s1, s2);
    for (int j = 0; j < 2; ++j) {
      Complex gq = kappa * s0 * c[j];
      Complex gq1 = kappa * s1 * c[j];
      out.value[j] = r * fv[j] + r * r * gq;
      // grad(r f_j) = f_j xh + f_j' th; grad(r^2 g_j) = 2 r g_j xh + r g_j' th
      out.gradient[j][0] = fv[j] * xh.x1 + f1[j] * th.x1 +
                           2.0 * r * gq * xh.x1 + r * gq1 * th.x1;
      out.gradient[j][1] = fv[j] * xh.x2 + f1[j] * th.x2 +
                           2.0 * r * gq * xh.x2 + r * gq1 * th.x2;
    }
    out.divergence = out.gradient[0][0] + out.gradient[1][1];
    return out;
  };

  CornerData data;
  data.sector = sector;
  data.u2_minus = [c](Point2) {
    FieldSample f2s;
    f2s.value = c;
    return f2s;
  };
  data.u1_minus = [c, v_field](Point2 x) {
    FieldSample out = v_field(x);
    out.value[0] += c[0];
    out.value[1] += c[1];
    return out;
  };
  data.pde_defect = [f, sigma, kappa, c, w2, q1, delta_q, lame, v_field](Point2 x) {
    FieldSample out;
    double r = norm(x);
    if (r == 0) return out;
    double theta = std::atan2(x.x2, x.x1);
    ComplexVec2 fv, f1, f2;
    f.eval(theta, fv, f1, f2);
    double s0, s1, s2;
    sigma.eval(theta, s0, s1, s2);
    ComplexVec2 L_eta = lame_of_homogeneous(1, theta, fv, f1, f2, lame);
    ComplexVec2 g{kappa * s0 * c[0], kappa * s0 * c[1]};
    ComplexVec2 g1{kappa * s1 * c[0], kappa * s1 * c[1]};
    ComplexVec2 g2{kappa * s2 * c[0], kappa * s2 * c[1]};
    ComplexVec2 L_q = lame_of_homogeneous(2, theta, g, g1, g2, lame);
    ComplexVec2 v = v_field(x).value;
    for (int j = 0; j < 2; ++j)
      out.value[j] = L_eta[j] / r + L_q[j] + w2 * q1 * v[j] - w2 * delta_q * c[j];
    return out;
  };
  data.u2_at_apex = c;
  data.q1 = q1;
  data.q2 = q1 + delta_q;
  data.eta1 = 0.0;
  data.eta2 = delta_eta;
  data.omega = omega;
  data.lame = lame;
  data.holder_alpha = 1.0;
  data.trace_tol = 1e-9;
  return data;
}

AdmissibilityReport admissibility_check(const FieldFunction &total_field,
                                        const std::vector<Point2> &corner_vertices,
                                        double tol, double incident_sup) {
  AdmissibilityReport rep;
  rep.threshold = tol * incident_sup;
  rep.admissible = true;
  rep.floor_ratio = 1e300;
  for (size_t i = 0; i < corner_vertices.size(); ++i) {
    AdmissibilityRow row;
    row.corner = static_cast<int>(i);
    row.vertex = corner_vertices[i];
    row.magnitude = cnorm(total_field(corner_vertices[i]).value);
    row.pass = row.magnitude >= rep.threshold;
    rep.floor_ratio = std::min(rep.floor_ratio, row.magnitude / incident_sup);
    rep.admissible = rep.admissible && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

VanishingReport corner_vanishing_probe(const FieldFunction &v_field,
                                       const FieldFunction &w_field,
                                       const SectorGeometry &sector, double eta) {
  (void)eta;
  VanishingReport rep;
  double bis = 0.5 * (sector.theta_m + sector.theta_M);
  Point2 dir{std::cos(bis), std::sin(bis)};
  for (int k = 0; k <= 12; ++k) {
    double r = sector.h * std::pow(0.5, k);
    Point2 x = r * dir;
    rep.radii.push_back(r);
    rep.v_mag.push_back(cnorm(v_field(x).value));
    rep.w_mag.push_back(cnorm(w_field(x).value));
  }
  // log-log slope over samples with nonzero magnitude
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < rep.radii.size(); ++i) {
    if (rep.v_mag[i] <= 0) continue;
    double lx = std::log(rep.radii[i]), ly = std::log(rep.v_mag[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n >= 3) {
    rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.decays = rep.fitted_exponent > 0.05 &&
                 rep.v_mag.back() < 0.5 * rep.v_mag.front();
  } else {
    rep.fitted_exponent = n == 0 ? 1e9 : 0.0; // identically zero field: decays
    rep.decays = n == 0;
  }
  return rep;
}

} // namespace escat
