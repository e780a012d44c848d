#include "escat/dtn_farfield.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "escat/bessel.hpp"

namespace escat {

int default_dtn_truncation(double ks_R) {
  int pad = std::max(15, static_cast<int>(std::ceil(0.4 * std::cbrt(ks_R) * 6.0)));
  return static_cast<int>(std::ceil(ks_R)) + pad;
}

namespace {

struct Mode2x2 {
  Complex m[2][2];
};

// Dirichlet and traction matrices of the (a_n, b_n) potentials on |x| = R,
// (radial, tangential) frame.
void mode_matrices(int n, double R, const LameParameters &lame, const Wavenumbers &k,
                   Complex D[2][2], Complex T[2][2]) {
  double kp = k.k_p, ks = k.k_s, mu = lame.mu, w2 = k.omega * k.omega;
  double zp = kp * R, zs = ks * R;
  Complex Hp = hankel1(n, zp), dHp = hankel1_deriv(n, zp);
  Complex Hs = hankel1(n, zs), dHs = hankel1_deriv(n, zs);
  Complex in(0, n);

  D[0][0] = kp * dHp;
  D[0][1] = in / R * Hs;
  D[1][0] = in / R * Hp;
  D[1][1] = -ks * dHs;

  T[0][0] = (2.0 * mu * n * n / (R * R) - w2) * Hp - 2.0 * mu * kp / R * dHp;
  T[0][1] = 2.0 * mu * in / R * (ks * dHs - Hs / R);
  T[1][0] = 2.0 * mu * in / R * (kp * dHp - Hp / R);
  T[1][1] = 2.0 * mu * ks / R * dHs - (2.0 * mu * n * n / (R * R) - mu * ks * ks) * Hs;
}

} // namespace

DtnOperator build_dtn(const LameParameters &lame, double omega, double R, int N) {
  if (!(R > 0)) throw ConfigError("DtN radius must be positive");
  if (N < 0) throw ConfigError("DtN truncation must be nonnegative");
  DtnOperator dtn;
  dtn.R = R;
  dtn.N = N;
  dtn.lame = lame;
  dtn.k = wavenumbers(lame, omega);
  dtn.modes.resize(2 * N + 1);

  for (int n = -N; n <= N; ++n) {
    DtnMode &m = dtn.modes[n + N];
    mode_matrices(n, R, lame, dtn.k, m.D, m.T);

    // column-scaled inverse; the scaling cancels in G = T D^{-1}
    double c0 = std::max(std::abs(m.D[0][0]), std::abs(m.D[1][0]));
    double c1 = std::max(std::abs(m.D[0][1]), std::abs(m.D[1][1]));
    if (c0 == 0 || c1 == 0) throw ModeSingular("mode " + std::to_string(n));
    Complex d00 = m.D[0][0] / c0, d10 = m.D[1][0] / c0;
    Complex d01 = m.D[0][1] / c1, d11 = m.D[1][1] / c1;
    Complex det = d00 * d11 - d01 * d10;
    double nrm = std::abs(d00) + std::abs(d01) + std::abs(d10) + std::abs(d11);
    if (std::abs(det) < 1e-14 * nrm * nrm)
      throw ModeSingular("mode " + std::to_string(n) + " det " +
                         std::to_string(std::abs(det)));
    // inv(D) with scaling folded back in
    Complex inv[2][2] = {{d11 / det / c0, -d01 / det / c0},
                         {-d10 / det / c1, d00 / det / c1}};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m.G[r][c] = m.T[r][0] * inv[0][c] + m.T[r][1] * inv[1][c];

    // 2-norm condition of the scaled Dirichlet matrix
    double a = std::norm(d00) + std::norm(d10), b = std::norm(d01) + std::norm(d11);
    Complex cc = std::conj(d00) * d01 + std::conj(d10) * d11;
    double tr = a + b, dd = std::sqrt(std::max(0.0, (a - b) * (a - b) / 4 + std::norm(cc)));
    double smax = std::sqrt(tr / 2 + dd), smin = std::sqrt(std::max(1e-300, tr / 2 - dd));
    m.condition = smax / smin;
  }
  return dtn;
}

std::vector<std::array<Complex, 2>>
dtn_apply_modes(const DtnOperator &dtn, const std::vector<std::array<Complex, 2>> &trace) {
  if (trace.size() != dtn.modes.size())
    throw GridMismatch("trace has " + std::to_string(trace.size()) + " modes, DtN has " +
                       std::to_string(dtn.modes.size()));
  std::vector<std::array<Complex, 2>> out(trace.size());
  for (size_t i = 0; i < trace.size(); ++i) {
    const DtnMode &m = dtn.modes[i];
    out[i] = {m.G[0][0] * trace[i][0] + m.G[0][1] * trace[i][1],
              m.G[1][0] * trace[i][0] + m.G[1][1] * trace[i][1]};
  }
  return out;
}

namespace {

// Hankel mode table H_m(k r) e^{i m theta} for m = -(N+2) .. N+2.
struct ModeTable {
  int N;
  std::vector<Complex> mp, ms; // index m + N + 2

  Complex p(int m) const { return mp[m + N + 2]; }
  Complex s(int m) const { return ms[m + N + 2]; }
};

ModeTable mode_table(const RadiatingSolution &sol, Point2 x) {
  double r = norm(x), theta = std::atan2(x.x2, x.x1);
  int top = sol.N + 2;
  auto hp = hankel1_table(top, sol.k.k_p * r);
  auto hs = hankel1_table(top, sol.k.k_s * r);
  ModeTable t;
  t.N = sol.N;
  t.mp.resize(2 * top + 1);
  t.ms.resize(2 * top + 1);
  for (int m = -top; m <= top; ++m) {
    Complex ang = std::exp(Complex(0, m * theta));
    int a = std::abs(m);
    double sign = (m < 0 && (a & 1)) ? -1.0 : 1.0;
    t.mp[m + top] = sign * hp[a] * ang;
    t.ms[m + top] = sign * hs[a] * ang;
  }
  return t;
}

} // namespace

FieldSample radiating_eval(const RadiatingSolution &sol, Point2 x) {
  ModeTable t = mode_table(sol, x);
  double kp = sol.k.k_p, ks = sol.k.k_s;
  Complex i(0, 1);
  FieldSample f;
  for (int n = -sol.N; n <= sol.N; ++n) {
    Complex an = sol.a_at(n), bn = sol.b_at(n);
    if (an == Complex(0) && bn == Complex(0)) continue;
    // first derivatives of the scalar modes
    Complex dxp = 0.5 * kp * (t.p(n - 1) - t.p(n + 1));
    Complex dyp = 0.5 * i * kp * (t.p(n - 1) + t.p(n + 1));
    Complex dxs = 0.5 * ks * (t.s(n - 1) - t.s(n + 1));
    Complex dys = 0.5 * i * ks * (t.s(n - 1) + t.s(n + 1));
    // second derivatives
    Complex kp2 = 0.25 * kp * kp, ks2 = 0.25 * ks * ks;
    Complex pxx = kp2 * (t.p(n - 2) - 2.0 * t.p(n) + t.p(n + 2));
    Complex pyy = -kp2 * (t.p(n - 2) + 2.0 * t.p(n) + t.p(n + 2));
    Complex pxy = i * kp2 * (t.p(n - 2) - t.p(n + 2));
    Complex sxx = ks2 * (t.s(n - 2) - 2.0 * t.s(n) + t.s(n + 2));
    Complex syy = -ks2 * (t.s(n - 2) + 2.0 * t.s(n) + t.s(n + 2));
    Complex sxy = i * ks2 * (t.s(n - 2) - t.s(n + 2));

    // u = grad phi + curl psi, curl q = (d2 q, -d1 q)
    f.value[0] += an * dxp + bn * dys;
    f.value[1] += an * dyp - bn * dxs;
    f.gradient[0][0] += an * pxx + bn * sxy;
    f.gradient[0][1] += an * pxy + bn * syy;
    f.gradient[1][0] += an * pxy - bn * sxx;
    f.gradient[1][1] += an * pyy - bn * sxy;
  }
  f.divergence = f.gradient[0][0] + f.gradient[1][1];
  return f;
}

BetaParts radiating_beta_parts(const RadiatingSolution &sol, Point2 x) {
  ModeTable t = mode_table(sol, x);
  double kp = sol.k.k_p, ks = sol.k.k_s;
  Point2 xh = normalized(x);
  Complex i(0, 1);
  BetaParts out{};
  for (int n = -sol.N; n <= sol.N; ++n) {
    Complex an = sol.a_at(n), bn = sol.b_at(n);
    if (an == Complex(0) && bn == Complex(0)) continue;
    Complex dxp = 0.5 * kp * (t.p(n - 1) - t.p(n + 1));
    Complex dyp = 0.5 * i * kp * (t.p(n - 1) + t.p(n + 1));
    Complex dxs = 0.5 * ks * (t.s(n - 1) - t.s(n + 1));
    Complex dys = 0.5 * i * ks * (t.s(n - 1) + t.s(n + 1));
    Complex kp2 = 0.25 * kp * kp, ks2 = 0.25 * ks * ks;
    Complex pxx = kp2 * (t.p(n - 2) - 2.0 * t.p(n) + t.p(n + 2));
    Complex pyy = -kp2 * (t.p(n - 2) + 2.0 * t.p(n) + t.p(n + 2));
    Complex pxy = i * kp2 * (t.p(n - 2) - t.p(n + 2));
    Complex sxx = ks2 * (t.s(n - 2) - 2.0 * t.s(n) + t.s(n + 2));
    Complex syy = -ks2 * (t.s(n - 2) + 2.0 * t.s(n) + t.s(n + 2));
    Complex sxy = i * ks2 * (t.s(n - 2) - t.s(n + 2));

    out.u_p[0] += an * dxp;
    out.u_p[1] += an * dyp;
    out.u_s[0] += bn * dys;
    out.u_s[1] += -bn * dxs;
    out.du_p_dr[0] += an * (pxx * xh.x1 + pxy * xh.x2);
    out.du_p_dr[1] += an * (pxy * xh.x1 + pyy * xh.x2);
    out.du_s_dr[0] += bn * (sxy * xh.x1 + syy * xh.x2);
    out.du_s_dr[1] += -bn * (sxx * xh.x1 + sxy * xh.x2);
  }
  return out;
}

std::vector<std::array<Complex, 2>> radiating_trace_modes(const RadiatingSolution &sol,
                                                          double R) {
  std::vector<std::array<Complex, 2>> out(2 * sol.N + 1);
  double kp = sol.k.k_p, ks = sol.k.k_s;
  for (int n = -sol.N; n <= sol.N; ++n) {
    Complex in(0, n);
    Complex ur = sol.a_at(n) * kp * hankel1_deriv(n, kp * R) +
                 sol.b_at(n) * in / R * hankel1(n, ks * R);
    Complex ut = sol.a_at(n) * in / R * hankel1(n, kp * R) -
                 sol.b_at(n) * ks * hankel1_deriv(n, ks * R);
    out[n + sol.N] = {ur, ut};
  }
  return out;
}

std::vector<std::array<Complex, 2>> radiating_traction_modes(const RadiatingSolution &sol,
                                                             double R) {
  std::vector<std::array<Complex, 2>> out(2 * sol.N + 1);
  for (int n = -sol.N; n <= sol.N; ++n) {
    Complex D[2][2], T[2][2];
    mode_matrices(n, R, sol.lame, sol.k, D, T);
    out[n + sol.N] = {T[0][0] * sol.a_at(n) + T[0][1] * sol.b_at(n),
                      T[1][0] * sol.a_at(n) + T[1][1] * sol.b_at(n)};
  }
  return out;
}

double FarFieldPattern::l2_norm() const {
  double acc = 0;
  for (size_t i = 0; i < up.size(); ++i) acc += std::norm(up[i]) + std::norm(us[i]);
  return std::sqrt(acc * 2.0 * M_PI / M);
}

FarFieldPattern far_field_from_solution(const RadiatingSolution &sol, int M) {
  FarFieldPattern p;
  p.M = M;
  p.omega = sol.k.omega;
  p.lambda = sol.lame.lambda;
  p.mu = sol.lame.mu;
  p.up.assign(M, 0);
  p.us.assign(M, 0);
  Complex cp = std::sqrt(2.0 * sol.k.k_p / M_PI) * std::exp(Complex(0, M_PI / 4));
  Complex cs = -std::sqrt(2.0 * sol.k.k_s / M_PI) * std::exp(Complex(0, M_PI / 4));
  for (int j = 0; j < M; ++j) {
    double theta = 2.0 * M_PI * j / M;
    Complex sum_a = 0, sum_b = 0;
    for (int n = -sol.N; n <= sol.N; ++n) {
      Complex phase = std::exp(Complex(0, n * (theta - M_PI / 2))); // (-i)^n e^{in theta}
      sum_a += sol.a_at(n) * phase;
      sum_b += sol.b_at(n) * phase;
    }
    p.up[j] = cp * sum_a;
    p.us[j] = cs * sum_b;
  }
  return p;
}

void farfield_project(const std::vector<ComplexVec2> &u_t,
                      const std::vector<double> &angles, std::vector<Complex> &up,
                      std::vector<Complex> &us) {
  up.resize(u_t.size());
  us.resize(u_t.size());
  for (size_t i = 0; i < u_t.size(); ++i) {
    double c = std::cos(angles[i]), s = std::sin(angles[i]);
    up[i] = u_t[i][0] * c + u_t[i][1] * s;
    us[i] = -u_t[i][0] * s + u_t[i][1] * c;
  }
}

double farfield_distance(const FarFieldPattern &A, const FarFieldPattern &B) {
  if (A.M != B.M || A.up.size() != B.up.size())
    throw GridMismatch("angle grids differ (" + std::to_string(A.M) + " vs " +
                       std::to_string(B.M) + ")");
  if (A.convention != B.convention)
    throw GridMismatch("conventions differ (" + A.convention + " vs " + B.convention + ")");
  double acc = 0;
  for (size_t i = 0; i < A.up.size(); ++i)
    acc += std::norm(A.up[i] - B.up[i]) + std::norm(A.us[i] - B.us[i]);
  return std::sqrt(acc * 2.0 * M_PI / A.M);
}

double rellich_boundary_imag(const RadiatingSolution &sol, double R, int n_quad) {
  double acc = 0;
  for (int j = 0; j < n_quad; ++j) {
    double theta = 2.0 * M_PI * j / n_quad;
    Point2 nu{std::cos(theta), std::sin(theta)};
    Point2 x{R * nu.x1, R * nu.x2};
    FieldSample f = radiating_eval(sol, x);
    ComplexVec2 t = traction(f, nu, sol.lame);
    // T_nu(conj u) . u = conj(T_nu u) . u
    acc += (std::conj(t[0]) * f.value[0] + std::conj(t[1]) * f.value[1]).imag();
  }
  return acc * 2.0 * M_PI * R / n_quad;
}

void write_farfield(std::ostream &os, const FarFieldPattern &p) {
  os << "# escat far-field pattern\n";
  os << "# convention " << p.convention << "\n";
  os << std::setprecision(17);
  os << "# omega " << p.omega << "\n";
  os << "# lambda " << p.lambda << "\n";
  os << "# mu " << p.mu << "\n";
  os << "# R " << p.R << "\n";
  os << "# M " << p.M << "\n";
  os << "# columns: theta_rad Re_up Im_up Re_Us Im_Us\n";
  for (int j = 0; j < p.M; ++j) {
    double theta = 2.0 * M_PI * j / p.M;
    os << theta << " " << p.up[j].real() << " " << p.up[j].imag() << " "
       << p.us[j].real() << " " << p.us[j].imag() << "\n";
  }
}

FarFieldPattern read_farfield(std::istream &is) {
  FarFieldPattern p;
  p.up.clear();
  p.us.clear();
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "convention") ss >> p.convention;
      else if (key == "omega") ss >> p.omega;
      else if (key == "lambda") ss >> p.lambda;
      else if (key == "mu") ss >> p.mu;
      else if (key == "R") ss >> p.R;
      else if (key == "M") ss >> p.M;
      continue;
    }
    std::istringstream ss(line);
    double theta, a, b, c, d;
    if (!(ss >> theta >> a >> b >> c >> d))
      throw ConfigError("malformed far-field row: " + line);
    p.up.emplace_back(a, b);
    p.us.emplace_back(c, d);
  }
  if (static_cast<int>(p.up.size()) != p.M)
    throw ConfigError("far-field file row count does not match header M");
  return p;
}

} // namespace escat
