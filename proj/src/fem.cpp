#include "escat/fem.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace escat {

namespace {

double region_q(const MediumConfig &config, int region_id) {
  if (region_id == 0) return 1.0;
  return config.q_values.at(region_id - 1);
}

struct TriGeom {
  Point2 grad[3]; // gradients of barycentric functions
  double area;
};

TriGeom tri_geom(const Mesh &mesh, int t) {
  Point2 a = mesh.vertices[mesh.triangles[t][0]];
  Point2 b = mesh.vertices[mesh.triangles[t][1]];
  Point2 c = mesh.vertices[mesh.triangles[t][2]];
  double det = cross(b - a, c - a);
  TriGeom g;
  g.area = 0.5 * det;
  g.grad[0] = {(b.x2 - c.x2) / det, (c.x1 - b.x1) / det};
  g.grad[1] = {(c.x2 - a.x2) / det, (a.x1 - c.x1) / det};
  g.grad[2] = {(a.x2 - b.x2) / det, (b.x1 - a.x1) / det};
  return g;
}

} // namespace

AssembledSystem assemble(const Mesh &mesh, const MediumConfig &config,
                         const LameParameters &lame, double omega,
                         const DtnOperator &dtn) {
  if (std::fabs(dtn.R - mesh.R) > 1e-12 * mesh.R)
    throw RegionMismatch("DtN radius does not match the mesh");
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (mesh.region[t] < 0 || mesh.region[t] > config.partition.region_count())
      throw RegionMismatch("triangle region " + std::to_string(mesh.region[t]));
  for (const auto &[id, edges] : mesh.interface_edges)
    sample_eta(config, id); // throws UnknownInterface on mismatch

  const int n_dofs = 2 * mesh.vertex_count();
  double w2 = omega * omega;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(mesh.triangle_count()) * 36 + 1024);

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    TriGeom g = tri_geom(mesh, t);
    double q = region_q(config, mesh.region[t]);
    const auto &tv = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double gg = dot(g.grad[i], g.grad[j]);
        double mass = g.area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) {
            double gi_c = c == 0 ? g.grad[i].x1 : g.grad[i].x2;
            double gj_d = d == 0 ? g.grad[j].x1 : g.grad[j].x2;
            double gj_c = c == 0 ? g.grad[j].x1 : g.grad[j].x2;
            double gi_d = d == 0 ? g.grad[i].x1 : g.grad[i].x2;
            double k = g.area * (lame.lambda * gi_c * gj_d +
                                 lame.mu * ((c == d ? gg : 0.0) + gj_c * gi_d));
            double m = (c == d) ? -w2 * q * mass : 0.0;
            trips.emplace_back(2 * tv[i] + c, 2 * tv[j] + d, Complex(k + m, 0.0));
          }
      }
  }

  // interface eta terms: -eta int_I v . conj(phi)
  for (const auto &[id, edges] : mesh.interface_edges) {
    double eta = sample_eta(config, id);
    if (eta == 0.0) continue;
    for (const auto &e : edges) {
      double L = norm(mesh.vertices[e[1]] - mesh.vertices[e[0]]);
      double m11 = L / 3.0, m12 = L / 6.0;
      for (int c = 0; c < 2; ++c) {
        trips.emplace_back(2 * e[0] + c, 2 * e[0] + c, Complex(-eta * m11, 0.0));
        trips.emplace_back(2 * e[1] + c, 2 * e[1] + c, Complex(-eta * m11, 0.0));
        trips.emplace_back(2 * e[0] + c, 2 * e[1] + c, Complex(-eta * m12, 0.0));
        trips.emplace_back(2 * e[1] + c, 2 * e[0] + c, Complex(-eta * m12, 0.0));
      }
    }
  }

  // DtN block: -2 pi R / nb^2 sum_n e^{i n (th_k - th_j)} Q(th_k)^T G_n Q(th_j)
  {
    const auto &bv = mesh.boundary_vertices;
    int nb = static_cast<int>(bv.size());
    if (nb < 2 * dtn.N + 1)
      throw RegionMismatch("boundary ring too coarse for DtN truncation N = " +
                           std::to_string(dtn.N));
    std::vector<double> theta(nb);
    for (int j = 0; j < nb; ++j)
      theta[j] = std::atan2(mesh.vertices[bv[j]].x2, mesh.vertices[bv[j]].x1);
    double scale = 2.0 * M_PI * dtn.R / (static_cast<double>(nb) * nb);
    for (int k = 0; k < nb; ++k) {
      double ck = std::cos(theta[k]), sk = std::sin(theta[k]);
      double Qk[2][2] = {{ck, sk}, {-sk, ck}};
      for (int j = 0; j < nb; ++j) {
        double cj = std::cos(theta[j]), sj = std::sin(theta[j]);
        double Qj[2][2] = {{cj, sj}, {-sj, cj}};
        Complex acc[2][2] = {{0, 0}, {0, 0}};
        for (int n = -dtn.N; n <= dtn.N; ++n) {
          const DtnMode &m = dtn.mode(n);
          Complex phase = std::exp(Complex(0, n * (theta[k] - theta[j])));
          // acc += phase * Qk^T * G * Qj
          Complex G00 = m.G[0][0], G01 = m.G[0][1], G10 = m.G[1][0], G11 = m.G[1][1];
          Complex t00 = G00 * Qj[0][0] + G01 * Qj[1][0];
          Complex t01 = G00 * Qj[0][1] + G01 * Qj[1][1];
          Complex t10 = G10 * Qj[0][0] + G11 * Qj[1][0];
          Complex t11 = G10 * Qj[0][1] + G11 * Qj[1][1];
          acc[0][0] += phase * (Qk[0][0] * t00 + Qk[1][0] * t10);
          acc[0][1] += phase * (Qk[0][0] * t01 + Qk[1][0] * t11);
          acc[1][0] += phase * (Qk[0][1] * t00 + Qk[1][1] * t10);
          acc[1][1] += phase * (Qk[0][1] * t01 + Qk[1][1] * t11);
        }
        for (int c = 0; c < 2; ++c)
          for (int d2 = 0; d2 < 2; ++d2)
            trips.emplace_back(2 * bv[k] + c, 2 * bv[j] + d2, -scale * acc[c][d2]);
      }
    }
  }

  AssembledSystem sys;
  sys.n_dofs = n_dofs;
  sys.A.resize(n_dofs, n_dofs);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.A.makeCompressed();
  sys.b = VecC::Zero(n_dofs);
  sys.eta_positive_warning = config.eta_positive_warning;
  return sys;
}

VecC rhs_from_incident(const Mesh &mesh, const MediumConfig &config,
                       const LameParameters &lame, const PlaneWave &wave) {
  (void)lame;
  VecC b = VecC::Zero(2 * mesh.vertex_count());
  double w2 = wave.k.omega * wave.k.omega;

  // volume term -int omega^2 (1-q) u^i . phi over scatterer regions,
  // 3-point (edge midpoint) rule, exact to degree 2
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.region[t] == 0) continue;
    double q = region_q(config, mesh.region[t]);
    if (q == 1.0) continue;
    const auto &tv = mesh.triangles[t];
    Point2 p[3] = {mesh.vertices[tv[0]], mesh.vertices[tv[1]], mesh.vertices[tv[2]]};
    double area = tri_geom(mesh, t).area;
    Point2 mid[3] = {0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]), 0.5 * (p[2] + p[0])};
    // basis values at midpoints: hat_i(mid_j)
    static const double hat[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
    for (int m = 0; m < 3; ++m) {
      ComplexVec2 ui = plane_wave_eval(wave, mid[m]).value;
      Complex coeff = -w2 * (1.0 - q) * area / 3.0;
      for (int i = 0; i < 3; ++i) {
        if (hat[i][m] == 0.0) continue;
        b[2 * tv[i] + 0] += coeff * hat[i][m] * ui[0];
        b[2 * tv[i] + 1] += coeff * hat[i][m] * ui[1];
      }
    }
  }

  // interface term +eta int_I u^i . phi (from g = -eta u^i), 2-point Gauss
  const double gp = 0.5 / std::sqrt(3.0);
  for (const auto &[id, edges] : mesh.interface_edges) {
    double eta = sample_eta(config, id);
    if (eta == 0.0) continue;
    for (const auto &e : edges) {
      Point2 a = mesh.vertices[e[0]], bb = mesh.vertices[e[1]];
      double L = norm(bb - a);
      for (double s : {0.5 - gp, 0.5 + gp}) {
        Point2 x = a + s * (bb - a);
        ComplexVec2 ui = plane_wave_eval(wave, x).value;
        double w = 0.5 * L;
        Complex c0 = eta * w * (1.0 - s), c1 = eta * w * s;
        b[2 * e[0] + 0] += c0 * ui[0];
        b[2 * e[0] + 1] += c0 * ui[1];
        b[2 * e[1] + 0] += c1 * ui[0];
        b[2 * e[1] + 1] += c1 * ui[1];
      }
    }
  }
  return b;
}

ScatteredField solve(const AssembledSystem &system) {
  Eigen::SparseLU<SpMatC> lu;
  lu.compute(system.A);
  if (lu.info() != Eigen::Success) throw SingularSystem("sparse LU factorization failed");

  ScatteredField out;
  double bnorm = system.b.norm();
  if (bnorm == 0.0) {
    out.nodal = VecC::Zero(system.n_dofs);
    out.info.residual_rel = 0.0;
    out.info.eta_positive_warning = system.eta_positive_warning;
    return out;
  }
  VecC x = lu.solve(system.b);
  for (int it = 0; it < 4; ++it) {
    VecC r = system.b - system.A * x;
    if (r.norm() <= 1e-13 * bnorm) break;
    x += lu.solve(r);
  }
  double res = (system.b - system.A * x).norm() / bnorm;
  if (!(res <= 1e-10))
    throw ResidualTooLarge("relative residual " + std::to_string(res));
  out.nodal = std::move(x);
  out.info.residual_rel = res;
  out.info.eta_positive_warning = system.eta_positive_warning;
  return out;
}

RadiatingSolution circle_trace_modes(const Mesh &mesh, const ScatteredField &field,
                                     const DtnOperator &dtn) {
  const auto &bv = mesh.boundary_vertices;
  int nb = static_cast<int>(bv.size());
  RadiatingSolution sol;
  sol.N = dtn.N;
  sol.k = dtn.k;
  sol.lame = dtn.lame;
  sol.a.assign(2 * dtn.N + 1, 0);
  sol.b.assign(2 * dtn.N + 1, 0);
  for (int n = -dtn.N; n <= dtn.N; ++n) {
    Complex pr = 0, pt = 0;
    for (int j = 0; j < nb; ++j) {
      double theta = std::atan2(mesh.vertices[bv[j]].x2, mesh.vertices[bv[j]].x1);
      Complex u1 = field.nodal[2 * bv[j]], u2 = field.nodal[2 * bv[j] + 1];
      Complex ph = std::exp(Complex(0, -n * theta));
      pr += ph * (u1 * std::cos(theta) + u2 * std::sin(theta));
      pt += ph * (-u1 * std::sin(theta) + u2 * std::cos(theta));
    }
    pr /= static_cast<double>(nb);
    pt /= static_cast<double>(nb);
    const DtnMode &m = dtn.mode(n);
    Complex det = m.D[0][0] * m.D[1][1] - m.D[0][1] * m.D[1][0];
    double nrm = std::abs(m.D[0][0]) * std::abs(m.D[1][1]) +
                 std::abs(m.D[0][1]) * std::abs(m.D[1][0]) + 1e-300;
    if (std::abs(det) < 1e-13 * nrm)
      throw ModeSingular("trace mode " + std::to_string(n));
    sol.a_at(n) = (m.D[1][1] * pr - m.D[0][1] * pt) / det;
    sol.b_at(n) = (-m.D[1][0] * pr + m.D[0][0] * pt) / det;
  }
  return sol;
}

FemField::FemField(const Mesh &mesh, VecC nodal)
    : mesh_(&mesh), nodal_(std::move(nodal)), locator_(mesh) {}

FieldSample FemField::eval(Point2 x) const {
  std::array<double, 3> bary;
  int t = locator_.find(x, &bary);
  FieldSample f;
  if (t < 0) return f;
  TriGeom g = tri_geom(*mesh_, t);
  const auto &tv = mesh_->triangles[t];
  for (int i = 0; i < 3; ++i) {
    Complex u1 = nodal_[2 * tv[i]], u2 = nodal_[2 * tv[i] + 1];
    f.value[0] += bary[i] * u1;
    f.value[1] += bary[i] * u2;
    f.gradient[0][0] += u1 * g.grad[i].x1;
    f.gradient[0][1] += u1 * g.grad[i].x2;
    f.gradient[1][0] += u2 * g.grad[i].x1;
    f.gradient[1][1] += u2 * g.grad[i].x2;
  }
  f.divergence = f.gradient[0][0] + f.gradient[1][1];
  return f;
}

double field_h1_norm(const Mesh &mesh, const VecC &nodal) {
  double acc = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    TriGeom g = tri_geom(mesh, t);
    const auto &tv = mesh.triangles[t];
    // |grad|^2 constant, |u|^2 by exact P1 mass
    Complex gx[2] = {0, 0}, gy[2] = {0, 0};
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 2; ++c) {
        gx[c] += nodal[2 * tv[i] + c] * g.grad[i].x1;
        gy[c] += nodal[2 * tv[i] + c] * g.grad[i].x2;
      }
    double g2 = std::norm(gx[0]) + std::norm(gx[1]) + std::norm(gy[0]) + std::norm(gy[1]);
    double v2 = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double mass = (i == j ? 1.0 / 6.0 : 1.0 / 12.0) * g.area;
        for (int c = 0; c < 2; ++c)
          v2 += mass *
                (nodal[2 * tv[i] + c] * std::conj(nodal[2 * tv[j] + c])).real();
      }
    acc += g2 * g.area + v2;
  }
  return std::sqrt(acc);
}

double field_l2_norm(const Mesh &mesh, const VecC &nodal) {
  double acc = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    TriGeom g = tri_geom(mesh, t);
    const auto &tv = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double mass = (i == j ? 1.0 / 6.0 : 1.0 / 12.0) * g.area;
        for (int c = 0; c < 2; ++c)
          acc += mass *
                 (nodal[2 * tv[i] + c] * std::conj(nodal[2 * tv[j] + c])).real();
      }
  }
  return std::sqrt(acc);
}

double h1_error_against_reference(const Mesh &ref_mesh, const VecC &ref_nodal,
                                  const FemField &coarse,
                                  const std::vector<Point2> &exclude, double r_excl) {
  double acc = 0;
  for (int t = 0; t < ref_mesh.triangle_count(); ++t) {
    const auto &tv = ref_mesh.triangles[t];
    Point2 p[3] = {ref_mesh.vertices[tv[0]], ref_mesh.vertices[tv[1]],
                   ref_mesh.vertices[tv[2]]};
    Point2 ctr = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
    bool skip = false;
    for (const Point2 &e : exclude)
      if (norm(ctr - e) < r_excl) {
        skip = true;
        break;
      }
    if (skip) continue;

    TriGeom g = tri_geom(ref_mesh, t);
    Complex rgx[2] = {0, 0}, rgy[2] = {0, 0};
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 2; ++c) {
        rgx[c] += ref_nodal[2 * tv[i] + c] * g.grad[i].x1;
        rgy[c] += ref_nodal[2 * tv[i] + c] * g.grad[i].x2;
      }
    Point2 mid[3] = {0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]), 0.5 * (p[2] + p[0])};
    static const double hat[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
    for (int m = 0; m < 3; ++m) {
      // nudge off shared interface edges so the coarse gradient is taken from
      // the side this reference triangle lies on
      Point2 q{mid[m].x1 + 1e-6 * (ctr.x1 - mid[m].x1),
               mid[m].x2 + 1e-6 * (ctr.x2 - mid[m].x2)};
      FieldSample cf = coarse.eval(q);
      ComplexVec2 rv{0, 0};
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c) rv[c] += hat[i][m] * ref_nodal[2 * tv[i] + c];
      double dv = std::norm(rv[0] - cf.value[0]) + std::norm(rv[1] - cf.value[1]);
      double dg = std::norm(rgx[0] - cf.gradient[0][0]) +
                  std::norm(rgy[0] - cf.gradient[0][1]) +
                  std::norm(rgx[1] - cf.gradient[1][0]) +
                  std::norm(rgy[1] - cf.gradient[1][1]);
      acc += (dv + dg) * g.area / 3.0;
    }
  }
  return std::sqrt(acc);
}

std::pair<std::vector<Point2>, VecC> read_field(std::istream &is) {
  std::vector<Point2> pts;
  std::vector<Complex> vals;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int id;
    double x1, x2, re1, im1, re2, im2;
    if (!(ss >> id >> x1 >> x2 >> re1 >> im1 >> re2 >> im2))
      throw ConfigError("malformed field row: " + line);
    pts.push_back({x1, x2});
    vals.emplace_back(re1, im1);
    vals.emplace_back(re2, im2);
  }
  VecC nodal(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) nodal[i] = vals[i];
  return {std::move(pts), std::move(nodal)};
}

void write_field(std::ostream &os, const Mesh &mesh, const VecC &nodal) {
  os << std::setprecision(17);
  os << "# vertex_id x1 x2 Re_u1 Im_u1 Re_u2 Im_u2\n";
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    Complex u1 = nodal[2 * i], u2 = nodal[2 * i + 1];
    os << i << " " << mesh.vertices[i].x1 << " " << mesh.vertices[i].x2 << " "
       << u1.real() << " " << u1.imag() << " " << u2.real() << " " << u2.imag()
       << "\n";
  }
}

} // namespace escat
