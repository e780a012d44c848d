#include <doctest.h>

#include <map>
#include <set>

#include "escat/fem.hpp"

using namespace escat;

namespace {

SimplePolygon square(double half, Point2 center = {0, 0}) {
  SimplePolygon p;
  p.vertices = {{center.x1 - half, center.x2 - half},
                {center.x1 + half, center.x2 - half},
                {center.x1 + half, center.x2 + half},
                {center.x1 - half, center.x2 + half}};
  return p;
}

const LameParameters kLame{1.0, 1.0};

double interface_length(const Mesh &mesh, int id) {
  double L = 0;
  for (const auto &e : mesh.interface_edges.at(id))
    L += norm(mesh.vertices[e[1]] - mesh.vertices[e[0]]);
  return L;
}

} // namespace

TEST_CASE("mesh conformity and refinement") {
  Partition part = make_partition_nest({square(0.5)});
  Mesh mesh = generate_mesh(part, 3.0, 0.1);

  // every interface edge is a mesh edge (generate_mesh asserts); the edge
  // cover has the right total length
  CHECK(interface_length(mesh, 1) == doctest::Approx(4.0).epsilon(1e-12));

  // interface vertices lie exactly on the square boundary
  std::set<int> iface_verts;
  for (const auto &e : mesh.interface_edges.at(1)) {
    iface_verts.insert(e[0]);
    iface_verts.insert(e[1]);
  }
  for (int v : iface_verts)
    CHECK(part.nest.layers[0].distance_to_boundary(mesh.vertices[v]) < 1e-12);

  // halving h roughly quadruples the triangle count
  Mesh fine = generate_mesh(part, 3.0, 0.05);
  double ratio = static_cast<double>(fine.triangle_count()) / mesh.triangle_count();
  CHECK(ratio > 4.0 * 0.7);
  CHECK(ratio < 4.0 * 1.3);

  // region areas match the geometry
  double a_in = 0, a_out = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    (mesh.region[t] == 1 ? a_in : a_out) += mesh.triangle_area(t);
  CHECK(a_in == doctest::Approx(1.0).epsilon(1e-10));
  // annulus area vs polygonal circle approximation: within O(h^2)
  CHECK(a_out == doctest::Approx(M_PI * 9.0 - 1.0).epsilon(1e-3));

  // corner vertices are mesh vertices at the polygon corners
  REQUIRE(mesh.corner_vertices.size() == 4);
  for (int cv : mesh.corner_vertices) {
    Point2 p = mesh.vertices[cv];
    CHECK(std::min({norm(p - Point2{-0.5, -0.5}), norm(p - Point2{0.5, -0.5}),
                    norm(p - Point2{0.5, 0.5}), norm(p - Point2{-0.5, 0.5})}) < 1e-14);
  }

  CHECK_THROWS_AS(generate_mesh(part, 0.5 * std::sqrt(2.0), 0.1), GeometryOutsideDisk);
}

TEST_CASE("geometric corner grading shows in the interface subdivision") {
  Partition part = make_partition_nest({square(0.5)});
  double h = 0.1, g = 0.5;
  Mesh mesh = generate_mesh(part, 3.0, h, g);
  // shortest interface edge ~ g^3 h, attached to a corner vertex
  double shortest = 1e300;
  for (const auto &e : mesh.interface_edges.at(1))
    shortest = std::min(shortest, norm(mesh.vertices[e[1]] - mesh.vertices[e[0]]));
  CHECK(shortest <= g * g * g * h * 1.01);
  CHECK(shortest >= g * g * g * h * 0.5);
}

TEST_CASE("nested partition mesh: both interfaces conform") {
  Partition part = make_partition_nest({square(0.5), square(0.25)});
  Mesh mesh = generate_mesh(part, 1.2, 0.08);
  CHECK(interface_length(mesh, 1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(interface_length(mesh, 2) == doctest::Approx(2.0).epsilon(1e-12));
  double a2 = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (mesh.region[t] == 2) a2 += mesh.triangle_area(t);
  CHECK(a2 == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("cell partition mesh: shared edge counted once") {
  SimplePolygon t1, t2;
  t1.vertices = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}};
  t2.vertices = {{-0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  Partition part = make_partition_cell({t1, t2});
  Mesh mesh = generate_mesh(part, 1.5, 0.1);
  // one interface id 0 holding outer square + diagonal once
  CHECK(interface_length(mesh, 0) ==
        doctest::Approx(4.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("assembly: plane-wave interior residual decreases at order >= 0.8") {
  Partition part = make_partition_nest({square(0.5)});
  MediumConfig medium = make_medium_config(part, {1.0}, {0.0});
  double omega = 2.0, R = 1.5;
  Wavenumbers k = wavenumbers(kLame, omega);
  PlaneWave wave{PlaneWave::Compressional, normalized({1.0, 0.3}), k, kLame};

  auto residual_norm = [&](double h) {
    Mesh mesh = generate_mesh(part, R, h);
    DtnOperator dtn = build_dtn(kLame, omega, R, default_dtn_truncation(k.k_s * R));
    AssembledSystem sys = assemble(mesh, medium, kLame, omega, dtn);
    VecC uI(2 * mesh.vertex_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      ComplexVec2 v = plane_wave_eval(wave, mesh.vertices[i]).value;
      uI[2 * i] = v[0];
      uI[2 * i + 1] = v[1];
    }
    VecC r = sys.A * uI;
    // interior rows only: skip boundary vertices and their neighbours
    std::set<int> skip(mesh.boundary_vertices.begin(), mesh.boundary_vertices.end());
    std::set<int> ring = skip;
    for (const auto &tv : mesh.triangles)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (skip.count(tv[a])) ring.insert(tv[b]);
    double acc = 0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      if (ring.count(i)) continue;
      acc += std::norm(r[2 * i]) + std::norm(r[2 * i + 1]);
    }
    return std::sqrt(acc);
  };

  double e1 = residual_norm(0.12), e2 = residual_norm(0.06);
  double order = std::log2(e1 / e2);
  CHECK(order >= 0.8);
}

TEST_CASE("assembly: eta term is local to interface vertices") {
  Partition part = make_partition_nest({square(0.5)});
  double omega = 1.0, R = 1.2;
  Mesh mesh = generate_mesh(part, R, 0.15);
  DtnOperator dtn = build_dtn(kLame, omega, R, 10);

  MediumConfig m0 = make_medium_config(part, {2.0}, {0.0});
  MediumConfig m1 = make_medium_config(part, {2.0}, {-0.3});
  SpMatC A0 = assemble(mesh, m0, kLame, omega, dtn).A;
  SpMatC A1 = assemble(mesh, m1, kLame, omega, dtn).A;
  SpMatC D = A1 - A0;

  std::set<int> iface_verts;
  for (const auto &e : mesh.interface_edges.at(1)) {
    iface_verts.insert(e[0]);
    iface_verts.insert(e[1]);
  }
  for (int col = 0; col < D.outerSize(); ++col)
    for (SpMatC::InnerIterator it(D, col); it; ++it)
      if (std::abs(it.value()) > 1e-14) {
        CHECK(iface_verts.count(it.row() / 2));
        CHECK(iface_verts.count(it.col() / 2));
      }
}

TEST_CASE("rhs: trivial medium gives zero load, q support, omega scaling") {
  Partition part = make_partition_nest({square(0.5), square(0.25)});
  Mesh mesh = generate_mesh(part, 1.2, 0.1);
  Wavenumbers k1 = wavenumbers(kLame, 1.0), k2 = wavenumbers(kLame, 2.0);
  PlaneWave w1{PlaneWave::Compressional, {1, 0}, k1, kLame};
  PlaneWave w2{PlaneWave::Compressional, {1, 0}, k2, kLame};

  MediumConfig trivial = make_medium_config(part, {1.0, 1.0}, {0.0, 0.0});
  CHECK(rhs_from_incident(mesh, trivial, kLame, w1).norm() == 0.0);

  // q != 1 only in the inner square: load supported on inner-region vertices
  MediumConfig inner_q = make_medium_config(part, {1.0, 2.0}, {0.0, 0.0});
  VecC b = rhs_from_incident(mesh, inner_q, kLame, w1);
  std::set<int> inner_verts;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (mesh.region[t] == 2)
      for (int a = 0; a < 3; ++a) inner_verts.insert(mesh.triangles[t][a]);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (!inner_verts.count(i)) {
      CHECK(std::abs(b[2 * i]) == 0.0);
      CHECK(std::abs(b[2 * i + 1]) == 0.0);
    }

  // doubling omega quadruples the volume load for fixed q (phase changes too,
  // so compare the assembled magnitude of the omega^2 (1-q) factor directly):
  // use a wave with identical phase by evaluating at omega and checking the
  // ratio of loads assembled from the same wave values
  VecC b1 = rhs_from_incident(mesh, inner_q, kLame, w1);
  PlaneWave w2_same_phase = w1;
  w2_same_phase.k.omega = 2.0; // omega enters the load only through omega^2
  VecC b4 = rhs_from_incident(mesh, inner_q, kLame, w2_same_phase);
  CHECK((b4 - 4.0 * b1).norm() < 1e-12 * b4.norm());
  (void)w2;
}

TEST_CASE("solve: zero rhs, linearity, determinism under vertex relabeling") {
  Partition part = make_partition_nest({square(0.5)});
  MediumConfig medium = make_medium_config(part, {2.0}, {-0.3});
  double omega = 2.0, R = 1.1;
  Wavenumbers k = wavenumbers(kLame, omega);
  Mesh mesh = generate_mesh(part, R, 0.1);
  DtnOperator dtn = build_dtn(kLame, omega, R, default_dtn_truncation(k.k_s * R));
  AssembledSystem sys = assemble(mesh, medium, kLame, omega, dtn);

  ScatteredField zero = solve(sys);
  CHECK(zero.nodal.norm() == 0.0);

  PlaneWave wave{PlaneWave::Compressional, {1, 0}, k, kLame};
  sys.b = rhs_from_incident(mesh, medium, kLame, wave);
  ScatteredField u = solve(sys);
  CHECK(u.info.residual_rel <= 1e-10);

  AssembledSystem sys3 = sys;
  sys3.b = 3.0 * sys.b;
  ScatteredField u3 = solve(sys3);
  CHECK((u3.nodal - 3.0 * u.nodal).norm() < 1e-9 * u3.nodal.norm());

  // relabel vertices (reverse order): same field at matched points
  Mesh rev = mesh;
  int n = mesh.vertex_count();
  auto rl = [&](int v) { return n - 1 - v; };
  for (int i = 0; i < n; ++i) rev.vertices[rl(i)] = mesh.vertices[i];
  for (auto &tv : rev.triangles)
    for (int a = 0; a < 3; ++a) tv[a] = rl(tv[a]);
  for (auto &[id, edges] : rev.interface_edges)
    for (auto &e : edges) e = {rl(e[0]), rl(e[1])};
  for (auto &e : rev.boundary_edges) e = {rl(e[0]), rl(e[1])};
  for (auto &v : rev.boundary_vertices) v = rl(v);
  for (auto &v : rev.corner_vertices) v = rl(v);

  AssembledSystem rsys = assemble(rev, medium, kLame, omega, dtn);
  rsys.b = rhs_from_incident(rev, medium, kLame, wave);
  ScatteredField ru = solve(rsys);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(ru.nodal[2 * rl(i)] - u.nodal[2 * i]));
    worst = std::max(worst, std::abs(ru.nodal[2 * rl(i) + 1] - u.nodal[2 * i + 1]));
  }
  CHECK(worst < 1e-9 * u.nodal.norm());
}

TEST_CASE("assembled system is complex-symmetric (discrete reciprocity)") {
  Partition part = make_partition_nest({square(0.5)});
  MediumConfig medium = make_medium_config(part, {2.0}, {-0.3});
  double omega = 2.0, R = 1.1;
  Mesh mesh = generate_mesh(part, R, 0.15);
  DtnOperator dtn = build_dtn(kLame, omega, R, 12);
  SpMatC A = assemble(mesh, medium, kLame, omega, dtn).A;
  SpMatC D = SpMatC(A.transpose()) - A;
  double worst = 0, scale = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMatC::InnerIterator it(A, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  for (int k = 0; k < D.outerSize(); ++k)
    for (SpMatC::InnerIterator it(D, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  CHECK(worst <= 1e-13 * scale);
  // per-mode reciprocity of the DtN map
  for (int n = 0; n <= 12; ++n) {
    const DtnMode &m = dtn.mode(n);
    CHECK(std::abs(m.G[0][1] + m.G[1][0]) <=
          1e-12 * (std::abs(m.G[0][1]) + std::abs(m.G[1][0]) + 1e-300));
  }
}

TEST_CASE("trivial scatterer: discrete zero and null far field") {
  Partition part = make_partition_nest({square(0.5)});
  MediumConfig medium = make_medium_config(part, {1.0}, {0.0});
  double omega = 2.0, R = 1.1;
  Wavenumbers k = wavenumbers(kLame, omega);
  Mesh mesh = generate_mesh(part, R, 0.1);
  DtnOperator dtn = build_dtn(kLame, omega, R, default_dtn_truncation(k.k_s * R));
  AssembledSystem sys = assemble(mesh, medium, kLame, omega, dtn);
  PlaneWave wave{PlaneWave::Compressional, {1, 0}, k, kLame};
  sys.b = rhs_from_incident(mesh, medium, kLame, wave);
  ScatteredField u = solve(sys);

  double ui_norm = std::sqrt(M_PI) * R; // |u^i| = 1 on B_R
  CHECK(field_l2_norm(mesh, u.nodal) <= 1e-10 * ui_norm);
  RadiatingSolution sol = circle_trace_modes(mesh, u, dtn);
  CHECK(far_field_from_solution(sol, 360).l2_norm() <= 1e-8);
}

TEST_CASE("circle trace modes: synthesize-then-recover round trip") {
  Partition part = make_partition_nest({square(0.3)});
  double omega = 2.0, R = 1.0;
  Wavenumbers k = wavenumbers(kLame, omega);
  Mesh mesh = generate_mesh(part, R, 0.03);
  int N = 6;
  DtnOperator dtn = build_dtn(kLame, omega, R, N);

  RadiatingSolution ref;
  ref.N = N;
  ref.k = k;
  ref.lame = kLame;
  ref.a.assign(2 * N + 1, 0);
  ref.b.assign(2 * N + 1, 0);
  ref.a[N + 2] = Complex(0.8, -0.1); // n = 2
  ref.b[N - 1] = Complex(-0.2, 0.5); // n = -1

  ScatteredField field;
  field.nodal = VecC::Zero(2 * mesh.vertex_count());
  for (int v : mesh.boundary_vertices) {
    FieldSample f = radiating_eval(ref, mesh.vertices[v]);
    field.nodal[2 * v] = f.value[0];
    field.nodal[2 * v + 1] = f.value[1];
  }
  RadiatingSolution rec = circle_trace_modes(mesh, field, dtn);
  for (int n = -N; n <= N; ++n) {
    CHECK(std::abs(rec.a_at(n) - ref.a_at(n)) < 1e-6);
    CHECK(std::abs(rec.b_at(n) - ref.b_at(n)) < 1e-6);
  }

  ScatteredField zero;
  zero.nodal = VecC::Zero(2 * mesh.vertex_count());
  RadiatingSolution zrec = circle_trace_modes(mesh, zero, dtn);
  for (int n = -N; n <= N; ++n) {
    CHECK(std::abs(zrec.a_at(n)) == 0.0);
    CHECK(std::abs(zrec.b_at(n)) == 0.0);
  }
}

TEST_CASE("DtN truncation stability: N and N + 10 agree") {
  Partition part = make_partition_nest({square(0.5)});
  MediumConfig medium = make_medium_config(part, {2.0}, {-0.3});
  double omega = 1.0, R = 1.1;
  Wavenumbers k = wavenumbers(kLame, omega);
  Mesh mesh = generate_mesh(part, R, 0.05);
  PlaneWave wave{PlaneWave::Compressional, {1, 0}, k, kLame};

  auto far = [&](int N) {
    DtnOperator dtn = build_dtn(kLame, omega, R, N);
    AssembledSystem sys = assemble(mesh, medium, kLame, omega, dtn);
    sys.b = rhs_from_incident(mesh, medium, kLame, wave);
    ScatteredField u = solve(sys);
    return far_field_from_solution(circle_trace_modes(mesh, u, dtn), 360);
  };
  int N = default_dtn_truncation(k.k_s * R);
  FarFieldPattern pa = far(N), pb = far(N + 10);
  CHECK(std::fabs(pa.l2_norm() - pb.l2_norm()) <= 1e-6 * pa.l2_norm());
}
