#include "escat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

namespace escat {

namespace {

// ---------------------------------------------------------------------------
// Bowyer-Watson Delaunay with walk-based location and cavity flooding.

struct Tri {
  int v[3];
  int adj[3]; // adj[e] across edge (v[e], v[(e+1)%3]); -1 on hull
  bool alive = true;
};

struct Delaunay {
  std::vector<Point2> pts;
  std::vector<Tri> tris;
  int last_alive = 0;

  static double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

  bool in_circumcircle(const Tri &t, Point2 p) const {
    Point2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
    double ax = a.x1 - p.x1, ay = a.x2 - p.x2;
    double bx = b.x1 - p.x1, by = b.x2 - p.x2;
    double cx = c.x1 - p.x1, cy = c.x2 - p.x2;
    double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                 (bx * bx + by * by) * (ax * cy - cx * ay) +
                 (cx * cx + cy * cy) * (ax * by - bx * ay);
    return det > 0;
  }

  void init(Point2 lo, Point2 hi) {
    double span = std::max(hi.x1 - lo.x1, hi.x2 - lo.x2);
    Point2 mid = 0.5 * (lo + hi);
    double m = 20.0 * span + 1.0;
    pts.push_back({mid.x1 - m, mid.x2 - m});
    pts.push_back({mid.x1 + m, mid.x2 - m});
    pts.push_back({mid.x1, mid.x2 + m});
    tris.push_back({{0, 1, 2}, {-1, -1, -1}, true});
  }

  int locate(Point2 p) const {
    int t = last_alive;
    if (!tris[t].alive)
      for (t = static_cast<int>(tris.size()) - 1; t >= 0 && !tris[t].alive; --t) {}
    for (int step = 0; step < static_cast<int>(tris.size()) + 8; ++step) {
      const Tri &tr = tris[t];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        Point2 a = pts[tr.v[e]], b = pts[tr.v[(e + 1) % 3]];
        if (orient(a, b, p) < -1e-14 * (norm(b - a) + 1.0)) {
          next = tr.adj[e];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    return t;
  }

  void insert(int pi) {
    Point2 p = pts[pi];
    int seed = locate(p);

    // flood the cavity of triangles whose circumcircle contains p
    std::vector<int> cavity;
    std::vector<int> stack = {seed};
    std::set<int> in_cavity = {seed};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      cavity.push_back(t);
      for (int e = 0; e < 3; ++e) {
        int nb = tris[t].adj[e];
        if (nb < 0 || in_cavity.count(nb)) continue;
        if (in_circumcircle(tris[nb], p)) {
          in_cavity.insert(nb);
          stack.push_back(nb);
        }
      }
    }

    // boundary edges of the cavity with their outside neighbors
    struct BEdge {
      int a, b, outside;
    };
    std::vector<BEdge> boundary;
    for (int t : cavity)
      for (int e = 0; e < 3; ++e) {
        int nb = tris[t].adj[e];
        if (nb >= 0 && in_cavity.count(nb)) continue;
        boundary.push_back({tris[t].v[e], tris[t].v[(e + 1) % 3], nb});
      }
    for (int t : cavity) tris[t].alive = false;

    // new triangles (p, a, b); link around p by matching shared vertices
    std::map<std::pair<int, int>, int> open_edge; // (from, to) at p -> triangle
    for (const BEdge &be : boundary) {
      Tri nt;
      nt.v[0] = pi;
      nt.v[1] = be.a;
      nt.v[2] = be.b;
      nt.adj[0] = -1; // (p, a)
      nt.adj[1] = be.outside;
      nt.adj[2] = -1; // (b, p)
      int id = static_cast<int>(tris.size());
      tris.push_back(nt);
      if (be.outside >= 0) {
        Tri &out = tris[be.outside];
        for (int e = 0; e < 3; ++e)
          if ((out.v[e] == be.b && out.v[(e + 1) % 3] == be.a)) out.adj[e] = id;
      }
      auto it = open_edge.find({be.a, pi});
      if (it != open_edge.end()) {
        tris[id].adj[0] = it->second;
        tris[it->second].adj[2] = id;
        open_edge.erase(it);
      } else {
        open_edge[{pi, be.a}] = id;
      }
      it = open_edge.find({pi, be.b});
      if (it != open_edge.end()) {
        tris[id].adj[2] = it->second;
        tris[it->second].adj[0] = id;
        open_edge.erase(it);
      } else {
        open_edge[{be.b, pi}] = id;
      }
      last_alive = id;
    }
  }

  int find_edge(int a, int b, int *edge_index = nullptr) const {
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      for (int e = 0; e < 3; ++e)
        if (tris[t].v[e] == a && tris[t].v[(e + 1) % 3] == b) {
          if (edge_index) *edge_index = e;
          return t;
        }
    }
    return -1;
  }
};

// Flip the edge shared by triangles t and its neighbor across edge e.
bool flip_edge(Delaunay &d, int t, int e) {
  int nb = d.tris[t].adj[e];
  if (nb < 0) return false;
  Tri &T0 = d.tris[t];
  Tri &T1 = d.tris[nb];
  int a = T0.v[e], b = T0.v[(e + 1) % 3], c = T0.v[(e + 2) % 3];
  int e1 = -1;
  for (int k = 0; k < 3; ++k)
    if (T1.v[k] == b && T1.v[(k + 1) % 3] == a) e1 = k;
  if (e1 < 0) return false;
  int dvtx = T1.v[(e1 + 2) % 3];
  // quad a, d, b, c must be strictly convex to flip (a,b) -> (c,d)
  if (Delaunay::orient(d.pts[c], d.pts[dvtx], d.pts[a]) <= 0) return false;
  if (Delaunay::orient(d.pts[dvtx], d.pts[c], d.pts[b]) <= 0) return false;

  int A0 = T0.adj[(e + 1) % 3], A1 = T0.adj[(e + 2) % 3];
  int B0 = T1.adj[(e1 + 1) % 3], B1 = T1.adj[(e1 + 2) % 3];
  // new triangles: (c, a, d) replaces T0, (d, b, c) replaces T1
  T0.v[0] = c; T0.v[1] = a; T0.v[2] = dvtx;
  T1.v[0] = dvtx; T1.v[1] = b; T1.v[2] = c;
  T0.adj[0] = A1; T0.adj[1] = B0; T0.adj[2] = nb;
  T1.adj[0] = B1; T1.adj[1] = A0; T1.adj[2] = t;
  auto relink = [&](int tri, int old_nb, int new_nb) {
    if (tri < 0) return;
    for (int k = 0; k < 3; ++k)
      if (d.tris[tri].adj[k] == old_nb) d.tris[tri].adj[k] = new_nb;
  };
  relink(A0, t, nb);
  relink(B0, nb, t);
  return true;
}

// Segment intersection test for edge recovery.
bool crosses(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = Delaunay::orient;
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) &&
         std::fabs(o1) > 1e-16 && std::fabs(o2) > 1e-16;
}

// Make (va, vb) an edge of the triangulation by flipping crossing edges.
bool recover_edge(Delaunay &d, int va, int vb) {
  for (int round = 0; round < 64; ++round) {
    if (d.find_edge(va, vb) >= 0 || d.find_edge(vb, va) >= 0) return true;
    bool flipped = false;
    for (int t = 0; t < static_cast<int>(d.tris.size()) && !flipped; ++t) {
      if (!d.tris[t].alive) continue;
      for (int e = 0; e < 3; ++e) {
        int p = d.tris[t].v[e], q = d.tris[t].v[(e + 1) % 3];
        if (p == va || p == vb || q == va || q == vb) continue;
        if (crosses(d.pts[va], d.pts[vb], d.pts[p], d.pts[q])) {
          if (flip_edge(d, t, e)) {
            flipped = true;
            break;
          }
        }
      }
    }
    if (!flipped) return false;
  }
  return false;
}

// Graded subdivision of [0, L]: 3 geometric rings (ratio g) at both ends,
// approximately uniform spacing h in between.
std::vector<double> graded_subdivision(double L, double h, double g) {
  h = std::min(h, L / 2);
  double r1 = g * g * g * h, r2 = r1 + g * g * h, r3 = r2 + g * h;
  std::vector<double> left;
  if (L > 2.0 * r3 + 0.5 * h) {
    left = {0.0, r1, r2, r3};
    double mid_lo = r3, mid_hi = L - r3;
    int n_mid = std::max(1, static_cast<int>(std::ceil((mid_hi - mid_lo) / h)));
    for (int i = 1; i < n_mid; ++i) left.push_back(mid_lo + (mid_hi - mid_lo) * i / n_mid);
    left.push_back(mid_hi);
    left.push_back(L - r2);
    left.push_back(L - r1);
    left.push_back(L);
  } else {
    int n = std::max(4, static_cast<int>(std::ceil(L / (g * g * h))));
    for (int i = 0; i <= n; ++i) left.push_back(L * i / n);
  }
  return left;
}

uint64_t mix_hash(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

} // namespace

double Mesh::triangle_area(int t) const {
  Point2 a = vertices[triangles[t][0]], b = vertices[triangles[t][1]],
         c = vertices[triangles[t][2]];
  return 0.5 * std::fabs(cross(b - a, c - a));
}

Mesh generate_mesh(const Partition &partition, double R, double h_mesh,
                   double corner_grading) {
  if (!(h_mesh > 0)) throw ConfigError("h_mesh must be positive");
  if (!(corner_grading > 0) || !(corner_grading > 0.05) || corner_grading > 1.0)
    throw ConfigError("corner_grading must lie in (0.05, 1]");
  double margin = std::max(2.0 * h_mesh, 0.05 * R);
  for (const auto &poly : partition.polygons())
    for (const Point2 &v : poly.vertices)
      if (norm(v) >= R - 1e-12)
        throw GeometryOutsideDisk("vertex at radius " + std::to_string(norm(v)) +
                                  " vs R = " + std::to_string(R));
  (void)margin;

  Delaunay d;
  d.init({-R, -R}, {R, R});
  const int base = 3; // super-triangle vertices

  struct Constraint {
    int interface_id;
    std::vector<int> chain; // mesh point indices along the polyline
  };
  std::vector<Constraint> constraints;

  struct Seg {
    Point2 a, b;
    double len;
  };
  std::vector<Seg> protect;

  std::vector<Point2> pending;       // points to insert (constraints first)
  std::vector<int> corner_point_ids; // indices into pending (+base later)

  // cells traverse shared edges twice (in opposite directions); snap
  // coincident constraint points to a single index
  double snap = 1e-7 * std::max(h_mesh, 1e-12);
  std::map<std::pair<long long, long long>, int> snap_map;
  auto add_point = [&](Point2 p) {
    long long ix = llround(p.x1 / snap), iy = llround(p.x2 / snap);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = snap_map.find({ix + dx, iy + dy});
        if (it != snap_map.end() && norm(pending[it->second] - p) < 2 * snap)
          return it->second;
      }
    int id = static_cast<int>(pending.size());
    pending.push_back(p);
    snap_map[{ix, iy}] = id;
    return id;
  };

  const auto &polys = partition.polygons();
  for (size_t pi = 0; pi < polys.size(); ++pi) {
    const SimplePolygon &poly = polys[pi];
    int n = static_cast<int>(poly.vertices.size());
    Constraint c;
    c.interface_id = partition.kind == Partition::Nest ? static_cast<int>(pi) + 1 : 0;
    std::vector<int> chain;
    for (int e = 0; e < n; ++e) {
      Point2 a = poly.vertices[e], b = poly.vertices[(e + 1) % n];
      double L = norm(b - a);
      std::vector<double> ts = graded_subdivision(L, h_mesh, corner_grading);
      if (e == 0) {
        corner_point_ids.push_back(add_point(a));
        chain.push_back(corner_point_ids.back());
      }
      for (size_t k = 1; k < ts.size(); ++k) {
        Point2 p = a + (ts[k] / L) * (b - a);
        if (k == ts.size() - 1 && e == n - 1) {
          chain.push_back(chain.front()); // closes the loop
        } else if (k == ts.size() - 1) {
          corner_point_ids.push_back(add_point(p));
          chain.push_back(corner_point_ids.back());
        } else {
          chain.push_back(add_point(p));
        }
      }
      for (size_t k = 0; k + 1 < ts.size(); ++k) {
        Point2 p = a + (ts[k] / L) * (b - a);
        Point2 q = a + (ts[k + 1] / L) * (b - a);
        protect.push_back({p, q, norm(q - p)});
      }
    }
    c.chain = chain;
    constraints.push_back(std::move(c));
  }

  // circle boundary, uniform in angle
  int n_circle = std::max(16, static_cast<int>(std::ceil(2.0 * M_PI * R / h_mesh)));
  int circle_start = static_cast<int>(pending.size());
  for (int i = 0; i < n_circle; ++i) {
    double th = 2.0 * M_PI * i / n_circle;
    pending.push_back({R * std::cos(th), R * std::sin(th)});
  }
  double circle_spacing = 2.0 * M_PI * R / n_circle;

  // interior lattice (hex offset), filtered and deterministically jittered
  std::vector<Point2> lattice;
  double hy = h_mesh * std::sqrt(3.0) / 2.0;
  int jmax = static_cast<int>(std::ceil(R / hy)) + 1;
  for (int j = -jmax; j <= jmax; ++j) {
    double y = j * hy;
    double x0 = (j % 2 == 0) ? 0.0 : 0.5 * h_mesh;
    int imax = static_cast<int>(std::ceil(R / h_mesh)) + 1;
    for (int i = -imax; i <= imax; ++i) {
      double x = x0 + i * h_mesh;
      uint64_t hsh = mix_hash((static_cast<uint64_t>(i + imax) << 32) ^
                              static_cast<uint64_t>(j + jmax));
      double jx = ((hsh & 0xffff) / 65535.0 - 0.5) * 0.12 * h_mesh;
      double jy = (((hsh >> 16) & 0xffff) / 65535.0 - 0.5) * 0.12 * h_mesh;
      Point2 p{x + jx, y + jy};
      if (norm(p) > R - 0.75 * circle_spacing) continue;
      bool ok = true;
      for (const Seg &s : protect) {
        if (distance_point_segment(p, s.a, s.b) < 0.75 * s.len) {
          ok = false;
          break;
        }
      }
      if (ok) lattice.push_back(p);
    }
  }

  for (const Point2 &p : pending) d.pts.push_back(p);
  for (const Point2 &p : lattice) d.pts.push_back(p);
  for (int i = base; i < static_cast<int>(d.pts.size()); ++i) d.insert(i);

  // recover any constraint edge the Delaunay pass missed
  for (const Constraint &c : constraints)
    for (size_t k = 0; k + 1 < c.chain.size(); ++k) {
      int a = c.chain[k] + base, b = c.chain[k + 1] + base;
      if (d.find_edge(a, b) < 0 && d.find_edge(b, a) < 0)
        if (!recover_edge(d, a, b))
          throw MeshingFailed("could not recover interface edge");
    }

  // strip super-triangle, compact vertices
  Mesh mesh;
  mesh.R = R;
  mesh.h_mesh = h_mesh;
  std::vector<int> remap(d.pts.size(), -1);
  for (int i = base; i < static_cast<int>(d.pts.size()); ++i) {
    remap[i] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(d.pts[i]);
  }
  for (const Tri &t : d.tris) {
    if (!t.alive) continue;
    if (t.v[0] < base || t.v[1] < base || t.v[2] < base) continue;
    std::array<int, 3> tv{remap[t.v[0]], remap[t.v[1]], remap[t.v[2]]};
    Point2 a = mesh.vertices[tv[0]], b = mesh.vertices[tv[1]], c = mesh.vertices[tv[2]];
    if (Delaunay::orient(a, b, c) <= 0) std::swap(tv[1], tv[2]);
    mesh.triangles.push_back(tv);
  }

  // region labels from centroids
  mesh.region.resize(mesh.triangles.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto &tv = mesh.triangles[t];
    Point2 ctr = (1.0 / 3.0) *
                 (mesh.vertices[tv[0]] + mesh.vertices[tv[1]] + mesh.vertices[tv[2]]);
    RegionLabel lab = locate(partition, ctr);
    if (lab.kind == RegionLabel::OnInterface) {
      Point2 nudge = 0.75 * ctr + 0.25 * mesh.vertices[tv[0]];
      lab = locate(partition, nudge);
    }
    int id = 0;
    if (lab.kind == RegionLabel::Shell) id = lab.index;
    else if (lab.kind == RegionLabel::Cell) id = lab.index + 1;
    mesh.region[t] = id;
  }

  // interface edge lists (unique, undirected)
  std::set<std::array<int, 2>> edge_set;
  for (const Constraint &c : constraints) {
    auto &list = mesh.interface_edges[c.interface_id];
    for (size_t k = 0; k + 1 < c.chain.size(); ++k) {
      int a = remap[c.chain[k] + base], b = remap[c.chain[k + 1] + base];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      if (edge_set.insert(key).second) list.push_back(key);
    }
  }

  // circle boundary ring
  for (int i = 0; i < n_circle; ++i)
    mesh.boundary_vertices.push_back(remap[circle_start + i + base]);
  for (int i = 0; i < n_circle; ++i)
    mesh.boundary_edges.push_back(
        {mesh.boundary_vertices[i], mesh.boundary_vertices[(i + 1) % n_circle]});

  for (int cid : corner_point_ids) mesh.corner_vertices.push_back(remap[cid + base]);

  // conformity check: every interface edge must exist in some triangle
  std::set<std::pair<int, int>> mesh_edges;
  for (const auto &tv : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = tv[e], b = tv[(e + 1) % 3];
      mesh_edges.insert({std::min(a, b), std::max(a, b)});
    }
  for (const auto &[id, list] : mesh.interface_edges)
    for (const auto &ed : list)
      if (!mesh_edges.count({ed[0], ed[1]}))
        throw MeshingFailed("interface " + std::to_string(id) + " not conforming");

  return mesh;
}

MeshLocator::MeshLocator(const Mesh &mesh) : mesh_(mesh) {
  Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const Point2 &p : mesh.vertices) {
    lo.x1 = std::min(lo.x1, p.x1);
    lo.x2 = std::min(lo.x2, p.x2);
    hi.x1 = std::max(hi.x1, p.x1);
    hi.x2 = std::max(hi.x2, p.x2);
  }
  lo_ = lo;
  cell_ = std::max(2.0 * mesh.h_mesh, 1e-12);
  nx_ = std::max(1, static_cast<int>((hi.x1 - lo.x1) / cell_) + 1);
  ny_ = std::max(1, static_cast<int>((hi.x2 - lo.x2) / cell_) + 1);
  bins_.resize(static_cast<size_t>(nx_) * ny_);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    Point2 a = mesh.vertices[mesh.triangles[t][0]];
    Point2 b = mesh.vertices[mesh.triangles[t][1]];
    Point2 c = mesh.vertices[mesh.triangles[t][2]];
    double x0 = std::min({a.x1, b.x1, c.x1}), x1 = std::max({a.x1, b.x1, c.x1});
    double y0 = std::min({a.x2, b.x2, c.x2}), y1 = std::max({a.x2, b.x2, c.x2});
    int i0 = std::clamp(static_cast<int>((x0 - lo_.x1) / cell_), 0, nx_ - 1);
    int i1 = std::clamp(static_cast<int>((x1 - lo_.x1) / cell_), 0, nx_ - 1);
    int j0 = std::clamp(static_cast<int>((y0 - lo_.x2) / cell_), 0, ny_ - 1);
    int j1 = std::clamp(static_cast<int>((y1 - lo_.x2) / cell_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        bins_[static_cast<size_t>(j) * nx_ + i].push_back(t);
  }
}

int MeshLocator::find(Point2 p, std::array<double, 3> *bary) const {
  int i = std::clamp(static_cast<int>((p.x1 - lo_.x1) / cell_), 0, nx_ - 1);
  int j = std::clamp(static_cast<int>((p.x2 - lo_.x2) / cell_), 0, ny_ - 1);
  int best = -1;
  double best_min = -1e300;
  std::array<double, 3> best_bary{};
  for (int t : bins_[static_cast<size_t>(j) * nx_ + i]) {
    Point2 a = mesh_.vertices[mesh_.triangles[t][0]];
    Point2 b = mesh_.vertices[mesh_.triangles[t][1]];
    Point2 c = mesh_.vertices[mesh_.triangles[t][2]];
    double area = cross(b - a, c - a);
    double l0 = cross(b - p, c - p) / area;
    double l1 = cross(c - p, a - p) / area;
    double l2 = 1.0 - l0 - l1;
    double mn = std::min({l0, l1, l2});
    if (mn >= -1e-10) {
      if (bary) *bary = {l0, l1, l2};
      return t;
    }
    if (mn > best_min) {
      best_min = mn;
      best = t;
      best_bary = {l0, l1, l2};
    }
  }
  // points marginally outside the triangulated hull (polygonal circle): allow
  // a slightly extrapolated P1 read from the nearest candidate
  if (best >= 0 && best_min >= -0.25) {
    if (bary) *bary = best_bary;
    return best;
  }
  return -1;
}

Mesh read_mesh(std::istream &is) {
  Mesh mesh;
  int nv = 0, dim = 0, na = 0, nm = 0;
  if (!(is >> nv >> dim >> na >> nm)) throw ConfigError("malformed mesh header");
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) {
    int id;
    if (!(is >> id >> mesh.vertices[i].x1 >> mesh.vertices[i].x2))
      throw ConfigError("malformed mesh vertex row");
  }
  int nt = 0, per = 0, nlab = 0;
  if (!(is >> nt >> per >> nlab)) throw ConfigError("malformed element header");
  mesh.triangles.resize(nt);
  mesh.region.resize(nt);
  for (int t = 0; t < nt; ++t) {
    int id;
    if (!(is >> id >> mesh.triangles[t][0] >> mesh.triangles[t][1] >>
          mesh.triangles[t][2] >> mesh.region[t]))
      throw ConfigError("malformed mesh element row");
  }
  return mesh;
}

void write_mesh(std::ostream &os, const Mesh &mesh) {
  os << std::setprecision(17);
  os << mesh.vertex_count() << " 2 0 0\n";
  for (int i = 0; i < mesh.vertex_count(); ++i)
    os << i << " " << mesh.vertices[i].x1 << " " << mesh.vertices[i].x2 << "\n";
  os << mesh.triangle_count() << " 3 1\n";
  for (int t = 0; t < mesh.triangle_count(); ++t)
    os << t << " " << mesh.triangles[t][0] << " " << mesh.triangles[t][1] << " "
       << mesh.triangles[t][2] << " " << mesh.region[t] << "\n";
}

} // namespace escat
