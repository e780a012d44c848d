#include "escat/geometry.hpp"

#include <algorithm>
#include <limits>

namespace escat {

namespace {

bool segments_properly_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) {
    double v = cross(q - p, r - p);
    double scale = std::max({norm(q - p), norm(r - p), 1e-30});
    if (std::fabs(v) < 1e-14 * scale * scale) return 0;
    return v > 0 ? 1 : -1;
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// Collinear segments sharing more than a point.
bool segments_overlap(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  Point2 t = b - a;
  double len = norm(t);
  if (len < tol) return false;
  t = normalized(t);
  if (std::fabs(cross(t, c - a)) > tol || std::fabs(cross(t, d - a)) > tol)
    return false;
  double s1 = dot(t, c - a), s2 = dot(t, d - a);
  double lo = std::min(s1, s2), hi = std::max(s1, s2);
  return std::min(hi, len) - std::max(lo, 0.0) > tol;
}

} // namespace

double SimplePolygon::signed_area() const {
  double a = 0;
  int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) a += cross(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * a;
}

double SimplePolygon::diameter() const {
  double d = 0;
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      d = std::max(d, norm(vertices[i] - vertices[j]));
  return d;
}

bool SimplePolygon::is_convex() const {
  int n = static_cast<int>(vertices.size());
  if (n < 3) return false;
  double scale = diameter();
  for (int i = 0; i < n; ++i) {
    Point2 a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
    if (cross(b - a, c - b) <= 1e-12 * scale * scale) return false;
  }
  return true;
}

bool SimplePolygon::is_simple() const {
  int n = static_cast<int>(vertices.size());
  if (n < 3) return false;
  double scale = diameter();
  for (int i = 0; i < n; ++i) {
    Point2 a = vertices[i], b = vertices[(i + 1) % n];
    if (norm(b - a) < 1e-14 * scale) return false; // repeated vertex
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      Point2 c = vertices[j], d = vertices[(j + 1) % n];
      if (segments_properly_intersect(a, b, c, d)) return false;
      if (segments_overlap(a, b, c, d, 1e-12 * scale)) return false;
    }
  }
  return true;
}

bool SimplePolygon::contains(Point2 p) const {
  // winding number; boundary points are not interior
  int n = static_cast<int>(vertices.size());
  double scale = std::max(diameter(), 1e-30);
  int winding = 0;
  for (int i = 0; i < n; ++i) {
    Point2 a = vertices[i], b = vertices[(i + 1) % n];
    if (distance_point_segment(p, a, b) < 1e-13 * scale) return false;
    if (a.x2 <= p.x2) {
      if (b.x2 > p.x2 && cross(b - a, p - a) > 0) ++winding;
    } else {
      if (b.x2 <= p.x2 && cross(b - a, p - a) < 0) --winding;
    }
  }
  return winding != 0;
}

double SimplePolygon::distance_to_boundary(Point2 p) const {
  double d = std::numeric_limits<double>::infinity();
  int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i)
    d = std::min(d, distance_point_segment(p, vertices[i], vertices[(i + 1) % n]));
  return d;
}

double distance_point_segment(Point2 p, Point2 a, Point2 b) {
  Point2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0) return norm(p - a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double interior_angle(const SimplePolygon &poly, int i) {
  int n = static_cast<int>(poly.vertices.size());
  Point2 v = poly.vertices[i];
  Point2 nxt = poly.vertices[(i + 1) % n];
  Point2 prv = poly.vertices[(i + n - 1) % n];
  double a0 = std::atan2((nxt - v).x2, (nxt - v).x1);
  double a1 = std::atan2((prv - v).x2, (prv - v).x1);
  double opening = a1 - a0;
  while (opening <= 0) opening += 2 * M_PI;
  while (opening > 2 * M_PI) opening -= 2 * M_PI;
  return opening;
}

namespace {

SimplePolygon normalize_ccw(SimplePolygon poly, const std::string &name) {
  if (poly.vertices.size() < 3)
    throw SelfIntersecting(name + " has fewer than 3 vertices");
  if (poly.signed_area() < 0)
    std::reverse(poly.vertices.begin(), poly.vertices.end());
  if (!poly.is_simple() || poly.area() <= 0)
    throw SelfIntersecting(name);
  for (const Point2 &p : poly.vertices)
    if (!std::isfinite(p.x1) || !std::isfinite(p.x2))
      throw SelfIntersecting(name + " has non-finite vertex");
  return poly;
}

bool polygons_interiors_overlap(const SimplePolygon &a, const SimplePolygon &b) {
  for (size_t i = 0; i < a.vertices.size(); ++i) {
    Point2 p = a.vertices[i], q = a.vertices[(i + 1) % a.vertices.size()];
    for (size_t j = 0; j < b.vertices.size(); ++j) {
      Point2 r = b.vertices[j], s = b.vertices[(j + 1) % b.vertices.size()];
      if (segments_properly_intersect(p, q, r, s)) return true;
    }
  }
  for (const Point2 &p : a.vertices)
    if (b.contains(p)) return true;
  for (const Point2 &p : b.vertices)
    if (a.contains(p)) return true;
  // touching overlaps: vertices and crossings all on boundaries, interiors
  // still intersecting; probe edge-interior points of each against the other
  auto edge_points_inside = [](const SimplePolygon &u, const SimplePolygon &w) {
    int n = static_cast<int>(u.vertices.size());
    for (int i = 0; i < n; ++i) {
      Point2 p = u.vertices[i], q = u.vertices[(i + 1) % n];
      for (double t : {0.25, 0.5, 0.75})
        if (w.contains(p + t * (q - p))) return true;
    }
    return false;
  };
  if (edge_points_inside(a, b) || edge_points_inside(b, a)) return true;
  // identical polygons: centroids coincide and lie inside both
  Point2 ca{0, 0};
  for (const Point2 &p : a.vertices) ca = ca + (1.0 / a.vertices.size()) * p;
  return b.contains(ca) && a.contains(ca);
}

} // namespace

NestPartition build_nest_partition(std::vector<SimplePolygon> layers) {
  if (layers.empty()) throw ConfigError("nest partition needs at least one layer");
  NestPartition nest;
  for (size_t i = 0; i < layers.size(); ++i) {
    std::string name = "layer " + std::to_string(i + 1);
    SimplePolygon p = normalize_ccw(std::move(layers[i]), name);
    if (!p.is_convex()) throw NotConvex(name);
    nest.layers.push_back(std::move(p));
  }
  for (size_t i = 0; i + 1 < nest.layers.size(); ++i) {
    const SimplePolygon &outer = nest.layers[i];
    const SimplePolygon &inner = nest.layers[i + 1];
    for (const Point2 &v : inner.vertices)
      if (!outer.contains(v))
        throw NotStrictlyNested("layer " + std::to_string(i + 2) +
                                " not strictly inside layer " + std::to_string(i + 1));
  }
  return nest;
}

CellPartition build_cell_partition(std::vector<SimplePolygon> cells) {
  if (cells.empty()) throw ConfigError("cell partition needs at least one cell");
  CellPartition part;
  for (size_t i = 0; i < cells.size(); ++i)
    part.cells.push_back(normalize_ccw(std::move(cells[i]), "cell " + std::to_string(i)));

  for (size_t i = 0; i < part.cells.size(); ++i)
    for (size_t j = i + 1; j < part.cells.size(); ++j)
      if (polygons_interiors_overlap(part.cells[i], part.cells[j]))
        throw OverlappingCells("cells " + std::to_string(i) + " and " + std::to_string(j));

  // An edge portion is interior when a point just outside the owning cell,
  // across that edge, lies inside some other cell.
  double scale = 0;
  for (const auto &c : part.cells) scale = std::max(scale, c.diameter());
  double eps = 1e-7 * scale;
  auto edge_is_exterior = [&](size_t ci, int e) {
    const SimplePolygon &c = part.cells[ci];
    int n = static_cast<int>(c.vertices.size());
    Point2 a = c.vertices[e], b = c.vertices[(e + 1) % n];
    Point2 mid = 0.5 * (a + b);
    Point2 out = mid - eps * perp(normalized(b - a)); // ccw: outward = -perp(tangent)
    for (size_t cj = 0; cj < part.cells.size(); ++cj)
      if (cj != ci && part.cells[cj].contains(out)) return false;
    return true;
  };

  std::vector<std::vector<bool>> adjacency(part.cells.size(),
                                           std::vector<bool>(part.cells.size(), false));
  for (size_t ci = 0; ci < part.cells.size(); ++ci) {
    const SimplePolygon &c = part.cells[ci];
    int n = static_cast<int>(c.vertices.size());
    int certificate = -1;
    for (int v = 0; v < n && certificate < 0; ++v) {
      int eprev = (v + n - 1) % n;
      if (edge_is_exterior(ci, eprev) && edge_is_exterior(ci, v)) certificate = v;
    }
    if (certificate < 0)
      throw NoExteriorCorner("cell " + std::to_string(ci));
    part.exterior_corner.push_back(certificate);

    for (int e = 0; e < n; ++e) {
      if (edge_is_exterior(ci, e)) continue;
      Point2 mid = 0.5 * (c.vertices[e] + c.vertices[(e + 1) % n]);
      Point2 out = mid - eps * perp(normalized(c.vertices[(e + 1) % n] - c.vertices[e]));
      for (size_t cj = 0; cj < part.cells.size(); ++cj)
        if (cj != ci && part.cells[cj].contains(out))
          adjacency[ci][cj] = adjacency[cj][ci] = true;
    }
  }

  // Reject partitions whose cell adjacency graph is disconnected; cells
  // meeting only at points do not form a usable scatterer here.
  if (part.cells.size() > 1) {
    std::vector<bool> seen(part.cells.size(), false);
    std::vector<size_t> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      size_t c = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < part.cells.size(); ++j)
        if (adjacency[c][j] && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    for (size_t j = 0; j < part.cells.size(); ++j)
      if (!seen[j])
        throw OverlappingCells("cell adjacency graph disconnected (cell " +
                               std::to_string(j) + " isolated)");
  }
  return part;
}

Partition make_partition_nest(std::vector<SimplePolygon> layers) {
  Partition p;
  p.kind = Partition::Nest;
  p.nest = build_nest_partition(std::move(layers));
  return p;
}

Partition make_partition_cell(std::vector<SimplePolygon> cells) {
  Partition p;
  p.kind = Partition::Cell;
  p.cell = build_cell_partition(std::move(cells));
  return p;
}

double Partition::diameter() const {
  const std::vector<SimplePolygon> &polys = polygons();
  double d = 0;
  std::vector<Point2> all;
  for (const auto &p : polys)
    all.insert(all.end(), p.vertices.begin(), p.vertices.end());
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      d = std::max(d, norm(all[i] - all[j]));
  return d;
}

double Partition::circumradius() const {
  double r = 0;
  for (const auto &p : polygons())
    for (const Point2 &v : p.vertices) r = std::max(r, norm(v));
  return r;
}

std::vector<CornerDescriptor> extract_corners(const Partition &partition) {
  std::vector<CornerDescriptor> corners;
  const auto &polys = partition.polygons();

  // Flat list of all edges for the clearance computation.
  struct Edge {
    Point2 a, b;
    int poly;
    int index;
  };
  std::vector<Edge> edges;
  for (size_t pi = 0; pi < polys.size(); ++pi) {
    int n = static_cast<int>(polys[pi].vertices.size());
    for (int e = 0; e < n; ++e)
      edges.push_back({polys[pi].vertices[e], polys[pi].vertices[(e + 1) % n],
                       static_cast<int>(pi), e});
  }

  for (size_t pi = 0; pi < polys.size(); ++pi) {
    const SimplePolygon &poly = polys[pi];
    int n = static_cast<int>(poly.vertices.size());
    for (int vi = 0; vi < n; ++vi) {
      Point2 v = poly.vertices[vi];
      Point2 t_next = normalized(poly.vertices[(vi + 1) % n] - v);
      double opening = interior_angle(poly, vi);
      if (!(opening > 0.0) || !(opening < 2 * M_PI))
        throw DegenerateCorner("polygon " + std::to_string(pi) + " vertex " +
                               std::to_string(vi));

      // Keep the world orientation when the raw angles already fit the
      // (-pi, pi) frame; otherwise rotate the bisector onto +x.
      double theta_m = std::atan2(t_next.x2, t_next.x1);
      double theta_M = theta_m + opening;
      double rotation = 0.0;
      if (theta_M >= M_PI) {
        rotation = -(theta_m + 0.5 * opening); // symmetric frame
        theta_m = -0.5 * opening;
        theta_M = 0.5 * opening;
      }

      // Clearance: distance from v to every segment not touching it, over
      // all polygons of the partition (cells share vertices and edges).
      double scale = std::max(poly.diameter(), 1e-30);
      double clearance = std::numeric_limits<double>::infinity();
      for (const Edge &e : edges) {
        bool touches = norm(e.a - v) < 1e-12 * scale || norm(e.b - v) < 1e-12 * scale;
        if (touches) continue;
        clearance = std::min(clearance, distance_point_segment(v, e.a, e.b));
      }
      double edge_len = std::min(norm(poly.vertices[(vi + 1) % n] - v),
                                 norm(poly.vertices[(vi + n - 1) % n] - v));
      double h = 0.5 * std::min(clearance, 2.0 * edge_len);
      if (!(h > 0)) throw DegenerateCorner("zero clearance at polygon " +
                                           std::to_string(pi) + " vertex " +
                                           std::to_string(vi));

      CornerDescriptor c;
      c.owner = partition.kind == Partition::Nest ? static_cast<int>(pi) + 1
                                                  : static_cast<int>(pi);
      c.vertex_index = vi;
      c.vertex = v;
      c.sector.apex = {0.0, 0.0};
      c.sector.theta_m = theta_m;
      c.sector.theta_M = theta_M;
      c.sector.h = h;
      c.sector.delta_W = std::cos(0.5 * opening);
      c.rigid_motion.angle = -rotation; // local -> world
      c.rigid_motion.translation = v;
      corners.push_back(c);
    }
  }
  return corners;
}

std::string RegionLabel::to_string() const {
  switch (kind) {
  case Exterior: return "exterior";
  case Shell: return "layer " + std::to_string(index);
  case Cell: return "cell " + std::to_string(index);
  case OnInterface:
    return "interface " + std::to_string(interface_id) + " edge " +
           std::to_string(edge_index);
  }
  return "?";
}

RegionLabel locate(const Partition &partition, Point2 x) {
  const auto &polys = partition.polygons();
  double diam = partition.diameter();
  double snap = 1e-9 * diam;

  for (size_t pi = 0; pi < polys.size(); ++pi) {
    const SimplePolygon &p = polys[pi];
    int n = static_cast<int>(p.vertices.size());
    for (int e = 0; e < n; ++e) {
      if (distance_point_segment(x, p.vertices[e], p.vertices[(e + 1) % n]) < snap) {
        RegionLabel lab;
        lab.kind = RegionLabel::OnInterface;
        lab.interface_id = partition.kind == Partition::Nest ? static_cast<int>(pi) + 1 : 0;
        lab.index = static_cast<int>(pi);
        lab.edge_index = e;
        return lab;
      }
    }
  }

  if (partition.kind == Partition::Nest) {
    // deepest layer containing x; shell zeta = Pi_zeta \ Pi_{zeta+1}
    int deepest = 0;
    for (size_t pi = 0; pi < polys.size(); ++pi)
      if (polys[pi].contains(x)) deepest = static_cast<int>(pi) + 1;
    RegionLabel lab;
    if (deepest == 0) return lab; // exterior
    lab.kind = RegionLabel::Shell;
    lab.index = deepest;
    return lab;
  }

  for (size_t pi = 0; pi < polys.size(); ++pi)
    if (polys[pi].contains(x)) {
      RegionLabel lab;
      lab.kind = RegionLabel::Cell;
      lab.index = static_cast<int>(pi);
      return lab;
    }
  return {};
}

} // namespace escat
