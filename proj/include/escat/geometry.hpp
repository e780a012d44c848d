#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "escat/errors.hpp"

namespace escat {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }
inline Point2 normalized(Point2 a) {
  double n = norm(a);
  return {a.x1 / n, a.x2 / n};
}
inline Point2 perp(Point2 a) { return {-a.x2, a.x1}; }

// Counterclockwise simple polygon. Vertices are re-oriented on validation.
struct SimplePolygon {
  std::vector<Point2> vertices;

  double signed_area() const;
  double area() const { return std::fabs(signed_area()); }
  double diameter() const;
  bool is_convex() const; // strict: collinear triples fail
  bool is_simple() const; // no self-intersections
  bool contains(Point2 p) const;        // strict interior, winding rule
  double distance_to_boundary(Point2 p) const;
};

// Strictly nested convex layers, outermost first: Pi_N <<  ... << Pi_1.
struct NestPartition {
  std::vector<SimplePolygon> layers;
};

// Disjoint cells tiling the scatterer; every cell owns at least one vertex
// whose two incident edges lie on the outer boundary of the union.
struct CellPartition {
  std::vector<SimplePolygon> cells;
  // For each cell, index of one vertex certified as an exterior corner.
  std::vector<int> exterior_corner;
};

// Local corner frame: apex at the origin after the rigid motion, incident
// edges along the rays arg = theta_m and arg = theta_M.
struct SectorGeometry {
  Point2 apex;
  double theta_m = 0.0;
  double theta_M = 0.0;
  double h = 0.0;       // probe radius, S_h entirely inside the owning region
  double delta_W = 0.0; // cos(opening/2) for the reversed-bisector direction

  double opening() const { return theta_M - theta_m; }
  // Reversed-bisector probe direction angle; d = (cos, sin) of it.
  double theta_d() const { return 0.5 * (theta_m + theta_M) + M_PI; }
};

// Rotation by `angle` about the origin followed by translation, mapping the
// corner's local frame back to world coordinates.
struct RigidMotion {
  double angle = 0.0;
  Point2 translation;

  Point2 apply(Point2 local) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * local.x1 - s * local.x2 + translation.x1,
            s * local.x1 + c * local.x2 + translation.x2};
  }
  Point2 inverse(Point2 world) const {
    Point2 q = world - translation;
    double c = std::cos(angle), s = std::sin(angle);
    return {c * q.x1 + s * q.x2, -s * q.x1 + c * q.x2};
  }
  Point2 rotate(Point2 v) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x1 - s * v.x2, s * v.x1 + c * v.x2};
  }
  Point2 rotate_back(Point2 v) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x1 + s * v.x2, -s * v.x1 + c * v.x2};
  }
};

struct CornerDescriptor {
  int owner = 0;        // layer index (nest, 1-based) or cell index (0-based)
  int vertex_index = 0; // index within the owning polygon
  Point2 vertex;
  SectorGeometry sector;    // local frame, apex = (0,0)
  RigidMotion rigid_motion; // local -> world
};

// Region label returned by locate().
struct RegionLabel {
  enum Kind { Exterior, Shell, Cell, OnInterface } kind = Exterior;
  int index = -1;    // shell/cell index
  int interface_id = -1;
  int edge_index = -1;

  std::string to_string() const;
};

struct Partition {
  enum Kind { Nest, Cell } kind = Nest;
  NestPartition nest;
  CellPartition cell;

  int region_count() const {
    return kind == Nest ? static_cast<int>(nest.layers.size())
                        : static_cast<int>(cell.cells.size());
  }
  // Interfaces carrying an eta coefficient. Nest: boundary of layer zeta
  // (id = zeta, 1-based). Cell: all cell boundaries share id 0.
  int interface_count() const {
    return kind == Nest ? static_cast<int>(nest.layers.size()) : 1;
  }
  const std::vector<SimplePolygon> &polygons() const {
    return kind == Nest ? nest.layers : cell.cells;
  }
  double diameter() const;
  double circumradius() const; // max |vertex| over the outermost geometry
};

NestPartition build_nest_partition(std::vector<SimplePolygon> layers);
CellPartition build_cell_partition(std::vector<SimplePolygon> cells);

Partition make_partition_nest(std::vector<SimplePolygon> layers);
Partition make_partition_cell(std::vector<SimplePolygon> cells);

std::vector<CornerDescriptor> extract_corners(const Partition &partition);

RegionLabel locate(const Partition &partition, Point2 x);

// Interior angle at vertex i of a ccw polygon, in (0, 2*pi).
double interior_angle(const SimplePolygon &poly, int i);

double distance_point_segment(Point2 p, Point2 a, Point2 b);

} // namespace escat
