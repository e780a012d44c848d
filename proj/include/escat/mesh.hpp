#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <vector>

#include "escat/geometry.hpp"
#include "escat/materials.hpp"

namespace escat {

// Interface-conforming triangulation of the disk B_R containing the partition.
// Region ids: 0 = exterior annulus; nest: shell zeta (1-based); cell: cell
// index + 1.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles; // ccw
  std::vector<int> region;                   // per triangle

  // interface id -> unique undirected mesh edges lying on it
  std::map<int, std::vector<std::array<int, 2>>> interface_edges;
  std::vector<std::array<int, 2>> boundary_edges; // on |x| = R, ordered by angle
  std::vector<int> boundary_vertices;             // ordered by angle, uniform
  std::vector<int> corner_vertices; // mesh vertex index of every partition corner

  double R = 0.0;
  double h_mesh = 0.0;

  double triangle_area(int t) const;
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

Mesh generate_mesh(const Partition &partition, double R, double h_mesh,
                   double corner_grading = 0.5);

// Point location with a uniform-grid accelerator; returns triangle index or -1.
struct MeshLocator {
  explicit MeshLocator(const Mesh &mesh);
  int find(Point2 p, std::array<double, 3> *bary = nullptr) const;

private:
  const Mesh &mesh_;
  double cell_ = 0.0;
  int nx_ = 0, ny_ = 0;
  Point2 lo_;
  std::vector<std::vector<int>> bins_;
};

// Text dumps: vertices + triangles + labels (Triangle-like .node/.ele layout).
void write_mesh(std::ostream &os, const Mesh &mesh);
// Reads vertices, triangles and region labels back (connectivity only).
Mesh read_mesh(std::istream &is);

} // namespace escat
