#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <iosfwd>

#include "escat/dtn_farfield.hpp"
#include "escat/elastic_core.hpp"
#include "escat/mesh.hpp"

namespace escat {

using SpMatC = Eigen::SparseMatrix<Complex>;
using VecC = Eigen::VectorXcd;

// Discrete a(v, phi) = b(phi): stiffness - omega^2 q-weighted mass
// - interface eta mass - DtN boundary block. Two dofs per vertex (2v + comp).
struct AssembledSystem {
  SpMatC A;
  VecC b;
  int n_dofs = 0;
  bool eta_positive_warning = false;
};

struct SolveInfo {
  double residual_rel = 0.0;
  double h1_norm = 0.0;        // ||u^sc||_{H^1(B_R)}
  double incident_l2 = 0.0;    // ||u^i||_{L^2(Omega)}
  double stability_load = 0.0; // (omega^2 ||1-q||_inf + ||eta||_inf) ||u^i||_L2
  bool eta_positive_warning = false;
};

struct ScatteredField {
  VecC nodal; // u^sc, interleaved (u1, u2) per vertex
  SolveInfo info;
};

AssembledSystem assemble(const Mesh &mesh, const MediumConfig &config,
                         const LameParameters &lame, double omega,
                         const DtnOperator &dtn);

VecC rhs_from_incident(const Mesh &mesh, const MediumConfig &config,
                       const LameParameters &lame, const PlaneWave &wave);

ScatteredField solve(const AssembledSystem &system);

// Fourier trace coefficients of the solved field on |x| = R, converted to
// radiating potential coefficients via the per-mode Dirichlet matrices.
RadiatingSolution circle_trace_modes(const Mesh &mesh, const ScatteredField &field,
                                     const DtnOperator &dtn);

// P1 interpolation of a nodal field (value + elementwise-constant gradient).
class FemField {
public:
  FemField(const Mesh &mesh, VecC nodal);
  FieldSample eval(Point2 x) const;
  const Mesh &mesh() const { return *mesh_; }
  const VecC &nodal() const { return nodal_; }

private:
  const Mesh *mesh_;
  VecC nodal_;
  MeshLocator locator_;
};

// Discrete norms of a nodal field over the whole mesh.
double field_h1_norm(const Mesh &mesh, const VecC &nodal);
double field_l2_norm(const Mesh &mesh, const VecC &nodal);

// H^1-distance between a coarse solution and a reference solution, integrated
// on the reference mesh, skipping triangles within r_excl of any point in
// `exclude`.
double h1_error_against_reference(const Mesh &ref_mesh, const VecC &ref_nodal,
                                  const FemField &coarse,
                                  const std::vector<Point2> &exclude, double r_excl);

void write_field(std::ostream &os, const Mesh &mesh, const VecC &nodal);
// Reads a field dump back: (vertex positions, nodal values).
std::pair<std::vector<Point2>, VecC> read_field(std::istream &is);

} // namespace escat
