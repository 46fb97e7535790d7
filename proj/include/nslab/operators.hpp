#pragma once

#include <Eigen/Sparse>

#include "nslab/field.hpp"

namespace nslab {

// Normal differences on cell faces; face (i, j) of axis 0 lies between cells
// i-1 and i, so axis a carries cells[a] + 1 faces per grid line.
struct FaceField {
  Grid grid;
  std::array<std::vector<double>, 2> normal;

  std::size_t face_index(int axis, int i, int j) const {
    return axis == 0 ? static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.cells[0] + 1) + static_cast<std::size_t>(i)
                     : static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.cells[0]) + static_cast<std::size_t>(i);
  }
};

// Value of f in the neighbour of cell (i, j) along axis, with ghost cells
// reflected (Neumann) or antireflected (Dirichlet) outside the domain.
double neighbour(const ScalarField& f, int i, int j, int axis, int step, Boundary bc);

// Centred gradient; ghosts reflect (scalar fields obey zero normal derivative).
VectorField grad(const ScalarField& f);
// Centred divergence; ghosts antireflect (velocity has zero trace).
ScalarField div(const VectorField& v);
// Compact 2d+1 point Laplacian, equal to face_div(face_grad(f, bc)).
ScalarField laplacian(const ScalarField& f, Boundary bc);

FaceField face_grad(const ScalarField& f, Boundary bc);
ScalarField face_div(const FaceField& g);

// Cellwise |grad f|^2 as the average of the squared normal differences on the
// two faces of each axis; sums to the discrete Dirichlet energy of laplacian().
ScalarField grad_squared(const ScalarField& f, Boundary bc);

// D(u) = (grad u + grad^T u)/2 from centred differences; trace equals div(u).
TensorField sym_gradient(const VectorField& u);

double integrate(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& f, const VectorField& g);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

// Matrix of laplacian(., bc) acting on the row-major cell vector.
Eigen::SparseMatrix<double> laplacian_matrix(const Grid& grid, Boundary bc);

// Largest |f_boundary - f_inner| over boundary cell pairs (discrete normal difference).
double boundary_normal_difference(const ScalarField& f);

}  // namespace nslab
