#pragma once

#include <Eigen/Sparse>

#include "nslab/field.hpp"

namespace nslab {

// Cellwise viscous quantities, each the average over the 2^d one-sided
// gradient stencils (forward/backward per axis, wall ghosts antireflected).
struct ViscousDensity {
  ScalarField s_grad_u;  // S:grad u = 2 mu |D(u)|^2 + lambda (div u)^2
  ScalarField grad_sq;   // |grad u|^2
  ScalarField sym_sq;    // |D(u)|^2
  ScalarField div_sq;    // (div u)^2
};

ViscousDensity viscous_density(const VectorField& u, const ScalarField& mu, const ScalarField& lambda);

// Symmetric positive semidefinite A with u.A u = h^d sum_cells (S:grad u + eta |grad u|^2),
// so -A u / h^d discretises div S + eta Lap u with zero velocity on the walls.
// Unknowns ordered component-major: index a * cells + k.
Eigen::SparseMatrix<double> viscous_matrix(const Grid& grid, const ScalarField& mu, const ScalarField& lambda, double eta);

Eigen::VectorXd pack(const VectorField& u);
VectorField unpack(const Grid& grid, const Eigen::VectorXd& x);

}  // namespace nslab
