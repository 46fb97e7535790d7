#pragma once

#include <string>

#include "nslab/constitutive.hpp"
#include "nslab/field.hpp"

namespace nslab {

struct InitialData {
  ScalarField rho0;
  VectorField m0;
  ScalarField theta0;
  double rho_lo = 0.0;    // lower bound of rho0
  double theta_lo = 0.0;  // lower bound of theta0, independent of delta
  double theta_hi = 0.0;  // clamp ceiling; <= 0 selects 1.01 max(theta0)
};

struct RegularizedData {
  ScalarField rho;
  VectorField m;
  ScalarField theta;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

// Normalised discrete Gaussian with standard deviation radius_cells (in cells),
// truncated at three deviations, mirrored at the walls. Separable in 2D.
ScalarField mollify(const ScalarField& f, double radius_cells = 2.0);

// Copies the first interior value onto every boundary cell so that discrete
// normal differences vanish on the walls.
void enforce_neumann(ScalarField& f);

RegularizedData regularize_initial_data(const InitialData& init, double delta, double beta, double radius_cells = 2.0);

// E(0) = \int |m|^2/(2 rho) + rho P_e(rho) + delta/(beta-1) rho^beta + rho theta.
double initial_energy(const RegularizedData& data, const ConstitutiveSet& cs, double delta, double beta);

// Profile presets: "constant", "gaussian", "two-bump".
struct ProfileSpec {
  std::string kind = "constant";
  double base = 1.0;
  double amplitude = 0.0;
  double width = 0.1;  // fraction of the domain length
};

// Velocity presets: "zero", "bump" (x-component vanishing on every wall), "shear".
struct VelocitySpec {
  std::string kind = "zero";
  double amplitude = 0.0;
};

struct InitialSpec {
  ProfileSpec rho;
  ProfileSpec theta;
  VelocitySpec velocity;
  double theta_lo = 0.0;  // <= 0: use min theta0
  double theta_hi = 0.0;
  std::string snapshot;   // optional file with components rho, m_x[, m_y], theta
};

ScalarField make_profile(const Grid& grid, const ProfileSpec& p);
InitialData make_initial_data(const Grid& grid, const InitialSpec& spec);

}  // namespace nslab
