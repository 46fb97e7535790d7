#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nslab/constitutive.hpp"
#include "nslab/initdata.hpp"
#include "nslab/operators.hpp"

namespace nslab {

struct RegularizationParams {
  double epsilon = 0.0;  // density diffusion
  double eta = 0.0;      // artificial viscosity
  double delta = 0.0;    // artificial pressure / temperature regularisation
  double beta = 5.0;     // artificial pressure exponent

  // Throws DomainError unless eps, eta >= 0, 0 <= delta < 1 and beta > max{4, gamma}.
  void validate(const ConstitutiveSet& cs) const;
};

struct FluidState {
  double t = 0.0;
  ScalarField rho;
  VectorField u;
  ScalarField theta;
};

FluidState state_from(const RegularizedData& data);

// Energy balance series; dissipations and injected heat are cumulative.
struct EnergyLedger {
  std::vector<double> time;
  std::vector<double> kinetic;     // \int rho |u|^2 / 2
  std::vector<double> elastic;     // \int rho P_e(rho)
  std::vector<double> artificial;  // delta/(beta-1) \int rho^beta
  std::vector<double> thermal;     // \int (delta + rho) theta
  std::vector<double> diss_viscous;     // delta \int\int S:grad u
  std::vector<double> diss_artificial;  // eta \int\int |grad u|^2
  std::vector<double> diss_cubic;       // delta \int\int theta^3
  std::vector<double> injected;         // \int\int forcing

  std::size_t size() const { return time.size(); }
  double energy(std::size_t i) const { return kinetic[i] + elastic[i] + artificial[i] + thermal[i]; }
  double dissipation(std::size_t i) const { return diss_viscous[i] + diss_artificial[i] + diss_cubic[i]; }
};

struct DtPolicy {
  enum class Kind { Fixed, Cfl };
  Kind kind = Kind::Cfl;
  double dt = 1e-3;          // Fixed step, and upper bound for Cfl
  double cfl = 0.4;          // advective/acoustic number
  bool diffusive = false;    // also apply the diffusive bound
  double diffusive_factor = 0.25;
};

struct SolverOptions {
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 5000;
  double newton_tolerance = 1e-10;
  int newton_max_iterations = 50;
};

// Extra heat source q(x) >= 0 in the temperature equation; not part of the
// model, used to inject energy that the balance does not account for.
struct Forcing {
  double heat_source = 0.0;
};

struct SimulationConfig {
  ConstitutiveSet cs;
  RegularizationParams params;
  RegularizedData init;
  double horizon = 1.0;
  DtPolicy dt;
  int snapshot_every = 10;  // steps between stored snapshots (first and last always kept)
  int max_steps = 10000000;
  Forcing forcing;
  SolverOptions solver;
};

struct StepStats {
  long steps = 0;
  long clamped_density = 0;
  long clamped_temperature = 0;
  int max_newton_iterations = 0;
  int max_cg_iterations = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
};

struct Trajectory {
  std::vector<FluidState> snapshots;
  ConstitutiveSet cs;
  RegularizationParams params;
  EnergyLedger ledger;
  StepStats stats;
  double first_dt = 0.0;
  bool failed = false;
  std::string error;  // set when failed; snapshots end at the last valid state
};

// Upwind mass flux rho u on faces (zero on walls), layout as FaceField.
FaceField mass_flux(const ScalarField& rho, const VectorField& u);
// Conservative upwind divergence of flux * q (q taken from the upwind cell).
ScalarField upwind_divergence(const FaceField& flux, const ScalarField& q);
ScalarField flux_divergence(const FaceField& flux);

// Largest admissible step under the advective/acoustic and optional diffusive bounds.
double stable_dt(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, const DtPolicy& policy);

// One Lie-split time step with cached factorizations.
class Stepper {
 public:
  Stepper(const Grid& grid, ConstitutiveSet cs, RegularizationParams params, SolverOptions opt = {});

  struct ContinuityResult {
    ScalarField rho;
    FaceField flux;
    long clamped = 0;
  };
  ContinuityResult continuity(const FluidState& s, double dt);
  VectorField momentum(const FluidState& s, const ScalarField& rho_new, const FaceField& flux, double dt);
  ScalarField temperature(const FluidState& s, const ScalarField& rho_new, const VectorField& u_new, const FaceField& flux,
                          double dt, const ScalarField* heat_source = nullptr);

  int last_newton_iterations() const { return newton_iters_; }
  int last_cg_iterations() const { return cg_iters_; }
  long last_clamped_temperature() const { return clamped_theta_; }

 private:
  Grid grid_;
  ConstitutiveSet cs_;
  RegularizationParams p_;
  SolverOptions opt_;
  Eigen::SparseMatrix<double> lap_;
  double cached_eps_dt_ = -1.0;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> diffusion_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> newton_;
  int newton_iters_ = 0;
  int cg_iters_ = 0;
  long clamped_theta_ = 0;
};

// Single sub-steps with a throwaway Stepper.
ScalarField step_continuity(const FluidState& s, double epsilon, double dt);
VectorField step_momentum(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, double dt);
ScalarField step_temperature(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, double dt);

// Ledger entry without the cumulative columns.
struct EnergyParts {
  double kinetic, elastic, artificial, thermal;
  double total() const { return kinetic + elastic + artificial + thermal; }
};
EnergyParts energy_parts(const FluidState& s, const ConstitutiveSet& cs, double delta, double beta);

Trajectory simulate(const SimulationConfig& config);

}  // namespace nslab
