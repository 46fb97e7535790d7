#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nslab/renormalizer.hpp"
#include "nslab/solver.hpp"

namespace nslab {

struct InequalityReport {
  std::string name;
  std::vector<double> times;
  std::vector<double> residual;   // <= 0 means satisfied
  std::vector<double> tolerance;  // per time
  double max_residual = 0.0;
  double max_excess = 0.0;        // max(residual - tolerance)
  bool passed = true;
};

double total_energy(const FluidState& s, const ConstitutiveSet& cs, double delta, double beta);

struct EnergyCheckOptions {
  double factor = 10.0;
  // First-step defect to scale the tolerance with; taken from the run itself when absent.
  std::optional<double> calibrated_defect;
};

// residual(t) = E(t) + dissipation(t) - E(0) against factor * defect * t / dt.
InequalityReport energy_inequality_check(const Trajectory& traj, const EnergyCheckOptions& opt = {});
// Positive part of the first-step residual plus a roundoff floor of 1e-13 max(1, E(0)).
double first_step_defect(const Trajectory& traj);

// p + delta rho^beta - (lambda + 2 mu + eta) div u
ScalarField effective_viscous_pressure(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p);

// Separable phi(t, x) = psi(t) chi(x), phi >= 0, phi(T) = 0, zero normal derivative.
// temporal: 0: 1 - t/T, 1: (1 - t/T)^2, 2: 4 (t/T)(1 - t/T)
// spatial:  0: 1, 1..3: cosine profiles
struct TestFunction {
  int temporal = 0;
  int spatial = 0;

  double psi(double t, double T) const;
  double dpsi(double t, double T) const;
  ScalarField chi(const Grid& g) const;
  std::string name() const;
};

// The 12 products of 3 temporal and 4 spatial profiles.
std::vector<TestFunction> test_bank();

struct RenormOptions {
  double tolerance_factor = 10.0;
  bool allow_inadmissible = false;
};

struct RenormTerms {
  double time_derivative = 0.0;  // \int\int (delta+rho) H phi_t
  double transport = 0.0;        // \int\int rho H u.grad phi
  double diffusion = 0.0;        // \int\int K_h Lap phi
  double cubic = 0.0;            // -\int\int delta theta^3 h phi
  double viscous = 0.0;          // \int\int (delta-1) S:grad u h phi
  double conduction = 0.0;       // \int\int h' kappa |grad theta|^2 phi
  double pressure = 0.0;         // \int\int h theta p_theta div u phi
  double epsilon = 0.0;          // eps \int\int grad rho . grad((H - theta h) phi)
  double initial = 0.0;          // -\int (delta+rho0) H(theta0) phi(0)
  double lhs() const { return time_derivative + transport + diffusion + cubic; }
  double rhs() const { return viscous + conduction + pressure + epsilon + initial; }
  double magnitude() const;
};

RenormTerms renorm_terms(const Trajectory& traj, const Renormalizer& h, const TestFunction& phi);

// LHS - RHS of the renormalized temperature inequality for one test function;
// tolerance = factor * max(dt/T, h/L) * sum of |term|.
InequalityReport renorm_temperature_residual(const Trajectory& traj, const Renormalizer& h, const TestFunction& phi,
                                             const RenormOptions& opt = {});

struct PoincareResult {
  double lhs = 0.0;      // (||v||^2 + ||grad v||^2)^(1/2)
  double rhs_raw = 0.0;  // ||grad v|| + \int rho |v|
  double ratio = 0.0;
};

// Throws DomainError when \int rho < M1, \int rho^gamma > M2 or gamma <= 6/5.
PoincareResult weighted_poincare_check(const ScalarField& rho, const ScalarField& v, double gamma, double M1, double M2);
PoincareResult weighted_poincare_check(const ScalarField& rho, const VectorField& v, double gamma, double M1, double M2);

struct PoincareBatch {
  double sup_ratio = 0.0;
  int samples = 0;
  int rejected = 0;
};

PoincareBatch poincare_batch(const Grid& g, double gamma, double M1, double M2, int samples, std::uint64_t seed);

// Trapezoid rule on (possibly non-uniform) nodes.
double trapezoid(const std::vector<double>& t, const std::vector<double>& f);

}  // namespace nslab
