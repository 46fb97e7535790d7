#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/law.hpp"

namespace nslab {

enum class PressureKind {
  GeneralSplit,     // p = p_e(rho) + theta p_theta(rho)
  LinearInDensity,  // p = p_e(rho) + R rho theta
};

struct HypothesisConstants {
  double gamma = 4.0;
  double a1 = 1.0;
  double a2 = 1.0;
  double b = 1.0;
  double c = 1.0;
  double kappa_lo = 1.0;
  double kappa_hi = 1.0;
  double C_nu = 1.0;
};

// Material laws of the heat-conducting gas. Immutable once built.
struct ConstitutiveSet {
  PressureKind pressure_kind = PressureKind::LinearInDensity;
  ScalarLaw p_e;
  ScalarLaw p_theta;  // GeneralSplit only
  double R = 1.0;     // LinearInDensity only
  ScalarLaw mu;
  ScalarLaw lambda;
  std::optional<ScalarLaw> nu;  // lower envelope of 2mu + 3lambda; defaults to it
  ScalarLaw kappa;
  HypothesisConstants constants;

  // Coefficient of theta in the pressure: p_theta(rho) or R rho.
  double thermal_coefficient(double rho) const {
    return pressure_kind == PressureKind::GeneralSplit ? p_theta(rho) : R * rho;
  }
  double nu_at(double theta) const { return nu ? (*nu)(theta) : 2.0 * mu(theta) + 3.0 * lambda(theta); }
  double gamma() const { return constants.gamma; }
};

// Named presets: "ideal-like", "general-split", "degenerate".
ConstitutiveSet constitutive_preset(const std::string& name);
std::vector<std::string> constitutive_preset_names();

// p(rho, theta); throws DomainError on negative arguments.
double pressure(const ConstitutiveSet& cs, double rho, double theta);

// K(theta) = \int_0^theta kappa.
double kappa_primitive(const ConstitutiveSet& cs, double theta);

// Density floor below which P_e is not evaluated.
inline constexpr double kRhoFloor = 1e-8;

// P_e(rho) = \int_1^rho p_e(z)/z^2 dz for rho >= kRhoFloor.
double elastic_potential(const ConstitutiveSet& cs, double rho);

// rho P_e(rho), extended to rho < kRhoFloor by rho P_e(kRhoFloor); the flag
// reports whether that extension was used.
double rho_elastic_potential(const ConstitutiveSet& cs, double rho, bool* clamped = nullptr);

// p_e = p_m - p_b with p_m non-decreasing and p_b >= 0 supported in [0, support_bound].
struct PressureDecomposition {
  std::vector<double> rho;
  std::vector<double> p_m;
  std::vector<double> p_b;
  double support_bound = 0.0;
  double max_reconstruction_error = 0.0;
  ScalarLaw p_m_law;
  ScalarLaw p_b_law;
};

PressureDecomposition pe_decomposition(const ConstitutiveSet& cs, double rho_max = 10.0, int samples = 4097);

struct ValidationEntry {
  std::string name;
  bool passed = true;
  double witness = 0.0;        // sample point of the first failure
  double witness_value = 0.0;  // violated quantity at the witness
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool all_passed() const;
  const ValidationEntry* first_failure() const;
};

struct SamplingOptions {
  int points = 512;
  double theta_max = 100.0;
  double rho_max = 100.0;
  double lipschitz_bound = 1e3;
};

// {0} followed by points-1 log-spaced values in [max*1e-9, max].
std::vector<double> log_sample_grid(double max, int points);

ValidationReport validate_hypotheses(const ConstitutiveSet& cs, double beta, const SamplingOptions& opt = {});

}  // namespace nslab
