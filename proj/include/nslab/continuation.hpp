#pragma once

#include <array>
#include <string>
#include <vector>

#include "nslab/diagnostics.hpp"
#include "nslab/initdata.hpp"
#include "nslab/solver.hpp"

namespace nslab {

// min(rho, k) cellwise
ScalarField cutoff_Tk(const ScalarField& rho, double k);

// Smooth non-increasing step: 0 for z <= omega, -1 for z >= 2 omega, cubic in between.
double low_density_step(double z, double omega);

struct LowDensityWeight {
  ScalarField w;
  double residual = 0.0;  // max |Lap w - (B - mean B)|
  int iterations = 0;
};

// Zero-mean solution of Lap w = B(rho) - mean B(rho) with zero Neumann data.
LowDensityWeight low_density_weight(const ScalarField& rho, double omega, double tolerance = 1e-10);

struct IntegrabilityProbe {
  double high = 0.0;  // \int\int theta^3 on {rho >= omega}
  double low = 0.0;   // \int\int theta^3 on {rho < omega}
};

IntegrabilityProbe temperature_integrability_probe(const Trajectory& traj, double omega);

struct LevelSummary {
  double value = 0.0;
  bool ok = false;
  std::string error;
  long steps = 0;
  double min_theta = 0.0;
  double sup_kinetic = 0.0;      // sup_t \int rho |u|^2
  double sup_rho_gamma = 0.0;    // sup_t \int rho^gamma
  double sup_thermal = 0.0;      // sup_t \int (delta + rho) theta
  double diss_viscous = 0.0;     // delta \int\int S:grad u
  double diss_cubic = 0.0;       // delta \int\int theta^3
  double ln_theta_h1 = 0.0;      // ||ln theta||_{L^2 H^1}
  double theta_h1 = 0.0;         // ||theta||_{L^2 H^1}
  double u_h1 = 0.0;             // ||u||_{L^2 H^1}
  double theta_power_h1 = 0.0;   // ||theta^((3-l)/2)||_{L^2 H^1}, l = 1/2
  double mass_drift = 0.0;
  IntegrabilityProbe probe;
  std::vector<double> pairings;  // <EVP rho, phi> over the test bank
};

struct SweepOptions {
  double probe_omega = 0.1;
  double bound_factor = 2.0;
  double noise_floor = 1e-12;  // relative to the pairing scale
  bool parallel = true;
};

struct SweepReport {
  std::string param;
  std::vector<double> schedule;
  double dt = 0.0;
  std::vector<LevelSummary> levels;
  std::vector<double> rho_l1_gaps;                // consecutive space-time L1 differences
  std::vector<std::vector<double>> pairing_gaps;  // [gap][bank]
  bool rho_converging = false;       // non-increasing gaps over the tail
  bool pairings_converging = false;  // decreasing gaps over the last two for every test function
  std::vector<bool> pairing_flags;
  bool estimates_bounded = false;    // each surrogate at every level <= factor * its first-level value
  std::vector<std::string> unbounded;
  bool all_ok = false;
};

// Metric names in the order used by sweep.csv.
const std::vector<std::string>& level_metric_names();
std::vector<double> level_metrics(const LevelSummary& s);

LevelSummary summarize_level(const Trajectory& traj, double value, const SweepOptions& opt);

// Space-time L1 distance of the densities of two runs sharing snapshot times.
double rho_l1_distance(const Trajectory& a, const Trajectory& b);

// Runs one simulation per schedule value with grid and time step held fixed.
// param is "epsilon", "eta" or "delta"; a delta level re-regularises the raw data.
SweepReport parameter_sweep(const SimulationConfig& base, const InitialData& raw, double mollifier_radius,
                            const std::string& param, const std::vector<double>& schedule, const SweepOptions& opt = {});

}  // namespace nslab
