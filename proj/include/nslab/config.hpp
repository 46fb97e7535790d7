#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nslab/degiorgi.hpp"
#include "nslab/diagnostics.hpp"
#include "nslab/initdata.hpp"
#include "nslab/renormalizer.hpp"
#include "nslab/solver.hpp"

namespace nslab {

struct DiagnosticsConfig {
  double energy_factor = 10.0;
  double energy_calibration = 0.0;  // first-step defect from a calibration run; 0 uses the run itself
  double renorm_tolerance = 10.0;
  std::vector<RenormalizerSpec> renormalizers{RenormalizerSpec::inverse_power(1.0)};
  DeGiorgiConfig degiorgi;
  double degiorgi_T1 = 0.0;  // > 0 selects the geometric schedule T_k = T1 (1 - 2^-k)
  int poincare_samples = 1000;
  double poincare_M1 = 0.5;
  double poincare_M2 = 10.0;
  double probe_omega = 0.1;
};

struct RunConfig {
  Grid grid;
  std::string law_preset = "ideal-like";
  ConstitutiveSet cs;
  RegularizationParams params;
  InitialSpec initial;
  double mollifier_radius = 2.0;
  double horizon = 1.0;
  DtPolicy dt;
  int snapshot_every = 10;
  int max_steps = 10000000;
  SolverOptions solver;
  Forcing forcing;
  DiagnosticsConfig diagnostics;
  std::uint64_t seed = 1;
  std::string output = "out";
  std::string sweep_param = "eta";
  std::vector<double> sweep_levels{1e-1, 1e-2, 1e-3};
  // key = value pairs as resolved, in section order, for --dry-run and reports
  std::vector<std::pair<std::string, std::string>> resolved;
};

// Parses the sectioned key = value format; '#' and ';' start comments.
// Throws ConfigError carrying the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Law syntax: "power:a,e" (a z^e) or "poly:c0,c1,..." (c0 + c1 z + ...).
ScalarLaw parse_law(const std::string& text);
// Renormalizer syntax: "inverse-power:l", "xi:x", "truncated:omega,C", "table:step,v0,v1,...".
RenormalizerSpec parse_renormalizer(const std::string& text);
std::vector<double> parse_list(const std::string& text);

// Simulation inputs resolved from a run config.
InitialData build_initial(const RunConfig& rc);
SimulationConfig build_simulation(const RunConfig& rc);
SimulationConfig build_simulation(const RunConfig& rc, const InitialData& raw);

}  // namespace nslab
