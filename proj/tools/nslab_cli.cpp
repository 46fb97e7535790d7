#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "nslab/config.hpp"
#include "nslab/continuation.hpp"
#include "nslab/degiorgi.hpp"
#include "nslab/diagnostics.hpp"
#include "nslab/error.hpp"
#include "nslab/outputs.hpp"

namespace fs = std::filesystem;
using namespace nslab;

namespace {

struct Flags {
  std::string config;
  std::string out;
  long seed = -1;
  bool dry_run = false;
  std::string param;
  std::string levels;
};

RunConfig load(const Flags& f) {
  RunConfig rc = load_config(f.config);
  if (!f.out.empty()) rc.output = f.out;
  if (f.seed >= 0) rc.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.param.empty()) {
    if (f.param != "epsilon" && f.param != "eta" && f.param != "delta") throw ConfigError("--param must be epsilon, eta or delta");
    rc.sweep_param = f.param;
  }
  if (!f.levels.empty()) {
    try {
      rc.sweep_levels = parse_list(f.levels);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("--levels: ") + e.what());
    }
  }
  return rc;
}

bool print_validation(const RunConfig& rc) {
  ValidationReport v = validate_hypotheses(rc.cs, rc.params.beta);
  for (const auto& e : v.entries) {
    if (e.passed) std::printf("PASS  %s\n", e.name.c_str());
    else std::printf("FAIL  %s: %s\n", e.name.c_str(), e.detail.c_str());
  }
  return v.all_passed();
}

void print_plan(const RunConfig& rc, const std::string& command) {
  std::printf("command: %s\n", command.c_str());
  std::printf("grid: %dD, cells %d x %d, extent %g x %g\n", rc.grid.dim, rc.grid.cells[0], rc.grid.dim == 2 ? rc.grid.cells[1] : 1,
              rc.grid.length[0], rc.grid.dim == 2 ? rc.grid.length[1] : 0.0);
  std::printf("horizon: %g, dt policy: %s (dt %g, cfl %g), snapshot every %d steps\n", rc.horizon,
              rc.dt.kind == DtPolicy::Kind::Fixed ? "fixed" : "cfl", rc.dt.dt, rc.dt.cfl, rc.snapshot_every);
  std::printf("laws: %s, regularization: epsilon %g, eta %g, delta %g, beta %g\n", rc.law_preset.c_str(), rc.params.epsilon,
              rc.params.eta, rc.params.delta, rc.params.beta);
  if (command == "sweep") {
    std::printf("sweep: %s over", rc.sweep_param.c_str());
    for (double v : rc.sweep_levels) std::printf(" %g", v);
    std::printf("\n");
  }
  std::printf("output: %s, seed %llu\n", rc.output.c_str(), static_cast<unsigned long long>(rc.seed));
  for (const auto& [k, v] : rc.resolved) std::printf("  %s = %s\n", k.c_str(), v.c_str());
}

Trajectory run_simulation(const RunConfig& rc, SimulationConfig& sim) {
  sim = build_simulation(rc);
  return simulate(sim);
}

int cmd_validate(const Flags& f) {
  RunConfig rc = load(f);
  if (f.dry_run) {
    print_plan(rc, "validate");
    return 0;
  }
  return print_validation(rc) ? 0 : 1;
}

int cmd_simulate(const Flags& f) {
  RunConfig rc = load(f);
  if (f.dry_run) {
    print_plan(rc, "simulate");
    return 0;
  }
  if (!print_validation(rc)) return 1;
  fs::path out = rc.output;
  fs::create_directories(out / "snapshots");
  SimulationConfig sim;
  Trajectory traj = run_simulation(rc, sim);
  write_trajectory_snapshots(out / "snapshots", traj);
  write_csv(out / "ledger.csv", ledger_table(traj.ledger));

  EnergyCheckOptions eo;
  eo.factor = rc.diagnostics.energy_factor;
  if (rc.diagnostics.energy_calibration > 0.0) eo.calibrated_defect = rc.diagnostics.energy_calibration;
  InequalityReport energy = energy_inequality_check(traj, eo);
  std::vector<InequalityReport> renorm;
  if (!traj.failed && traj.snapshots.size() > 1) {
    RenormOptions ro;
    ro.tolerance_factor = rc.diagnostics.renorm_tolerance;
    for (const auto& spec : rc.diagnostics.renormalizers) {
      Renormalizer h = make_renormalizer(spec);
      if (!h.admissible()) {
        std::fprintf(stderr, "skipping inadmissible renormalizer %s: %s\n", h.name().c_str(), h.violation().c_str());
        continue;
      }
      for (const auto& phi : test_bank()) renorm.push_back(renorm_temperature_residual(traj, h, phi, ro));
    }
  }
  PoincareBatch pb = poincare_batch(rc.grid, rc.cs.gamma(), rc.diagnostics.poincare_M1, rc.diagnostics.poincare_M2,
                                    rc.diagnostics.poincare_samples, rc.seed);
  write_json(out / "report.json", run_report(rc, traj, energy, renorm, &pb));

  std::printf("steps: %ld, snapshots: %zu\n", traj.stats.steps, traj.snapshots.size());
  std::printf("energy inequality: %s (max residual %.3e)\n", energy.passed ? "pass" : "fail", energy.max_residual);
  int rpass = 0;
  for (const auto& r : renorm) rpass += r.passed;
  std::printf("renormalized temperature inequality: %d/%zu pass\n", rpass, renorm.size());
  if (traj.failed) {
    std::fprintf(stderr, "simulation failed: %s\n", traj.error.c_str());
    return 1;
  }
  return 0;
}

int cmd_degiorgi(const Flags& f) {
  RunConfig rc = load(f);
  if (f.dry_run) {
    print_plan(rc, "degiorgi");
    return 0;
  }
  if (!print_validation(rc)) return 1;
  fs::path out = rc.output;
  fs::create_directories(out);
  SimulationConfig sim;
  Trajectory traj = run_simulation(rc, sim);
  write_csv(out / "ledger.csv", ledger_table(traj.ledger));
  DeGiorgiReport rep = verify_recursion(traj, rc.diagnostics.degiorgi, sim.init.theta_lo);
  write_csv(out / "degiorgi.csv", degiorgi_table(rep));
  auto j = to_json(rep);
  j["simulation_failed"] = traj.failed;
  j["simulation_error"] = traj.error;
  write_json(out / "degiorgi_report.json", j);
  std::printf("M = %g, omega = %g, U_kmax = %.3e, monotone: %s\n", rep.M, rep.omega, rep.U.back(), rep.monotone ? "yes" : "no");
  if (rep.certified) std::printf("certificate: theta >= %.6g (observed min %.6g)\n", rep.certificate, rep.observed_min_theta);
  else std::printf("no certificate issued\n");
  if (!rep.warning.empty()) std::printf("warning: %s\n", rep.warning.c_str());
  if (traj.failed) {
    std::fprintf(stderr, "simulation failed: %s\n", traj.error.c_str());
    return 1;
  }
  return 0;
}

int cmd_sweep(const Flags& f) {
  RunConfig rc = load(f);
  if (f.dry_run) {
    print_plan(rc, "sweep");
    return 0;
  }
  if (!print_validation(rc)) return 1;
  fs::path out = rc.output;
  fs::create_directories(out);
  InitialData raw = build_initial(rc);
  SimulationConfig base = build_simulation(rc, raw);
  SweepOptions so;
  so.probe_omega = rc.diagnostics.probe_omega;
  SweepReport rep = parameter_sweep(base, raw, rc.mollifier_radius, rc.sweep_param, rc.sweep_levels, so);
  write_json(out / "sweep_report.json", to_json(rep));
  write_csv(out / "sweep.csv", sweep_table(rep));
  std::printf("%s sweep over %zu levels (dt %g)\n", rep.param.c_str(), rep.levels.size(), rep.dt);
  for (const auto& l : rep.levels)
    std::printf("  %s = %-8g %s  min theta %.6g\n", rep.param.c_str(), l.value, l.ok ? "ok    " : "FAILED", l.min_theta);
  std::printf("density gaps non-increasing: %s; pairings converging: %s; estimates bounded: %s\n", rep.rho_converging ? "yes" : "no",
              rep.pairings_converging ? "yes" : "no", rep.estimates_bounded ? "yes" : "no");
  return rep.all_ok ? 0 : 1;
}

int cmd_report(const Flags& f) {
  fs::path out = !f.out.empty() ? fs::path(f.out) : fs::path(f.config.empty() ? "out" : load(f).output);
  bool any = false;
  if (fs::exists(out / "report.json")) {
    auto j = read_json(out / "report.json");
    std::printf("simulation: %s, steps %s, min theta %s\n", j["failed"].get<bool>() ? "failed" : "completed",
                j["stats"]["steps"].dump().c_str(), j["min_theta"].dump().c_str());
    std::printf("  energy inequality: %s\n", j["energy_inequality"]["passed"].get<bool>() ? "pass" : "fail");
    int pass = 0, total = 0;
    for (const auto& r : j["renormalized_temperature"]) {
      ++total;
      pass += r["passed"].get<bool>();
    }
    std::printf("  renormalized temperature inequality: %d/%d pass\n", pass, total);
    any = true;
  }
  if (fs::exists(out / "degiorgi_report.json")) {
    auto j = read_json(out / "degiorgi_report.json");
    std::printf("de giorgi: M %s, certified %s, certificate %s\n", j["M"].dump().c_str(), j["certified"].dump().c_str(),
                j["certificate"].dump().c_str());
    any = true;
  }
  if (fs::exists(out / "sweep_report.json")) {
    auto j = read_json(out / "sweep_report.json");
    std::printf("sweep: %s, levels %zu, pairings converging %s, estimates bounded %s\n", j["param"].get<std::string>().c_str(),
                j["levels"].size(), j["pairings_converging"].dump().c_str(), j["estimates_bounded"].dump().c_str());
    any = true;
  }
  if (!any) {
    std::fprintf(stderr, "no reports found in %s\n", out.string().c_str());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized heat-conducting compressible flow laboratory"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", flags.config, "run configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_flag("--dry-run", flags.dry_run, "print the resolved plan and exit");
  };
  auto* validate = app.add_subcommand("validate", "check the constitutive hypotheses");
  auto* simulate_cmd = app.add_subcommand("simulate", "run one simulation with diagnostics");
  auto* degiorgi = app.add_subcommand("degiorgi", "run and analyse level energies");
  auto* sweep = app.add_subcommand("sweep", "parameter continuation sweep");
  auto* report = app.add_subcommand("report", "summarise reports in an output directory");
  for (auto* s : {validate, simulate_cmd, degiorgi, sweep}) add_common(s, true);
  add_common(report, false);
  sweep->add_option("--param", flags.param, "epsilon, eta or delta");
  sweep->add_option("--levels", flags.levels, "comma separated decreasing values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (validate->parsed()) return cmd_validate(flags);
    if (simulate_cmd->parsed()) return cmd_simulate(flags);
    if (degiorgi->parsed()) return cmd_degiorgi(flags);
    if (sweep->parsed()) return cmd_sweep(flags);
    if (report->parsed()) return cmd_report(flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
