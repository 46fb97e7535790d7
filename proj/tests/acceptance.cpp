// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nslab/config.hpp"
#include "nslab/continuation.hpp"
#include "nslab/degiorgi.hpp"
#include "nslab/diagnostics.hpp"
#include "nslab/outputs.hpp"

#ifndef NSLAB_CONFIG_DIR
#define NSLAB_CONFIG_DIR "configs"
#endif

using namespace nslab;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (auto& v : f.values()) v = d(rng);
  return f;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

SimulationConfig mixing_run(int n, double horizon) {
  Grid g = Grid::line(n);
  InitialSpec spec;
  spec.rho = {"gaussian", 1.0, 0.5, 0.1};
  spec.theta = {"gaussian", 1.0, 0.5, 0.15};
  spec.velocity = {"bump", 0.5};
  SimulationConfig c;
  c.cs = constitutive_preset("ideal-like");
  c.params = {0.01, 0.01, 0.01, 5.0};
  c.init = regularize_initial_data(make_initial_data(g, spec), 0.01, 5.0);
  c.horizon = horizon;
  c.snapshot_every = 50;
  return c;
}

// Summation by parts, discrete divergence theorem and Laplacian order.
Verdict c1_operators() {
  std::mt19937_64 rng(101);
  double sbp = 0.0, divthm = 0.0, facethm = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    Grid g = rep % 2 ? Grid::rectangle(64, 48, 1.0, 0.75) : Grid::line(128);
    ScalarField f = random_field(g, rng);
    VectorField v(g);
    for (int a = 0; a < g.dim; ++a) v[a] = random_field(g, rng);
    VectorField gf = grad(f);
    ScalarField dv = div(v);
    double scale = l2_norm(gf) * l2_norm(v) + l2_norm(f) * l2_norm(dv);
    sbp = std::max(sbp, std::abs(inner(gf, v) + inner(f, dv)) / scale);
    // zero trace: no boundary flux
    divthm = std::max(divthm, std::abs(integrate(dv)) / (g.volume() * std::max(dv.max(), -dv.min())));
    // face fluxes: the integral of face_div equals the net boundary flux
    FaceField F = face_grad(f, Boundary::Dirichlet);
    double flux = 0.0, mag = 0.0;
    int nx = g.cells[0], ny = g.dim == 2 ? g.cells[1] : 1;
    double dy = g.dim == 2 ? g.spacing(1) : 1.0, dx = g.spacing(0);
    for (int j = 0; j < ny; ++j)
      flux += dy * (F.normal[0][F.face_index(0, nx, j)] - F.normal[0][F.face_index(0, 0, j)]);
    if (g.dim == 2)
      for (int i = 0; i < nx; ++i) flux += dx * (F.normal[1][F.face_index(1, i, ny)] - F.normal[1][F.face_index(1, i, 0)]);
    for (int a = 0; a < g.dim; ++a)
      for (double x : F.normal[a]) mag += std::abs(x) * g.cell_volume() / g.spacing(a);
    facethm = std::max(facethm, std::abs(integrate(face_div(F)) - flux) / mag);
  }
  auto err = [](int n) {
    Grid g = Grid::line(n);
    auto f = ScalarField::from_function(g, [](double x, double) { return std::cos(pi * x) + 0.3 * std::cos(3 * pi * x); });
    auto ex = ScalarField::from_function(g, [](double x, double) { return -pi * pi * (std::cos(pi * x) + 2.7 * std::cos(3 * pi * x)); });
    return max_abs_diff(laplacian(f, Boundary::Neumann), ex);
  };
  auto err2 = [](int n) {
    Grid g = Grid::rectangle(n, n);
    auto f = ScalarField::from_function(g, [](double x, double y) { return std::sin(pi * x) * std::sin(2 * pi * y); });
    auto ex = ScalarField::from_function(g, [](double x, double y) { return -5 * pi * pi * std::sin(pi * x) * std::sin(2 * pi * y); });
    return max_abs_diff(laplacian(f, Boundary::Dirichlet), ex);
  };
  double o1 = std::log2(err(128) / err(256)), o2 = std::log2(err2(64) / err2(128));
  bool ok = sbp <= 1e-12 && divthm <= 1e-12 && facethm <= 1e-12 && std::min(o1, o2) >= 1.9;
  return {ok, fmt("sbp %.2e, div thm %.2e, face div thm %.2e (<= 1e-12); laplacian order %.3f (1D), %.3f (2D) (>= 1.9)", sbp, divthm,
                  facethm, o1, o2)};
}

Verdict c2_mass() {
  SimulationConfig c = mixing_run(128, 1.0);
  c.dt = {DtPolicy::Kind::Fixed, 1e-3};
  c.max_steps = 1000;
  Trajectory tr = simulate(c);
  if (tr.failed) return {false, "run failed: " + tr.error};
  double m0 = integrate(tr.snapshots.front().rho), drift = 0.0;
  for (const auto& s : tr.snapshots) drift = std::max(drift, std::abs(integrate(s.rho) - m0) / m0);
  bool ok = tr.stats.steps == 1000 && drift <= 1e-10;
  return {ok, fmt("%ld steps, max relative mass drift %.2e (<= 1e-10)", tr.stats.steps, drift)};
}

Verdict c3_oracles() {
  // continuity at rest against a dense LU of I - dt eps Lap (three-point Neumann stencil)
  int n = 128;
  Grid g = Grid::line(n);
  FluidState s;
  s.rho = ScalarField::from_function(g, [](double x, double) { return 1.0 + std::exp(-50.0 * (x - 0.3) * (x - 0.3)); });
  s.theta = ScalarField(g, 1.0);
  s.u = VectorField(g);
  double eps = 0.05, dt = 1e-3, h = g.spacing(0);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) L(i, i - 1) = 1.0, L(i, i) -= 1.0;
    if (i < n - 1) L(i, i + 1) = 1.0, L(i, i) -= 1.0;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - dt * eps / (h * h) * L);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(s.rho.raw().data(), n);
  double cont = 0.0;
  for (int k = 0; k < 50; ++k) {
    x = lu.solve(x);
    s.rho = step_continuity(s, eps, dt);
    for (int i = 0; i < n; ++i) cont = std::max(cont, std::abs(x[i] - s.rho[static_cast<std::size_t>(i)]));
  }

  // (delta + rho) theta' = -delta theta^3, rho = 1, against adaptive dopri5
  double delta = 0.01, th0 = 1.0, T = 1.0, tdt = 2e-5;
  Grid gt = Grid::line(8);
  Stepper st(gt, constitutive_preset("ideal-like"), {0.0, 0.0, delta, 5.0});
  FluidState u;
  u.rho = ScalarField(gt, 1.0);
  u.theta = ScalarField(gt, th0);
  u.u = VectorField(gt);
  FaceField flux = mass_flux(u.rho, u.u);
  long steps = std::lround(T / tdt);
  for (long k = 0; k < steps; ++k) u.theta = st.temperature(u, u.rho, u.u, flux, tdt);
  using State = std::vector<double>;
  State y{th0};
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-15, 1e-15),
                          [&](const State& q, State& dq, double) { dq[0] = -delta * q[0] * q[0] * q[0] / (delta + 1.0); }, y, 0.0, T,
                          1e-3);
  double temp = 0.0;
  for (std::size_t k = 0; k < gt.size(); ++k) temp = std::max(temp, std::abs(u.theta[k] - y[0]));
  bool ok = cont <= 1e-10 && temp <= 1e-8;
  return {ok, fmt("continuity vs dense LU %.2e per step (<= 1e-10); temperature vs ODE at T=1 %.2e (<= 1e-8, dt %g)", cont, temp, tdt)};
}

SimulationConfig shear_run(double heat_source) {
  Grid g = Grid::line(128);
  InitialSpec spec;
  spec.rho = {"constant", 1.0, 0.0, 0.1};
  spec.theta = {"constant", 1.0, 0.0, 0.1};
  spec.velocity = {"bump", 0.5};
  SimulationConfig c;
  c.cs = constitutive_preset("ideal-like");
  c.params = {0.01, 0.01, 0.01, 5.0};
  c.init = regularize_initial_data(make_initial_data(g, spec), 0.01, 5.0);
  c.horizon = 1.0;
  c.dt = {DtPolicy::Kind::Cfl, 1e-2, 0.4};
  c.snapshot_every = 10;
  c.forcing.heat_source = heat_source;
  return c;
}

Verdict c4_energy() {
  Trajectory tr = simulate(shear_run(0.0));
  if (tr.failed) return {false, "run failed: " + tr.error};
  InequalityReport r = energy_inequality_check(tr);
  double defect = first_step_defect(tr);
  Trajectory forced = simulate(shear_run(0.05));
  if (forced.failed) return {false, "forced run failed: " + forced.error};
  EnergyCheckOptions o;
  o.calibrated_defect = defect;
  InequalityReport f = energy_inequality_check(forced, o);
  bool ok = r.passed && !f.passed;
  return {ok, fmt("max residual %.3e, max residual - tol_E %.3e over %zu ledger times; forced control %s (residual %.3e vs tol %.3e)",
                  r.max_residual, r.max_excess, r.residual.size(), f.passed ? "PASSED (bad)" : "fails", f.max_residual,
                  f.tolerance.back())};
}

RunConfig lower_bound_config() { return load_config(fs::path(NSLAB_CONFIG_DIR) / "lower_bound1d.ini"); }

struct LowerBoundRuns {
  RunConfig rc;
  InitialData raw;
  SimulationConfig base;
  SweepReport eta;
};

const LowerBoundRuns& lower_bound_runs() {
  static LowerBoundRuns runs = [] {
    LowerBoundRuns r;
    r.rc = lower_bound_config();
    r.raw = build_initial(r.rc);
    r.base = build_simulation(r.rc, r.raw);
    SweepOptions o;
    o.probe_omega = r.rc.diagnostics.probe_omega;
    r.eta = parameter_sweep(r.base, r.raw, r.rc.mollifier_radius, "eta", {1e-1, 1e-2, 1e-3}, o);
    return r;
  }();
  return runs;
}

Verdict c5_lower_bound() {
  const auto& runs = lower_bound_runs();
  double lo = HUGE_VAL, hi = 0.0;
  bool all = true;
  std::string mins;
  for (const auto& l : runs.eta.levels) {
    all = all && l.ok && l.min_theta > 0.0;
    lo = std::min(lo, l.min_theta);
    hi = std::max(hi, l.min_theta);
    mins += fmt(" %.5f", l.min_theta);
  }
  double spread = (hi - lo) / hi;
  bool ok = all && spread <= 0.2;
  return {ok, fmt("theta_lo 0.5, min theta per eta level:%s; relative spread %.2e (<= 0.2)", mins.c_str(), spread)};
}

Verdict c6_degiorgi() {
  // (a)
  double ida = 0.0;
  for (double M : {1.0, 2.5, 10.0})
    for (double alpha : {1.5, 2.0, 3.0})
      for (int k = 1; k <= 40; ++k)
        ida = std::max(ida, std::abs(std::pow(level_log_gap(M, k), -alpha) / (std::pow(2.0, k * alpha) / std::pow(M, alpha)) - 1.0));
  // (b)
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double M = 6.0, omega = 1e-6;
  auto C = level_sequence(M, 12);
  long violations = 0, checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Grid g = trial % 2 ? Grid::rectangle(16, 16) : Grid::line(128);
    ScalarField th(g);
    for (auto& v : th.values()) v = std::exp(-M * U(rng));
    for (int k = 1; k <= 12; ++k) {
      Truncation cur = truncation_phi(th, C[k], omega), prev = truncation_phi(th, C[k - 1], omega);
      for (double alpha : {1.5, 2.0, 3.0}) {
        double f = std::pow(level_log_gap(M, k), -alpha);
        for (std::size_t j = 0; j < th.size(); ++j, ++checked)
          if (cur.indicator[j] > f * std::pow(prev.phi[j], alpha) * (1.0 + 1e-12)) ++violations;
      }
    }
  }
  // (c)
  int match = 0;
  for (int trial = 0; trial < 100; ++trial) {
    double c = 0.1 + 2.0 * U(rng), A = 1.0 + 3.0 * U(rng), b1 = 1.1 + U(rng), b2 = b1 + U(rng), U0 = 0.05 + 0.95 * U(rng);
    double K = std::exp(8.0 * U(rng) - 2.0);
    RecursionResult r = recursion_lemma(U0, c, A, b1, b2, K, 200);
    long double u = U0;
    bool finite = true;
    for (int k = 1; k <= 200 && finite; ++k) {
      u = static_cast<long double>(c) * std::pow(static_cast<long double>(A), k) / K * (std::pow(u, b1) + std::pow(u, b2));
      finite = u <= 1e300L;
    }
    bool truth = finite && u <= 1e-12L;
    if (truth == r.converged) ++match;
  }
  // (d)
  const auto& runs = lower_bound_runs();
  Trajectory tr = simulate(runs.base);
  if (tr.failed) return {false, "criterion 5 run failed: " + tr.error};
  DeGiorgiConfig cfg = runs.rc.diagnostics.degiorgi;
  cfg.k_max = 30;
  double theta_lo = runs.rc.initial.theta_lo;
  DeGiorgiReport rep = verify_recursion(tr, cfg, theta_lo);
  bool d = rep.monotone && rep.U.back() <= 1e-10 && rep.certified && std::exp(-rep.M / 2) < theta_lo &&
           rep.observed_min_theta >= rep.certificate;
  bool ok = ida <= 1e-12 && violations == 0 && match == 100 && d;
  return {ok, fmt("(a) %.2e (<= 1e-12); (b) %ld/%ld cells violate; (c) %d/100 verdicts match; (d) M %.4f, U_0 %.3e, U_30 %.1e, %s, "
                  "certificate theta >= %.4f (observed min %.4f)",
                  ida, violations, checked, match, rep.M, rep.U.front(), rep.U.back(), rep.monotone ? "non-increasing" : "NOT monotone",
                  rep.certificate, rep.observed_min_theta)};
}

Verdict c7_poincare() {
  double spread = 0.0;
  std::string parts;
  bool finite = true;
  for (const Grid& g : {Grid::line(128), Grid::rectangle(64, 64)}) {
    PoincareBatch a = poincare_batch(g, 4.0, 0.5, 10.0, 1000, 71), b = poincare_batch(g, 4.0, 0.5, 10.0, 1000, 72);
    finite = finite && std::isfinite(a.sup_ratio) && std::isfinite(b.sup_ratio) && a.samples == 1000 && b.samples == 1000;
    double s = std::abs(a.sup_ratio - b.sup_ratio) / std::max(a.sup_ratio, b.sup_ratio);
    spread = std::max(spread, s);
    parts += fmt(" %dD sup %.4f / %.4f;", g.dim, a.sup_ratio, b.sup_ratio);
  }
  return {finite && spread <= 0.1, fmt("1000 samples per batch, M1 0.5, M2 10, gamma 4:%s max relative difference %.3f (<= 0.1)", parts.c_str(),
                                       spread)};
}

Verdict c8_renormalizers() {
  Renormalizer inv = make_renormalizer(RenormalizerSpec::inverse_power(1.0));
  Renormalizer ex = make_renormalizer(RenormalizerSpec::from_law(ScalarLaw::custom(
      [](double z) { return std::exp(-z); }, "exp", [](double z) { return -std::exp(-z); }, [](double z) { return std::exp(-z); })));
  bool fam = true;
  std::string bad;
  std::vector<RenormalizerSpec> specs;
  for (double l : {0.25, 0.5, 0.75, 1.0}) specs.push_back(RenormalizerSpec::inverse_power(l));
  for (double xi : {1.0, 0.1, 0.01, 1e-3}) specs.push_back(RenormalizerSpec::xi_family(xi));
  for (double w : {1e-2, 1e-4, 1e-6}) specs.push_back(RenormalizerSpec::truncated_inverse(w, 1.0));
  for (const auto& s : specs) {
    Renormalizer r = make_renormalizer(s);
    if (!r.admissible()) fam = false, bad += " " + r.name();
  }
  bool ok = inv.admissible() && inv.max_gap() <= 1e-9 && !ex.admissible() && fam;
  return {ok, fmt("1/(1+z): admissible, max |h''h - 2h'^2| %.2e (<= 1e-9); e^-z: %s (%s); %zu family members admissible%s",
                  inv.max_gap(), ex.admissible() ? "admissible (bad)" : "rejected", ex.violation().c_str(), specs.size(),
                  fam ? "" : (", failing:" + bad).c_str())};
}

const std::vector<std::string> kSurrogates{"sup_kinetic", "sup_rho_gamma", "sup_thermal", "diss_viscous", "diss_cubic"};

Verdict c9_delta_sweep() {
  const auto& runs = lower_bound_runs();
  SweepOptions o;
  o.probe_omega = runs.rc.diagnostics.probe_omega;
  SweepReport r = parameter_sweep(runs.base, runs.raw, runs.rc.mollifier_radius, "delta", {1e-1, 1e-2, 1e-3}, o);
  const auto& names = level_metric_names();
  bool ok = true;
  std::string detail;
  for (const auto& s : r.levels) ok = ok && s.ok;
  for (const auto& m : kSurrogates) {
    std::size_t col = std::find(names.begin(), names.end(), m) - names.begin();
    double first = level_metrics(r.levels[0])[col], worst = 0.0;
    for (const auto& s : r.levels) worst = std::max(worst, level_metrics(s)[col] / first);
    ok = ok && worst <= 2.0;
    detail += fmt(" %s %.3f;", m.c_str(), worst);
  }
  return {ok, "max level value / first-level value (<= 2):" + detail};
}

Verdict c10_pairings() {
  const auto& runs = lower_bound_runs();
  SweepOptions o;
  o.probe_omega = runs.rc.diagnostics.probe_omega;
  SweepReport r = parameter_sweep(runs.base, runs.raw, runs.rc.mollifier_radius, "epsilon", {1e-1, 1e-2, 1e-3}, o);
  int good = 0;
  double worst = 0.0;
  for (std::size_t b = 0; b < r.pairing_flags.size(); ++b) {
    good += r.pairing_flags[b];
    worst = std::max(worst, r.pairing_gaps[1][b] / std::max(r.pairing_gaps[0][b], 1e-300));
  }
  bool ok = r.pairings_converging && good == 12;
  return {ok, fmt("%d/12 bank pairings with decreasing consecutive gaps; worst gap ratio %.3f (< 1)", good, worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict c11_determinism() {
  fs::path root = fs::temp_directory_path() / "nslab_acceptance_determinism";
  fs::remove_all(root);
  RunConfig rc = load_config(fs::path(NSLAB_CONFIG_DIR) / "bump1d.ini");
  int identical = 0, total = 0;
  std::vector<std::string> first;
  for (int rep = 0; rep < 2; ++rep) {
    fs::path d = root / std::to_string(rep);
    fs::create_directories(d);
    InitialData raw = build_initial(rc);
    SimulationConfig sim = build_simulation(rc, raw);
    Trajectory tr = simulate(sim);
    write_csv(d / "ledger.csv", ledger_table(tr.ledger));
    DeGiorgiConfig cfg = rc.diagnostics.degiorgi;
    write_csv(d / "degiorgi.csv", degiorgi_table(verify_recursion(tr, cfg, sim.init.theta_lo)));
    SweepOptions o;
    write_csv(d / "sweep.csv", sweep_table(parameter_sweep(build_simulation(rc, raw), raw, rc.mollifier_radius, "eta", {1e-1, 1e-2, 1e-3}, o)));
    std::vector<std::string> files;
    for (const char* f : {"ledger.csv", "degiorgi.csv", "sweep.csv"}) files.push_back(slurp(d / f));
    if (rep == 0) {
      first = files;
    } else {
      for (std::size_t i = 0; i < files.size(); ++i, ++total) identical += files[i] == first[i] && !files[i].empty();
    }
  }
  fs::remove_all(root);
  return {identical == total && total == 3, fmt("%d/%d CSV files byte-identical across repeated runs", identical, total)};
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  std::vector<Item> items{{1, "operators", c1_operators},        {2, "mass conservation", c2_mass},
                          {3, "oracle equivalence", c3_oracles}, {4, "energy inequality", c4_energy},
                          {5, "temperature lower bound", c5_lower_bound}, {6, "De Giorgi machinery", c6_degiorgi},
                          {7, "weighted Poincare", c7_poincare}, {8, "renormalizer admissibility", c8_renormalizers},
                          {9, "delta-sweep estimates", c9_delta_sweep}, {10, "EVP pairing stability", c10_pairings},
                          {11, "determinism", c11_determinism}};
  int failures = 0;
  for (const auto& it : items) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = it.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d %s: %s [%.1f s]\n", v.ok ? "PASS" : "FAIL", it.id, it.name, v.detail.c_str(), sec);
    std::fflush(stdout);
    failures += !v.ok;
  }
  return failures ? 1 : 0;
}
