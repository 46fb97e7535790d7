#include "nslab/continuation.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <future>

#include "nslab/error.hpp"
#include "nslab/operators.hpp"
#include "nslab/viscous.hpp"

namespace nslab {

ScalarField cutoff_Tk(const ScalarField& rho, double k) {
  return map(rho, [k](double r) { return std::min(r, k); });
}

double low_density_step(double z, double omega) {
  if (z <= omega) return 0.0;
  if (z >= 2.0 * omega) return -1.0;
  double s = (z - omega) / omega;
  return -s * s * (3.0 - 2.0 * s);
}

LowDensityWeight low_density_weight(const ScalarField& rho, double omega, double tolerance) {
  if (!(omega > 0.0)) throw DomainError("low density weight needs omega > 0");
  const Grid& g = rho.grid();
  const long n = static_cast<long>(g.size());
  ScalarField B = map(rho, [omega](double z) { return low_density_step(z, omega); });
  double mean = integrate(B) / g.volume();
  Eigen::VectorXd rhs(n);
  for (long k = 0; k < n; ++k) rhs[k] = -(B[static_cast<std::size_t>(k)] - mean);
  LowDensityWeight out{ScalarField(g), 0.0, 0};
  if (rhs.cwiseAbs().maxCoeff() == 0.0) return out;
  // -Lap is positive semidefinite with constants as kernel; the right side is orthogonal to it
  Eigen::SparseMatrix<double> A = -laplacian_matrix(g, Boundary::Neumann);
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tolerance);
  cg.setMaxIterations(static_cast<int>(20 * n));
  cg.compute(A);
  Eigen::VectorXd x = cg.solve(rhs);
  out.iterations = static_cast<int>(cg.iterations());
  if (cg.info() != Eigen::Success) throw SolverError("low density weight solve did not converge", cg.error());
  x.array() -= x.mean();
  for (long k = 0; k < n; ++k) out.w[static_cast<std::size_t>(k)] = x[k];
  ScalarField lap = laplacian(out.w, Boundary::Neumann);
  for (std::size_t k = 0; k < g.size(); ++k) out.residual = std::max(out.residual, std::abs(lap[k] - (B[k] - mean)));
  return out;
}

IntegrabilityProbe temperature_integrability_probe(const Trajectory& traj, double omega) {
  if (!(omega > 0.0)) throw DomainError("probe needs omega > 0");
  std::vector<double> t, hi, lo;
  for (const auto& s : traj.snapshots) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < s.rho.size(); ++k) {
      double c = s.theta[k] * s.theta[k] * s.theta[k];
      (s.rho[k] >= omega ? a : b) += c;
    }
    double vol = s.rho.grid().cell_volume();
    t.push_back(s.t);
    hi.push_back(a * vol);
    lo.push_back(b * vol);
  }
  return {trapezoid(t, hi), trapezoid(t, lo)};
}

const std::vector<std::string>& level_metric_names() {
  static const std::vector<std::string> names{
      "min_theta",       "sup_kinetic", "sup_rho_gamma", "sup_thermal",    "diss_viscous",  "diss_cubic",
      "ln_theta_h1",     "theta_h1",    "u_h1",          "theta_power_h1", "probe_high",    "probe_low",
      "mass_drift"};
  return names;
}

std::vector<double> level_metrics(const LevelSummary& s) {
  return {s.min_theta,   s.sup_kinetic, s.sup_rho_gamma,  s.sup_thermal, s.diss_viscous, s.diss_cubic, s.ln_theta_h1,
          s.theta_h1,    s.u_h1,        s.theta_power_h1, s.probe.high,  s.probe.low,   s.mass_drift};
}

namespace {

double h1_sq(const ScalarField& f) { return inner(f, f) + integrate(grad_squared(f, Boundary::Neumann)); }

double h1_sq_dirichlet(const ScalarField& f) { return inner(f, f) + integrate(grad_squared(f, Boundary::Dirichlet)); }

}  // namespace

LevelSummary summarize_level(const Trajectory& traj, double value, const SweepOptions& opt) {
  LevelSummary s;
  s.value = value;
  s.ok = !traj.failed;
  s.error = traj.error;
  s.steps = traj.stats.steps;
  if (traj.snapshots.empty()) return s;
  const auto& cs = traj.cs;
  const auto& p = traj.params;
  const double gamma = cs.gamma();
  const double l = 0.5;
  auto bank = test_bank();
  std::vector<double> t, lnh, thh, uh, tph;
  std::vector<std::vector<double>> pair(bank.size());
  std::vector<ScalarField> chis;
  const Grid& g = traj.snapshots.front().rho.grid();
  for (const auto& phi : bank) chis.push_back(phi.chi(g));
  double T = traj.snapshots.back().t;
  s.min_theta = HUGE_VAL;
  for (const auto& st : traj.snapshots) {
    t.push_back(st.t);
    s.min_theta = std::min(s.min_theta, st.theta.min());
    double kin = 0.0, rg = 0.0, th = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      double u2 = 0.0;
      for (int a = 0; a < g.dim; ++a) u2 += st.u[a][k] * st.u[a][k];
      kin += st.rho[k] * u2;
      rg += std::pow(st.rho[k], gamma);
      th += (p.delta + st.rho[k]) * st.theta[k];
    }
    double vol = g.cell_volume();
    s.sup_kinetic = std::max(s.sup_kinetic, kin * vol);
    s.sup_rho_gamma = std::max(s.sup_rho_gamma, rg * vol);
    s.sup_thermal = std::max(s.sup_thermal, th * vol);
    lnh.push_back(h1_sq(map(st.theta, [](double v) { return std::log(std::max(v, 1e-300)); })));
    thh.push_back(h1_sq(st.theta));
    double uu = 0.0;
    for (int a = 0; a < g.dim; ++a) uu += h1_sq_dirichlet(st.u[a]);
    uh.push_back(uu);
    tph.push_back(h1_sq(map(st.theta, [l](double v) { return std::pow(v, 0.5 * (3.0 - l)); })));
    ScalarField evp = effective_viscous_pressure(st, cs, p);
    for (std::size_t b = 0; b < bank.size(); ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) acc += evp[k] * st.rho[k] * chis[b][k];
      pair[b].push_back(bank[b].psi(st.t, T > 0.0 ? T : 1.0) * acc * vol);
    }
  }
  s.ln_theta_h1 = std::sqrt(trapezoid(t, lnh));
  s.theta_h1 = std::sqrt(trapezoid(t, thh));
  s.u_h1 = std::sqrt(trapezoid(t, uh));
  s.theta_power_h1 = std::sqrt(trapezoid(t, tph));
  for (auto& series : pair) s.pairings.push_back(trapezoid(t, series));
  const auto& L = traj.ledger;
  if (L.size()) {
    s.diss_viscous = L.diss_viscous.back();
    s.diss_cubic = L.diss_cubic.back();
  }
  s.probe = temperature_integrability_probe(traj, opt.probe_omega);
  double m0 = integrate(traj.snapshots.front().rho), m1 = integrate(traj.snapshots.back().rho);
  s.mass_drift = std::abs(m1 - m0) / m0;
  return s;
}

double rho_l1_distance(const Trajectory& a, const Trajectory& b) {
  if (a.snapshots.size() != b.snapshots.size()) throw DomainError("trajectories have different snapshot counts");
  std::vector<double> t, d;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const auto& sa = a.snapshots[i];
    const auto& sb = b.snapshots[i];
    if (std::abs(sa.t - sb.t) > 1e-12 * std::max(1.0, std::abs(sa.t))) throw DomainError("trajectories have different snapshot times");
    require_same_grid(sa.rho.grid(), sb.rho.grid());
    t.push_back(sa.t);
    d.push_back(integrate(map(sa.rho, sb.rho, [](double x, double y) { return std::abs(x - y); })));
  }
  return trapezoid(t, d);
}

SweepReport parameter_sweep(const SimulationConfig& base, const InitialData& raw, double radius, const std::string& param,
                            const std::vector<double>& schedule, const SweepOptions& opt) {
  if (param != "epsilon" && param != "eta" && param != "delta") throw DomainError("sweep parameter must be epsilon, eta or delta");
  if (schedule.size() < 3) throw DomainError("sweep schedule needs at least 3 levels");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] < schedule[i - 1])) throw DomainError("sweep schedule must be strictly decreasing");

  std::vector<SimulationConfig> cfgs;
  for (double v : schedule) {
    SimulationConfig c = base;
    if (param == "epsilon") c.params.epsilon = v;
    else if (param == "eta") c.params.eta = v;
    else {
      c.params.delta = v;
      c.init = regularize_initial_data(raw, v, c.params.beta, radius);
    }
    c.params.validate(c.cs);
    cfgs.push_back(std::move(c));
  }
  double dt = base.dt.dt;
  if (base.dt.kind == DtPolicy::Kind::Cfl) {
    dt = HUGE_VAL;
    for (const auto& c : cfgs) dt = std::min(dt, stable_dt(state_from(c.init), c.cs, c.params, c.dt));
    dt *= 0.5;
  }
  for (auto& c : cfgs) {
    c.dt.kind = DtPolicy::Kind::Fixed;
    c.dt.dt = dt;
  }

  SweepReport rep;
  rep.param = param;
  rep.schedule = schedule;
  rep.dt = dt;
  std::vector<Trajectory> trajs(cfgs.size());
  if (opt.parallel) {
    std::vector<std::future<Trajectory>> jobs;
    for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&c] { return simulate(c); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) trajs[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < cfgs.size(); ++i) trajs[i] = simulate(cfgs[i]);
  }
  for (std::size_t i = 0; i < trajs.size(); ++i) rep.levels.push_back(summarize_level(trajs[i], schedule[i], opt));

  rep.all_ok = true;
  for (const auto& l : rep.levels) rep.all_ok = rep.all_ok && l.ok;
  const std::size_t nb = test_bank().size();
  for (std::size_t i = 1; i < trajs.size(); ++i) {
    bool both = rep.levels[i - 1].ok && rep.levels[i].ok;
    rep.rho_l1_gaps.push_back(both ? rho_l1_distance(trajs[i - 1], trajs[i]) : NAN);
    std::vector<double> gaps(nb, NAN);
    if (both)
      for (std::size_t b = 0; b < nb; ++b) gaps[b] = std::abs(rep.levels[i].pairings[b] - rep.levels[i - 1].pairings[b]);
    rep.pairing_gaps.push_back(gaps);
  }

  std::size_t ng = rep.rho_l1_gaps.size();
  double g1 = rep.rho_l1_gaps[ng - 2], g2 = rep.rho_l1_gaps[ng - 1];
  rep.rho_converging = std::isfinite(g1) && std::isfinite(g2) && g2 <= g1;
  rep.pairings_converging = true;
  for (std::size_t b = 0; b < nb; ++b) {
    double a1 = rep.pairing_gaps[ng - 2][b], a2 = rep.pairing_gaps[ng - 1][b];
    double scale = std::abs(rep.levels.back().pairings.empty() ? 0.0 : rep.levels.back().pairings[b]);
    double floor = opt.noise_floor * std::max(scale, 1e-300);
    bool ok = std::isfinite(a1) && std::isfinite(a2) && (a2 < a1 || (a1 <= floor && a2 <= floor));
    rep.pairing_flags.push_back(ok);
    rep.pairings_converging = rep.pairings_converging && ok;
  }

  rep.estimates_bounded = rep.all_ok;
  const auto& names = level_metric_names();
  if (rep.all_ok) {
    auto first = level_metrics(rep.levels.front());
    for (std::size_t m = 1; m < names.size(); ++m) {
      if (names[m] == "mass_drift") continue;
      for (const auto& l : rep.levels) {
        double v = level_metrics(l)[m];
        if (!std::isfinite(v) || v > opt.bound_factor * first[m] + 1e-14) {
          rep.estimates_bounded = false;
          rep.unbounded.push_back(names[m]);
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace nslab
